"""The shuffle and star products on tensor elements and their symmetric forms.

A split interleaves the tensor slots of two elements; the star product
wedges corresponding slots after relabeling the left factors by an
increasing injection g and the right factors by its complement.  On the
symmetric side the shuffle becomes multiset concatenation and the star
product averages over slot matchings (1/n! times the sum over the
symmetric group), which is the monomial form of conjugating by the
symmetrization isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .core import (
    Element,
    FactorTuple,
    IncFn,
    SymElement,
    is_sym_invariant,
    merge_signed,
    relabel_factor,
)

__all__ = [
    "IncFn", "Split", "complement", "shuffle_product", "star_product",
    "sym_star", "sym_shuffle", "invariant_shuffle", "all_splits",
    "all_incfns", "star_incfns",
]


@dataclass(frozen=True)
class Split:
    """A decomposition of [1..total] into left positions and their complement."""

    total: int
    left: tuple[int, ...]

    def __post_init__(self):
        lf = tuple(int(i) for i in self.left)
        object.__setattr__(self, "left", lf)
        for a, b in zip(lf, lf[1:]):
            if a >= b:
                raise ValueError(f"left positions {lf} not strictly increasing")
        if lf and (lf[0] < 1 or lf[-1] > self.total):
            raise ValueError(f"left positions {lf} leave [1..{self.total}]")

    @property
    def right(self) -> tuple[int, ...]:
        inside = set(self.left)
        return tuple(i for i in range(1, self.total + 1) if i not in inside)


def complement(g: IncFn) -> IncFn:
    return g.complement()


def all_splits(n: int, m: int):
    """All splits of [1..n+m] with n left positions."""
    for left in combinations(range(1, n + m + 1), n):
        yield Split(n + m, left)


def all_incfns(domain: int, codomain: int):
    """All increasing injections [1..domain] -> [1..codomain]."""
    for image in combinations(range(1, codomain + 1), domain):
        yield IncFn(domain, codomain, image)


def star_incfns(d: int, e: int, M: int):
    """The injections [M*d] -> [M*(d+e)] admissible for a star product."""
    return all_incfns(M * d, M * (d + e))


def shuffle_product(f: Element, h: Element, split: Split) -> Element:
    """Interleave tensor slots: f's slots go to the left positions of the split."""
    if f.d != h.d or f.M != h.M:
        raise ValueError(f"shape mismatch: {f.bidegree} vs {h.bidegree}")
    n, m = f.n, h.n
    if split.total != n + m or len(split.left) != n:
        raise ValueError(f"split {split} does not fit bidegrees ({f.n}) and ({h.n})")
    left = [i - 1 for i in split.left]
    right = [i - 1 for i in split.right]
    out: dict[FactorTuple, Fraction] = {}
    for kf, cf in f.terms.items():
        for kh, ch in h.terms.items():
            slots: list = [None] * (n + m)
            for k, pos in enumerate(left):
                slots[pos] = kf[k]
            for k, pos in enumerate(right):
                slots[pos] = kh[k]
            key = tuple(slots)
            c = out.get(key, Fraction(0)) + cf * ch
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    return Element(f.d, n + m, f.M, out, _validated=True)


def _check_star_shapes(f, h, g: IncFn) -> IncFn:
    if f.n != h.n or f.M != h.M:
        raise ValueError(f"shape mismatch: {f.bidegree} vs {h.bidegree}")
    M = f.M
    if g.domain != M * f.d or g.codomain != M * (f.d + h.d):
        raise ValueError(
            f"injection [{g.domain}]->[{g.codomain}] does not fit star of "
            f"widths ({f.d},{h.d}) at multiplier {M}")
    return g.complement()


def star_product(f: Element, h: Element, g: IncFn) -> Element:
    """Slotwise signed wedge of g-relabeled f with (g complement)-relabeled h."""
    gc = _check_star_shapes(f, h, g)
    n, M = f.n, f.M
    d = f.d + h.d
    out: dict[FactorTuple, Fraction] = {}
    fready = {kf: tuple(relabel_factor(x, g) for x in kf) for kf in f.terms}
    hready = {kh: tuple(relabel_factor(x, gc) for x in kh) for kh in h.terms}
    for kf, cf in f.terms.items():
        rf = fready[kf]
        for kh, ch in h.terms.items():
            rh = hready[kh]
            sign = 1
            slots = []
            for k in range(n):
                s, merged = merge_signed(rf[k], rh[k])
                if s == 0:
                    sign = 0
                    break
                sign *= s
                slots.append(merged)
            if sign == 0:
                continue
            key = tuple(slots)
            c = out.get(key, Fraction(0)) + sign * cf * ch
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    return Element(d, n, M, out, _validated=True)


def sym_star(f: SymElement, h: SymElement, g: IncFn) -> SymElement:
    """Star product on symmetric elements.

    On monomials this is (1/n!) * sum over all matchings of f's factors to
    h's slots of the product of signed wedges, then canonical sorting.
    """
    gc = _check_star_shapes(f, h, g)
    n, M = f.n, f.M
    d = f.d + h.d
    norm = Fraction(1, factorial(n))
    out: dict[FactorTuple, Fraction] = {}
    fready = {kf: tuple(relabel_factor(x, g) for x in kf) for kf in f.terms}
    hready = {kh: tuple(relabel_factor(x, gc) for x in kh) for kh in h.terms}
    for kf, cf in f.terms.items():
        rf = fready[kf]
        for kh, ch in h.terms.items():
            rh = hready[kh]
            base = cf * ch * norm
            for perm in permutations(range(n)):
                sign = 1
                slots = []
                for k in range(n):
                    s, merged = merge_signed(rf[perm[k]], rh[k])
                    if s == 0:
                        sign = 0
                        break
                    sign *= s
                    slots.append(merged)
                if sign == 0:
                    continue
                key = tuple(sorted(slots))
                c = out.get(key, Fraction(0)) + sign * base
                if c:
                    out[key] = c
                else:
                    out.pop(key, None)
    return SymElement(d, n, M, out, _validated=True)


def sym_shuffle(f: SymElement, h: SymElement) -> SymElement:
    """Commutative multiset-concatenation product on symmetric elements."""
    if f.d != h.d or f.M != h.M:
        raise ValueError(f"shape mismatch: {f.bidegree} vs {h.bidegree}")
    out: dict[FactorTuple, Fraction] = {}
    for kf, cf in f.terms.items():
        for kh, ch in h.terms.items():
            key = tuple(sorted(kf + kh))
            c = out.get(key, Fraction(0)) + cf * ch
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    return SymElement(f.d, f.n + h.n, f.M, out, _validated=True)


def invariant_shuffle(f: Element, h: Element, check: bool = True) -> Element:
    """Sum of shuffle products over all splits; the product on invariants."""
    if f.d != h.d or f.M != h.M:
        raise ValueError(f"shape mismatch: {f.bidegree} vs {h.bidegree}")
    if check and not (is_sym_invariant(f) and is_sym_invariant(h)):
        raise ValueError("invariant_shuffle requires slot-permutation-invariant inputs")
    out = Element(f.d, f.n + h.n, f.M)
    for split in all_splits(f.n, h.n):
        out = out.add_scale(shuffle_product(f, h, split))
    return out
