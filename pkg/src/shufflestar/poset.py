"""The reading-list divisibility order, the monomial order, and tree encoding.

A monomial S of bidegree (d, n) divides T of bidegree (e, m) when T lies in
the two-sided product ideal generated by S.  Unwinding one round of
products, that happens exactly when there are slot positions
k_1 < ... < k_n and a single increasing injection g: [M*d] -> [M*e] with

    T^{k_i}  intersect  image(g)  =  g(S^i)   for every i.

Containment g(S^i) <= T^{k_i} alone is NOT enough: letters outside S^i must
also stay clear of T^{k_i}, because the star product fills the remaining
slots from the complement of g.  The weaker containment-only relation is
kept as `rl_leq_inclusion`; the two genuinely differ (e.g. S = ((1,)),
T = ((3,4)) over M = 2 satisfies the containment form only), and the
divisibility tests pin `rl_leq` to actual ideal membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from itertools import combinations

from .core import Element, IncFn, SymElement, TensorMonomial

__all__ = [
    "RLWitness", "LabeledTree", "rl_leq", "rl_leq_inclusion", "monomial_cmp",
    "leading_term", "encode_tree", "decode_tree", "tree_leq",
    "minimal_elements", "LT", "EQ", "GT",
]

LT, EQ, GT = -1, 0, 1


@dataclass(frozen=True)
class RLWitness:
    """A divisibility certificate: slot positions and the relabeling injection."""

    positions: tuple[int, ...]   # 1-based slots of the larger monomial
    g: IncFn

    def check(self, S: TensorMonomial, T: TensorMonomial, exact: bool = True) -> bool:
        """Verify this witness against the pair it claims to relate."""
        if len(self.positions) != S.n or self.g.domain != S.alphabet \
                or self.g.codomain != T.alphabet:
            return False
        if any(not 1 <= k <= T.n for k in self.positions):
            return False
        img = set(self.g.image)
        for i, k in enumerate(self.positions):
            target = set(T.factors[k - 1])
            mapped = {self.g(x) for x in S.factors[i]}
            if exact:
                if target & img != mapped:
                    return False
            elif not mapped <= target:
                return False
        return True


def _greedy_assign(slot_sets: Sequence[frozenset], letter_sigs: Sequence[frozenset],
                   codomain: int, exact: bool) -> Optional[tuple[int, ...]]:
    """Least increasing assignment with per-letter membership constraints.

    letter_sigs[l] is the set of slot indices whose factor contains letter
    l+1.  A value v is allowed for that letter when v lies in every listed
    slot set and (in exact mode) in no other.  Greedy minimal choice is
    complete here: any valid assignment dominates the greedy one pointwise.
    """
    # signature of each codomain value: which slot sets contain it
    nslots = len(slot_sets)
    val_sig = []
    for v in range(1, codomain + 1):
        val_sig.append(frozenset(i for i in range(nslots) if v in slot_sets[i]))
    out = []
    prev = 0
    for sig in letter_sigs:
        choice = None
        for v in range(prev + 1, codomain + 1):
            ok = val_sig[v - 1] == sig if exact else sig <= val_sig[v - 1]
            if ok:
                choice = v
                break
        if choice is None:
            return None
        out.append(choice)
        prev = choice
    return tuple(out)


def _rl_search(S: TensorMonomial, T: TensorMonomial, exact: bool) -> Optional[RLWitness]:
    if S.M != T.M:
        raise ValueError(f"multiplier mismatch: {S.M} vs {T.M}")
    if S.d > T.d or S.n > T.n:
        return None
    dom, cod = S.alphabet, T.alphabet
    letter_sigs = [frozenset(i for i in range(S.n) if (l + 1) in set(S.factors[i]))
                   for l in range(dom)]
    for pos in combinations(range(1, T.n + 1), S.n):
        slot_sets = [frozenset(T.factors[k - 1]) for k in pos]
        image = _greedy_assign(slot_sets, letter_sigs, cod, exact)
        if image is not None:
            return RLWitness(pos, IncFn(dom, cod, image))
    return None


def rl_leq(S: TensorMonomial, T: TensorMonomial) -> Optional[RLWitness]:
    """Divisibility of reading lists; a witness iff T is a product multiple of S."""
    return _rl_search(S, T, exact=True)


def rl_leq_inclusion(S: TensorMonomial, T: TensorMonomial) -> Optional[RLWitness]:
    """The containment-only variant: g(S^i) inside T^{k_i}, nothing more."""
    return _rl_search(S, T, exact=False)


def monomial_cmp(a: TensorMonomial, b: TensorMonomial) -> int:
    """Slotwise lexicographic order; returns LT, EQ or GT."""
    if (a.d, a.n, a.M) != (b.d, b.n, b.M):
        raise ValueError(f"bidegree mismatch: {(a.d,a.n,a.M)} vs {(b.d,b.n,b.M)}")
    if a.factors < b.factors:
        return LT
    if a.factors > b.factors:
        return GT
    return EQ


def leading_term(f: Element | SymElement):
    """The order-maximal monomial of f with its coefficient."""
    if f.is_zero():
        raise ValueError("leading term of the zero element")
    key = max(f.terms)
    return f.terms[key], TensorMonomial(f.d, f.n, f.M, key)


@dataclass(frozen=True)
class LabeledTree:
    """Path-branch tree encoding of a reading list.

    Branch j has one vertex per alphabet letter k, labeled
    (k, j, membership vector of k), the membership vector carrying j at
    position j when letter k occurs in factor j and 0 otherwise.
    """

    d: int
    M: int
    n: int
    root: tuple
    branches: tuple[tuple[tuple, ...], ...]


def _psi(k: int, S: TensorMonomial) -> tuple[int, ...]:
    return tuple((j + 1) if k in S.factors[j] else 0 for j in range(S.n))


def encode_tree(S: TensorMonomial) -> LabeledTree:
    root = (0, 0, (S.n + 1,) * S.n)
    psis = {k: _psi(k, S) for k in range(1, S.alphabet + 1)}
    branches = tuple(
        tuple((k, j, psis[k]) for k in range(1, S.alphabet + 1))
        for j in range(1, S.n + 1))
    return LabeledTree(S.d, S.M, S.n, root, branches)


def decode_tree(T: LabeledTree) -> TensorMonomial:
    factors = []
    for j in range(T.n):
        fac = []
        source = T.branches[0] if T.branches else ()
        for (k, _, psi) in source:
            if psi[j] == j + 1:
                fac.append(k)
        factors.append(tuple(fac))
    return TensorMonomial(T.d, T.n, T.M, tuple(factors))


def tree_leq(T1: LabeledTree, T2: LabeledTree) -> bool:
    """Branchwise subsequence embedding; labels need k <= k' and equal vectors."""
    if T1.n != T2.n:
        return False
    for j in range(T1.n):
        b1, b2 = T1.branches[j], T2.branches[j]
        pos = 0
        for (k, _, psi) in b1:
            while pos < len(b2) and not (b2[pos][0] >= k and b2[pos][2] == psi):
                pos += 1
            if pos >= len(b2):
                return False
            pos += 1
    return True


def minimal_elements(monomials: Iterable[TensorMonomial]) -> list[TensorMonomial]:
    """The divisibility-minimal members; every input is a multiple of one."""
    unique = sorted(set(monomials), key=lambda m: (m.d, m.n, m.factors))
    out = []
    for cand in unique:
        dominated = False
        for other in unique:
            if other is cand or (other.d, other.n, other.factors) == (cand.d, cand.n, cand.factors):
                continue
            if rl_leq(other, cand) is not None:
                dominated = True
                break
        if not dominated:
            out.append(cand)
    return out
