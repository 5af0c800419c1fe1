"""Commutators of subsets of a finite logic.

Four independent constructions of the commutator are provided and compared
by :func:`verify_commutator_equivalence`:

* the join of all subcommutators (:func:`commutator`),
* Takeuti's join over the commutant (:func:`takeuti_com`),
* the meet of Bruns-Kalmbach commutators of finite subsets
  (:func:`pulmannova_com`),
* the meet of Marsden commutators over the generated subalgebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .lattice import Logic

MAX_ENUMERATED = 16


def marsden_com(L: Logic, p: int, q: int) -> int:
    """``(p&q) | (p&q') | (p'&q) | (p'&q')``."""
    po, qo = L.ocompl(p), L.ocompl(q)
    return L.big_join([L.meet(p, q), L.meet(p, qo), L.meet(po, q), L.meet(po, qo)])


def finite_com(L: Logic, family) -> int:
    """Join over all sign patterns of the meet of the signed members."""
    family = sorted(set(family))
    best = L.bottom
    for signs in itertools.product((False, True), repeat=len(family)):
        term = L.big_meet(L.ocompl(p) if s else p for p, s in zip(family, signs))
        best = L.join(best, term)
    return best


def _pairwise_commute_below(L, A, e):
    cut = [L.meet(p, e) for p in A]
    return all(L.commutes(x, y) for x in cut for y in cut)


def subcommutators(L: Logic, A) -> frozenset:
    """Central elements ``e`` of the generated sublogic with all ``p & e`` commuting."""
    A = frozenset(A)
    return frozenset(e for e in L.center(A) if _pairwise_commute_below(L, A, e))


def subcommutators_by_cut(L: Logic, A) -> frozenset:
    """Same set, characterised as ``e`` in Z(A) with every ``p & e`` (p in A) in Z(A)."""
    A = frozenset(A)
    Z = L.center(A)
    return frozenset(e for e in Z if all(L.meet(p, e) in Z for p in A))


def subcommutators_by_interval(L: Logic, A) -> frozenset:
    """Same set, characterised as ``e`` in Z(A) with ``[0, e]`` of L(A) inside Z(A)."""
    A = frozenset(A)
    Z = L.center(A)
    gen = L.sublogic_generated(A)
    return frozenset(e for e in Z if L.interval(L.bottom, e, gen) <= Z)


def commutator(L: Logic, A) -> int:
    """Join of the subcommutators of ``A``; itself the largest subcommutator."""
    return L.big_join(subcommutators(L, A))


def takeuti_com(L: Logic, A) -> int:
    A = frozenset(A)
    return L.big_join(e for e in L.commutant(A) if _pairwise_commute_below(L, A, e))


def pulmannova_com(L: Logic, A) -> int:
    """Meet of :func:`finite_com` over every finite subset of ``A`` (the empty one included)."""
    A = sorted(set(A))
    if len(A) > MAX_ENUMERATED:
        raise ValueError(f"refusing to enumerate subsets of a {len(A)}-element family")
    value = L.top
    for r in range(len(A) + 1):
        for F in itertools.combinations(A, r):
            value = L.meet(value, finite_com(L, F))
    return value


def subalgebra_com(L: Logic, A) -> int:
    """Meet of Marsden commutators over all pairs of the generated subalgebra."""
    G = sorted(L.subalgebra_generated(A))
    return L.big_meet(marsden_com(L, p, q) for p, q in itertools.combinations_with_replacement(G, 2))


@dataclass(frozen=True)
class CommutatorReport:
    via_subcommutators: int
    via_takeuti: int
    via_pulmannova: int
    via_pairwise_meet: int
    subcommutator_set: frozenset

    @property
    def agree(self) -> bool:
        return len({self.via_subcommutators, self.via_takeuti, self.via_pulmannova, self.via_pairwise_meet}) == 1

    def to_dict(self, L: Logic | None = None):
        show = (lambda p: L.names[p]) if L is not None else (lambda p: p)
        return {
            "subcommutators": show(self.via_subcommutators),
            "takeuti": show(self.via_takeuti),
            "pulmannova": show(self.via_pulmannova),
            "pairwise_meet": show(self.via_pairwise_meet),
            "S": [show(p) for p in sorted(self.subcommutator_set)],
            "agree": self.agree,
        }


def verify_commutator_equivalence(L: Logic, A) -> CommutatorReport:
    S = subcommutators(L, A)
    return CommutatorReport(
        via_subcommutators=L.big_join(S),
        via_takeuti=takeuti_com(L, A),
        via_pulmannova=pulmannova_com(L, A),
        via_pairwise_meet=subalgebra_com(L, A),
        subcommutator_set=S,
    )


def bn_decompose(L: Logic, A, x: int):
    """Split ``x`` in L(A) into its parts below the commutator and below its complement."""
    if x not in L.sublogic_generated(A):
        raise ValueError(f"{L.name(x)} is not in the sublogic generated by the family")
    c = commutator(L, A)
    xb, xn = L.meet(x, c), L.meet(x, L.ocompl(c))
    assert L.join(xb, xn) == x
    return xb, xn


def direct_product_check(L: Logic, A) -> bool:
    """Check that L(A) splits as a Boolean part times a part without Boolean factor.

    Verifies that ``[0, c]`` in L(A) is Boolean, that ``x -> (x & c, x & c')``
    is an order isomorphism of L(A) onto the product of the two intervals, and
    that for every maximal Boolean sublogic B the commutator of ``A | B`` lies
    in B together with every element of ``A | B`` below it.
    """
    A = frozenset(A)
    gen = L.sublogic_generated(A)
    c = commutator(L, A)
    co = L.ocompl(c)
    lower = L.interval(L.bottom, c, gen)
    upper = L.interval(L.bottom, co, gen)
    if not L.is_boolean(lower):
        return False
    image = {x: (L.meet(x, c), L.meet(x, co)) for x in gen}
    if set(image.values()) != set(itertools.product(lower, upper)):
        return False
    for x in gen:
        for y in gen:
            parts_le = L.le(image[x][0], image[y][0]) and L.le(image[x][1], image[y][1])
            if L.le(x, y) != parts_le:
                return False
    for B in L.maximal_boolean_sublogics():
        AB = A | B
        d = commutator(L, AB)
        if d not in B or not L.interval(L.bottom, d, AB) <= B:
            return False
    return True
