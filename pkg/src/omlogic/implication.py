"""Generalized implications on a finite logic.

An implication is anything :func:`impl_table` can turn into an ``n x n``
table: :class:`Poly` (one of the six two-variable polynomials), or
:class:`Table` (an explicit table, certified with :func:`check_axioms`).
The twisted operations live in :mod:`omlogic.matrix` because they need a
matrix-backed logic.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import kernels
from .commutator import marsden_com
from .lattice import Logic

NAMES = {0: "maximum", 3: "Sasaki", 4: "contrapositive Sasaki", 5: "minimum"}


@dataclass(frozen=True)
class Poly:
    j: int

    def __post_init__(self):
        if self.j not in range(6):
            raise ValueError(f"polynomial implication index must be 0..5, got {self.j}")

    def __str__(self):
        return f"poly:{self.j}"


@dataclass(frozen=True, eq=False)
class Table:
    table: np.ndarray
    label: str = "table"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Twisted:
    """Placeholder selector for the twisted operations; only the matrix backend resolves it."""

    j: int
    theta: float
    i: int

    def __str__(self):
        return f"twisted:{self.j},{self.theta},{self.i}"


def parse_impl(text: str, L: Logic | None = None):
    """``"3"``, ``"poly:3"``, ``"table:path.json"`` or ``"twisted:j,theta,i"``."""
    text = text.strip()
    if text.isdigit():
        return Poly(int(text))
    kind, _, arg = text.partition(":")
    if kind == "poly":
        return Poly(int(arg))
    if kind == "table":
        if L is None:
            raise ValueError("a table implication needs a logic to resolve against")
        return load_table(arg, L)
    if kind == "twisted":
        j, theta, i = arg.split(",")
        return Twisted(int(j), float(theta), int(i))
    raise ValueError(f"unknown implication selector {text!r}")


def load_table(path, L: Logic) -> Table:
    raw = json.loads(Path(path).read_text())
    if isinstance(raw, dict):
        raw = raw["table"]
    arr = np.array([[L.index(x) for x in row] for row in raw], dtype=np.int64)
    if arr.shape != (L.n, L.n):
        raise ValueError(f"table must be {L.n}x{L.n}, got {arr.shape}")
    return Table(arr, label=f"table:{path}")


# ---------------------------------------------------------------------------
# evaluation


def poly_table(L: Logic, j: int) -> np.ndarray:
    """Vectorised table of the j-th polynomial implication."""
    return _poly_table_cached(L, j)


@lru_cache(maxsize=256)
def _poly_table_cached(L, j):
    m, v, o = L.meet_table, L.join_table, L.ortho
    P = np.arange(L.n)[:, None]
    Q = np.arange(L.n)[None, :]
    Po, Qo = o[P], o[Q]
    if j == 0:
        t = v[Po, Q]
    elif j == 1:
        t = v[v[m[Po, Qo], m[Po, Q]], m[P, v[Po, Q]]]
    elif j == 2:
        t = v[v[m[v[Po, Q], Qo], m[Po, Q]], m[P, Q]]
    elif j == 3:
        t = v[Po, m[P, Q]]
    elif j == 4:
        t = v[m[Po, Qo], Q]
    else:
        t = v[v[m[Po, Qo], m[Po, Q]], m[P, Q]]
    t = np.ascontiguousarray(t, dtype=np.int64)
    t.setflags(write=False)
    return t


def impl_table(L: Logic, spec) -> np.ndarray:
    if isinstance(spec, Poly):
        return poly_table(L, spec.j)
    if isinstance(spec, Table):
        t = np.asarray(spec.table, dtype=np.int64)
        if t.shape != (L.n, L.n) or t.min() < 0 or t.max() >= L.n:
            raise ValueError("table entries must be valid elements of the logic")
        return t
    if isinstance(spec, Twisted):
        raise TypeError("twisted implications are only defined on matrix-backed logics")
    raise TypeError(f"not an implication selector: {spec!r}")


def impl_eval(L: Logic, spec, p: int, q: int) -> int:
    return int(impl_table(L, spec)[p, q])


def logical_equiv(L: Logic, spec, p: int, q: int) -> int:
    t = impl_table(L, spec)
    return L.meet(int(t[p, q]), int(t[q, p]))


def equiv_table(L: Logic, spec) -> np.ndarray:
    t = impl_table(L, spec)
    return L.meet_table[t, t.T]


def com_table(L: Logic) -> np.ndarray:
    """Two-element commutators ``c[p, q]`` (Marsden form)."""
    return _com_table_cached(L)


@lru_cache(maxsize=64)
def _com_table_cached(L):
    c = np.array([[marsden_com(L, p, q) for q in range(L.n)] for p in range(L.n)], dtype=np.int64)
    c.setflags(write=False)
    return c


# ---------------------------------------------------------------------------
# axiom checks


def _first(mask, *arrays):
    """First index tuple (row-major) where ``mask`` is true, or ``None``."""
    hits = np.argwhere(mask)
    return tuple(int(x) for x in hits[0]) if len(hits) else None


@dataclass
class AxiomReport:
    """Per-axiom verdicts; ``witness[name]`` holds the first counterexample."""

    i1: bool = True
    i2: bool = True
    lb: bool = True
    e: bool = True
    mp: bool = True
    mt: bool = True
    ng: bool = True
    le: bool = True
    witness: dict = field(default_factory=dict)

    @property
    def generalized(self) -> bool:
        return self.i1 and self.i2 and self.lb

    def verdicts(self):
        return {k: getattr(self, k) for k in ("i1", "i2", "lb", "e", "mp", "mt", "ng", "le")}


def axiom_failures(L: Logic, t: np.ndarray) -> dict:
    """Map each axiom name to its first counterexample (``None`` when it holds)."""
    m, v, o, le = L.meet_table, L.join_table, L.ortho, L.leq
    n = L.n
    P = np.arange(n)[:, None]
    Q = np.arange(n)[None, :]
    top = L.top
    out = {}

    gen_ok = np.zeros((n, n), dtype=bool)
    for p in range(n):
        for q in range(n):
            gen_ok[p, q] = int(t[p, q]) in L.sublogic_generated((p, q))
    out["i1"] = _first(~gen_ok)
    p, q, e = kernels.i2_violation(t, m, L.comm)
    out["i2"] = None if p < 0 else (p, q, e)
    out["lb"] = _first(L.comm & (t != v[o[P], Q]))
    out["e"] = _first((t == top) != le)
    out["mp"] = _first(~le[m[P, t], Q])
    out["mt"] = _first(~le[m[o[Q], t], o[P]])
    out["ng"] = _first(~le[m[P, o[Q]], o[t]])
    lhs = m[t, t.T]
    rhs = v[m[P, Q], m[o[P], o[Q]]]
    out["le"] = _first(lhs != rhs)
    return out


def check_axioms(L: Logic, spec) -> AxiomReport:
    t = impl_table(L, spec)
    fails = axiom_failures(L, t)
    rep = AxiomReport(**{k: w is None for k, w in fails.items()})
    rep.witness = {k: w for k, w in fails.items() if w is not None}
    return rep


def certify(L: Logic, spec):
    """Return ``spec`` if it is a generalized implication on ``L``, else raise."""
    rep = check_axioms(L, spec)
    if not rep.generalized:
        bad = {k: rep.witness[k] for k in ("i1", "i2", "lb") if k in rep.witness}
        raise ValueError(f"{spec} is not a generalized implication: {bad}")
    return spec


# ---------------------------------------------------------------------------
# structural propositions


@dataclass
class EquivalenceReport:
    """The four mutually equivalent conditions for an (I1)(I2) operation.

    ``conditions`` maps ``"lb"``, ``"b_part"``, ``"n_fill"``, ``"sandwich"`` to
    their first counterexample pair, or ``None`` when the condition holds.
    """

    conditions: dict

    @property
    def consistent(self) -> bool:
        vals = {w is None for w in self.conditions.values()}
        return len(vals) == 1

    @property
    def holds(self) -> bool:
        return all(w is None for w in self.conditions.values())

    def __bool__(self):
        return self.holds and self.consistent


def verify_implication_equivalences(L: Logic, spec) -> EquivalenceReport:
    t = impl_table(L, spec)
    m, v, o = L.meet_table, L.join_table, L.ortho
    c = com_table(L)
    co = o[c]
    t0, t5 = poly_table(L, 0), poly_table(L, 5)
    P = np.arange(L.n)[:, None]
    Q = np.arange(L.n)[None, :]
    conds = {
        "lb": _first(L.comm & (t != v[o[P], Q])),
        "b_part": _first(m[t, c] != t5),
        "n_fill": _first(v[t, co] != t0),
        "sandwich": _first(~(L.leq[t5, t] & L.leq[t, t0])),
    }
    return EquivalenceReport(conds)


def verify_six_relations(L: Logic) -> bool:
    """Each polynomial equals the minimum implication joined with a part below c(p,q)'."""
    m, v, o = L.meet_table, L.join_table, L.ortho
    co = o[com_table(L)]
    P = np.arange(L.n)[:, None]
    Q = np.arange(L.n)[None, :]
    t5 = poly_table(L, 5)
    extra = {0: co, 1: m[P, co], 2: m[o[Q], co], 3: m[o[P], co], 4: m[Q, co]}
    return all(np.array_equal(poly_table(L, j), v[t5, extra[j]]) for j in range(5))


def mp_characterization(L: Logic, spec) -> bool:
    """(MP) holds exactly when ``p & N-part(p => q)`` vanishes everywhere.

    For polynomial selectors the N-part products are also compared with
    their closed forms (``p & c'`` for j = 0, 1 and ``0`` otherwise).
    """
    t = impl_table(L, spec)
    m, o = L.meet_table, L.ortho
    co = o[com_table(L)]
    P = np.arange(L.n)[:, None]
    Q = np.arange(L.n)[None, :]
    mp = bool(L.leq[m[P, t], Q].all())
    n_prod = m[P, m[t, co]]
    if mp != bool((n_prod == L.bottom).all()):
        return False
    if isinstance(spec, Poly):
        expected = m[P, co] if spec.j in (0, 1) else np.full_like(n_prod, L.bottom)
        if not np.array_equal(n_prod, expected):
            return False
    return True


def _max_of(L, candidates):
    """Greatest element of ``candidates`` or ``None`` if there is none."""
    cands = list(candidates)
    for x in cands:
        if all(L.leq[y, x] for y in cands):
            return x
    return None


def sasaki_characterizations(L: Logic) -> bool:
    m, v, o, le = L.meet_table, L.join_table, L.ortho, L.leq
    t0, t3, t4, t5 = (poly_table(L, j) for j in (0, 3, 4, 5))
    n = L.n
    # residuation: X <= p =>3 q  iff  p & (p =>0 X) <= q
    for p in range(n):
        for q in range(n):
            for x in range(n):
                if bool(le[x, t3[p, q]]) != bool(le[m[p, t0[p, x]], q]):
                    return False
    for p in range(n):
        for q in range(n):
            cp = L.commutant((p,))
            cq = L.commutant((q,))
            cpq = cp & cq
            if _max_of(L, (x for x in cp if le[m[p, x], m[q, x]])) != t3[p, q]:
                return False
            if t4[p, q] != t3[o[q], o[p]]:
                return False
            if _max_of(L, (x for x in cq if le[m[o[q], x], m[o[p], x]])) != t4[p, q]:
                return False
            if t5[p, q] != m[t3[p, q], t4[p, q]]:
                return False
            if _max_of(L, (x for x in cpq if le[m[p, x], m[q, x]])) != t5[p, q]:
                return False
    return True


def deduction_checks(L: Logic, spec) -> bool:
    """The three clauses of the deduction theorem, over all p, q and X in {p, q}'."""
    t = impl_table(L, spec)
    m, le = L.meet_table, L.leq
    c = com_table(L)
    n = L.n
    P = np.arange(n)[:, None, None]
    Q = np.arange(n)[None, :, None]
    X = np.arange(n)[None, None, :]
    in_comm = L.comm[X, P] & L.comm[X, Q]
    T = t[P, Q]
    C = c[P, Q]
    premise = le[m[P, X], Q]
    clause1 = ~in_comm | ~premise | le[X, T]
    lhs2 = le[m[m[C, P], X], Q]
    rhs2 = le[m[C, X], T]
    clause2 = ~in_comm | (lhs2 == rhs2)
    clause3 = le[m[m[c, np.arange(n)[:, None]], t], np.arange(n)[None, :]]
    return bool(clause1.all() and clause2.all() and clause3.all())


def le_checks(L: Logic, spec) -> bool:
    """(LE), its max-characterisation and ``p <=> q <= c(p, q)`` agree; consequences hold."""
    t = impl_table(L, spec)
    m, v, o, le = L.meet_table, L.join_table, L.ortho, L.leq
    c = com_table(L)
    eqv = m[t, t.T]
    n = L.n
    P = np.arange(n)[:, None]
    Q = np.arange(n)[None, :]
    cond1 = bool((eqv == v[m[P, Q], m[o[P], o[Q]]]).all())
    cond2 = True
    for p in range(n):
        for q in range(n):
            cands = (x for x in L.commutant((p, q)) if m[p, x] == m[q, x])
            if _max_of(L, cands) != eqv[p, q]:
                cond2 = False
    cond3 = bool(le[eqv, c].all())
    if not cond1 == cond2 == cond3:
        return False
    if cond1:
        if not le[m[P, eqv], Q].all():
            return False
        for p, q, r in itertools.product(range(n), repeat=3):
            if not le[m[eqv[p, q], eqv[q, r]], eqv[p, r]]:
                return False
    if isinstance(spec, Poly):
        co = o[c]
        n_part = m[eqv, co]
        expected = co if spec.j == 0 else np.full_like(co, L.bottom)
        if not np.array_equal(n_part, expected):
            return False
    return True


def meet_family_restriction(L: Logic, spec, pairs, q: int) -> bool:
    """Relativisation of a meet of implications to ``q`` (members must commute with q)."""
    t = impl_table(L, spec)
    lhs = L.meet(L.big_meet(int(t[a, b]) for a, b in pairs), q)
    rhs = L.meet(L.big_meet(int(t[L.meet(a, q), L.meet(b, q)]) for a, b in pairs), q)
    return lhs == rhs
