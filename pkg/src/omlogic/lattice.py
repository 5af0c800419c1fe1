"""Finite complete orthomodular lattices ("logics").

Elements are plain ``int`` positions in a :class:`Logic`'s carrier.  Subsets
are returned as ``frozenset`` of positions; internally the commutation
relation is also kept as one bitmask per element so commutants are a
handful of ``&`` operations.
"""

from __future__ import annotations

import itertools
import json
from functools import reduce
from pathlib import Path

import numpy as np

from . import kernels

MAX_CARRIER = 64


class LatticeError(ValueError):
    """A lattice description violates one of the logic axioms.

    ``axiom`` is a short tag (``"format"``, ``"order"``, ``"bounds"``,
    ``"meet"``, ``"join"``, ``"C1"``, ``"C2"``, ``"C3"``, ``"OM"``) and
    ``witness`` the offending tuple of element positions, if any.
    """

    def __init__(self, axiom, message, witness=()):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.witness = tuple(witness)


class Logic:
    """An immutable finite orthomodular lattice with cached operation tables."""

    def __init__(self, leq, ortho, names=None, *, check=True):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n) or n == 0:
            raise LatticeError("format", "leq must be a non-empty square matrix")
        if n > MAX_CARRIER:
            raise LatticeError("format", f"carrier size {n} exceeds the cap of {MAX_CARRIER}")
        ortho = np.asarray(ortho, dtype=np.int64)
        if ortho.shape != (n,) or sorted(ortho.tolist()) != list(range(n)):
            raise LatticeError("format", "ortho must be a permutation of the carrier")
        if names is None:
            names = [str(i) for i in range(n)]
        names = [str(s) for s in names]
        if len(names) != n or len(set(names)) != n:
            raise LatticeError("format", "names must be n distinct labels")

        leq = kernels.transitive_closure(leq)
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = np.argwhere(both)[0]
            raise LatticeError("order", "relation is not antisymmetric", (int(i), int(j)))
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise LatticeError("bounds", "order lacks a global bottom or top")

        meet, join, status, bi, bj = kernels.tables(leq)
        if status == 1:
            raise LatticeError("meet", "pair has no greatest lower bound", (bi, bj))
        if status == 2:
            raise LatticeError("join", "pair has no least upper bound", (bi, bj))

        self.n = n
        self.leq = leq
        self.ortho = ortho
        self.names = tuple(names)
        self.bottom = int(bottoms[0])
        self.top = int(tops[0])
        self.meet_table = meet
        self.join_table = join
        for arr in (self.leq, self.ortho, self.meet_table, self.join_table):
            arr.setflags(write=False)
        self._index = {s: i for i, s in enumerate(self.names)}

        if check:
            self._check_ortho()
        self.comm = kernels.commute_matrix(meet, join, ortho)
        self.comm.setflags(write=False)
        self._comm_mask = [_bits(np.flatnonzero(self.comm[p])) for p in range(n)]
        self.full_mask = (1 << n) - 1

    def _check_ortho(self):
        o = self.ortho
        for p in range(self.n):
            if o[o[p]] != p:
                raise LatticeError("C2", "orthocomplement is not involutive", (p,))
        for p, q in zip(*np.nonzero(self.leq)):
            if not self.leq[o[q], o[p]]:
                raise LatticeError("C1", "orthocomplement is not antitone", (int(p), int(q)))
        for p in range(self.n):
            if self.join_table[p, o[p]] != self.top or self.meet_table[p, o[p]] != self.bottom:
                raise LatticeError("C3", "complement laws fail", (p,))
        p, q = kernels.om_violation(self.leq, self.meet_table, self.join_table, o)
        if p >= 0:
            raise LatticeError("OM", "orthomodular law fails", (p, q))

    # -- element access -----------------------------------------------------

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Logic(n={self.n})"

    def index(self, name):
        """Resolve a display label (or ``"#k"`` / int position) to a position."""
        if isinstance(name, (int, np.integer)):
            if not 0 <= name < self.n:
                raise KeyError(name)
            return int(name)
        if name.startswith("#") and name[1:].isdigit():
            return self.index(int(name[1:]))
        return self._index[name]

    def name(self, p):
        return self.names[p]

    def elements(self):
        return range(self.n)

    # -- operations ---------------------------------------------------------

    def le(self, p, q):
        return bool(self.leq[p, q])

    def meet(self, p, q):
        return int(self.meet_table[p, q])

    def join(self, p, q):
        return int(self.join_table[p, q])

    def ocompl(self, p):
        return int(self.ortho[p])

    def big_meet(self, items):
        return reduce(self.meet, items, self.top)

    def big_join(self, items):
        return reduce(self.join, items, self.bottom)

    def commutes(self, p, q):
        return bool(self.comm[p, q])

    # -- subsets ------------------------------------------------------------

    def commutant_mask(self, mask):
        out = self.full_mask
        for p in _members(mask):
            out &= self._comm_mask[p]
        return out

    def commutant(self, subset):
        """All elements commuting with every member of ``subset``."""
        return _frozen(self.commutant_mask(_bits(subset)))

    def sublogic_generated(self, subset):
        """Double commutant: the smallest sublogic containing ``subset``."""
        return _frozen(self.commutant_mask(self.commutant_mask(_bits(subset))))

    def center(self, subset=None):
        """Centre of the sublogic generated by ``subset`` (whole logic if omitted)."""
        mask = self.full_mask if subset is None else _bits(subset)
        one = self.commutant_mask(mask)
        return _frozen(one & self.commutant_mask(one))

    def is_boolean(self, subset=None):
        members = list(self.elements() if subset is None else subset)
        return all(self.comm[p, q] for p, q in itertools.combinations(members, 2))

    def maximal_boolean_sublogic(self, subset=()):
        """Greedy (ascending position) maximal Boolean sublogic containing ``subset``."""
        members = sorted(set(subset))
        if not self.is_boolean(members):
            bad = next((p, q) for p, q in itertools.combinations(members, 2) if not self.comm[p, q])
            raise ValueError(f"elements {self.name(bad[0])} and {self.name(bad[1])} do not commute")
        mask = _bits(members)
        for x in range(self.n):
            if self._comm_mask[x] & mask == mask:
                mask |= 1 << x
        return _frozen(mask)

    def maximal_boolean_sublogics(self):
        """Every maximal Boolean sublogic (maximal cliques of the commutation graph)."""
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((p, q) for p in range(self.n) for q in range(p + 1, self.n) if self.comm[p, q])
        return sorted((frozenset(c) for c in nx.find_cliques(g)), key=sorted)

    def interval(self, lo, hi, within=None):
        """``[lo, hi]`` intersected with ``within`` (whole carrier by default)."""
        pool = self.elements() if within is None else within
        return frozenset(x for x in pool if self.leq[lo, x] and self.leq[x, hi])

    def subalgebra_generated(self, subset):
        """Closure of ``subset`` together with 0 and 1 under meet, join and ortho."""
        got = set(subset) | {self.bottom, self.top}
        frontier = list(got)
        while frontier:
            new = set()
            for x in frontier:
                new.add(self.ocompl(x))
                for y in got:
                    new.add(self.meet(x, y))
                    new.add(self.join(x, y))
            frontier = list(new - got)
            got |= new
        return frozenset(got)

    def is_subalgebra(self, subset):
        s = set(subset)
        return all(self.ocompl(x) in s for x in s) and all(
            self.meet(x, y) in s and self.join(x, y) in s for x in s for y in s
        )

    # -- derived logics -----------------------------------------------------

    def restrict_to(self, subset):
        """Materialise a complete subalgebra as its own :class:`Logic`.

        Returns ``(sub, embed)`` where ``embed[k]`` is the position in ``self``
        of element ``k`` of ``sub``.
        """
        members = sorted(set(subset))
        if not self.is_subalgebra(members):
            raise ValueError("subset is not closed under meet, join and ortho")
        pos = {p: k for k, p in enumerate(members)}
        leq = self.leq[np.ix_(members, members)]
        ortho = [pos[self.ocompl(p)] for p in members]
        sub = Logic(leq, ortho, [self.names[p] for p in members])
        return sub, np.array(members, dtype=np.int64)

    def to_dict(self):
        pairs = [[int(i), int(j)] for i, j in zip(*np.nonzero(self.leq)) if i != j]
        return {"n": self.n, "names": list(self.names), "leq": pairs, "ortho": self.ortho.tolist()}


def _bits(items):
    mask = 0
    for p in items:
        mask |= 1 << int(p)
    return mask


def _members(mask):
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def _frozen(mask):
    return frozenset(_members(mask))


# ---------------------------------------------------------------------------
# descriptions and files


def validate(desc):
    """Build a :class:`Logic` from a raw description, raising :class:`LatticeError`.

    ``desc`` is a mapping with ``n``, ``leq`` (list of ``[i, j]`` pairs meaning
    ``i <= j``; reflexive pairs may be omitted), ``ortho`` and optional
    ``names``.
    """
    try:
        n = int(desc["n"])
        pairs = [(int(i), int(j)) for i, j in desc.get("leq", [])]
        ortho = [int(x) for x in desc["ortho"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise LatticeError("format", f"malformed description ({exc})") from None
    if n <= 0:
        raise LatticeError("format", "n must be positive")
    leq = np.zeros((n, n), dtype=bool)
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise LatticeError("format", f"leq pair ({i}, {j}) out of range")
        leq[i, j] = True
    if len(ortho) != n:
        raise LatticeError("format", "ortho must list n entries")
    return Logic(leq, ortho, desc.get("names"))


def load(path):
    try:
        desc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise LatticeError("format", f"cannot read lattice file: {exc}") from None
    if not isinstance(desc, dict):
        raise LatticeError("format", "lattice file must hold a JSON object")
    return validate(desc)


def dump(logic, path):
    Path(path).write_text(json.dumps(logic.to_dict(), indent=1))


# ---------------------------------------------------------------------------
# generators


def boolean(k):
    """The Boolean algebra of subsets of a ``k``-element set (2**k elements)."""
    if k < 0 or 2**k > MAX_CARRIER:
        raise ValueError(f"boolean({k}) exceeds the carrier cap of {MAX_CARRIER}")
    n = 2**k
    m = np.arange(n)
    leq = (m[:, None] & ~m[None, :]) == 0
    ortho = (n - 1) ^ m

    def label(x):
        if x == 0:
            return "0"
        if x == n - 1:
            return "1"
        return "+".join(f"e{i + 1}" for i in range(k) if x >> i & 1)

    return Logic(leq, ortho, [label(x) for x in range(n)])


def mo(k):
    """The horizontal sum of ``k`` four-element Boolean blocks (``MO2`` for k=2)."""
    n = 2 * k + 2
    if k < 1 or n > MAX_CARRIER:
        raise ValueError(f"mo({k}) exceeds the carrier cap of {MAX_CARRIER}")
    letters = "abcdefghijklmnopqrstuvwxyz"
    atom = [letters[i] if k <= 26 else f"x{i + 1}" for i in range(k)]
    names = ["0"]
    for a in atom:
        names += [a, a + "'"]
    names.append("1")
    leq = np.zeros((n, n), dtype=bool)
    leq[0, :] = True
    leq[:, n - 1] = True
    np.fill_diagonal(leq, True)
    ortho = [n - 1] + [x for i in range(k) for x in (2 * i + 2, 2 * i + 1)] + [0]
    return Logic(leq, ortho, names)


def product(a, b):
    """Direct product with componentwise order and orthocomplement."""
    n = a.n * b.n
    if n > MAX_CARRIER:
        raise ValueError(f"product has {n} elements, above the cap of {MAX_CARRIER}")
    leq = np.kron(a.leq.astype(np.int8), b.leq.astype(np.int8)).astype(bool)
    ortho = [a.ortho[i] * b.n + b.ortho[j] for i in range(a.n) for j in range(b.n)]
    names = [f"{a.names[i]}*{b.names[j]}" for i in range(a.n) for j in range(b.n)]
    return Logic(leq, ortho, names)


def horizontal_sum(a, b):
    """Glue two logics at their bottoms and tops; other elements stay incomparable."""
    inner_a = [x for x in a.elements() if x not in (a.bottom, a.top)]
    inner_b = [x for x in b.elements() if x not in (b.bottom, b.top)]
    n = 2 + len(inner_a) + len(inner_b)
    if n > MAX_CARRIER:
        raise ValueError(f"horizontal sum has {n} elements, above the cap of {MAX_CARRIER}")
    pa = {a.bottom: 0, a.top: n - 1}
    pa.update({x: 1 + k for k, x in enumerate(inner_a)})
    pb = {b.bottom: 0, b.top: n - 1}
    pb.update({x: 1 + len(inner_a) + k for k, x in enumerate(inner_b)})
    leq = np.zeros((n, n), dtype=bool)
    ortho = [0] * n
    names = ["0"] * n
    names[n - 1] = "1"
    for src, pos, tag in ((a, pa, "L"), (b, pb, "R")):
        for x in src.elements():
            ortho[pos[x]] = pos[src.ocompl(x)]
            if x not in (src.bottom, src.top):
                names[pos[x]] = f"{tag}.{src.names[x]}"
            for y in src.elements():
                if src.leq[x, y]:
                    leq[pos[x], pos[y]] = True
    return Logic(leq, ortho, names)


def from_spec(text):
    """Build a logic from a generator string such as ``"mo:2"`` or ``"prod:boolean:1,mo:2"``.

    Nested arguments of ``prod``/``hsum`` may be wrapped in parentheses:
    ``"hsum:(prod:boolean:1,mo:2),boolean:2"``.
    """
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        return from_spec(text[1:-1])
    kind, _, arg = text.partition(":")
    if kind == "boolean":
        return boolean(int(arg))
    if kind == "mo":
        return mo(int(arg))
    if kind in ("prod", "hsum"):
        left, right = _split_pair(arg)
        build = product if kind == "prod" else horizontal_sum
        return build(from_spec(left), from_spec(right))
    raise ValueError(f"unknown generator spec {text!r}")


def _split_pair(arg):
    depth = 0
    for k, ch in enumerate(arg):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return arg[:k], arg[k + 1 :]
    raise ValueError(f"expected two comma-separated generator specs in {arg!r}")


SWEEP_SPECS = (
    "boolean:1",
    "boolean:2",
    "boolean:3",
    "mo:2",
    "mo:3",
    "prod:boolean:1,mo:2",
    "hsum:boolean:2,boolean:2",
)


def sweep():
    """The standard list of test logics, as ``(spec, Logic)`` pairs."""
    return [(s, from_spec(s)) for s in SWEEP_SPECS]
