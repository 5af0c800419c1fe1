"""Bounded fragments of the universe of Q-valued sets.

A :class:`QSet` is a finite function from previously built ``QSet`` nodes to
carrier indices of a :class:`~omlogic.lattice.Logic`.  Nodes are interned,
so structurally equal nodes are the same object and can be compared with
``is``.  Ranks start at 1 for the empty function.
"""

from __future__ import annotations

import itertools
import math
import weakref
from dataclasses import dataclass, field

import numpy as np

from . import commutator as _com
from .lattice import Logic

DEFAULT_BUDGET = 10**6


class QSet:
    __slots__ = ("entries", "rank", "uid", "sort_key", "support", "__weakref__")

    _table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()
    _counter = itertools.count()

    def __new__(cls, entries=()):
        merged = {}
        for child, val in entries:
            if not isinstance(child, QSet):
                raise TypeError("children must be QSet nodes")
            if child in merged and merged[child] != int(val):
                raise ValueError("duplicate child with conflicting values")
            merged[child] = int(val)
        items = tuple(sorted(merged.items(), key=lambda cv: cv[0].sort_key))
        key = tuple((c.uid, v) for c, v in items)
        node = cls._table.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        node.entries = items
        node.rank = 1 + max((c.rank for c, _ in items), default=0)
        node.uid = next(cls._counter)
        node.sort_key = (node.rank, tuple((c.sort_key, v) for c, v in items))
        node.support = frozenset(v for _, v in items).union(*(c.support for c, _ in items))
        cls._table[key] = node
        return node

    def __reduce__(self):
        return (QSet, (self.entries,))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def dom(self):
        return tuple(c for c, _ in self.entries)

    def value(self, child) -> int:
        for c, v in self.entries:
            if c is child:
                return v
        raise KeyError("not in the domain")

    def __repr__(self):
        return f"QSet({self.show()})"

    def show(self, L: Logic | None = None) -> str:
        """Literal text accepted by the formula parser."""
        name = (lambda v: L.names[v]) if L is not None else str
        if not self.entries:
            return "{}"
        return "{" + ", ".join(f"{c.show(L)}: {name(v)}" for c, v in self.entries) + "}"


EMPTY = QSet()


def node(*entries) -> QSet:
    """``node((child, value), ...)``."""
    return QSet(entries)


# ---------------------------------------------------------------------------
# fragments


def fragment_count(rank_bound: int, dom_cap: int, q: int) -> int:
    """Closed-form node count of the fragment of rank at most ``rank_bound``."""
    count = 1
    for _ in range(rank_bound - 1):
        count = sum(math.comb(count, j) * q**j for j in range(min(dom_cap, count) + 1))
    return count


@dataclass
class Fragment:
    logic: Logic
    rank_bound: int
    dom_cap: int
    nodes: list
    values: tuple
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self.index = {u: i for i, u in enumerate(self.nodes)}

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, u):
        return u in self.index

    def of_rank(self, r):
        return [u for u in self.nodes if u.rank == r]

    def params(self):
        return {"rank": self.rank_bound, "dom_cap": self.dom_cap, "nodes": len(self.nodes)}


def build_fragment(L: Logic, rank_bound: int, dom_cap: int = 2, budget: int = DEFAULT_BUDGET, values=None) -> Fragment:
    """All nodes of rank <= ``rank_bound`` with at most ``dom_cap`` children.

    ``values`` restricts the codomain (a sublogic gives its own fragment).
    """
    if rank_bound < 1 or dom_cap < 0:
        raise ValueError("rank_bound must be >= 1 and dom_cap >= 0")
    vals = tuple(sorted(set(range(L.n)) if values is None else set(values)))
    expected = fragment_count(rank_bound, dom_cap, len(vals))
    if expected > budget:
        raise OverflowError(f"fragment would have {expected} nodes, over the budget of {budget}")
    nodes = [EMPTY]
    for _ in range(rank_bound - 1):
        prev = nodes
        layer = []
        for size in range(min(dom_cap, len(prev)) + 1):
            for dom in itertools.combinations(prev, size):
                for vs in itertools.product(vals, repeat=size):
                    layer.append(QSet(zip(dom, vs)))
        nodes = sorted(set(layer))
    assert len(nodes) == expected, (len(nodes), expected)
    return Fragment(L, rank_bound, dom_cap, nodes, vals)


def closure(nodes) -> list:
    """All nodes reachable through children, children before parents."""
    seen = set()
    out = []
    stack = list(nodes)
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        out.append(u)
        stack.extend(c for c, _ in u.entries)
    return sorted(out)


def csr(nodes):
    """CSR child/value layout of a children-first node list."""
    pos = {u: i for i, u in enumerate(nodes)}
    ptr = np.zeros(len(nodes) + 1, dtype=np.int64)
    child, val = [], []
    for i, u in enumerate(nodes):
        for c, v in u.entries:
            child.append(pos[c])
            val.append(v)
        ptr[i + 1] = len(child)
    return ptr, np.asarray(child, dtype=np.int64), np.asarray(val, dtype=np.int64)


# ---------------------------------------------------------------------------
# supports, restriction and special nodes


def support(*nodes) -> frozenset:
    return frozenset().union(*(u.support for u in nodes))


def qset_commutator(L: Logic, nodes) -> int:
    return _com.commutator(L, support(*nodes))


def generated_logic(L: Logic, nodes) -> frozenset:
    return L.sublogic_generated(support(*nodes))


def restrict(L: Logic, u: QSet, p: int, _memo=None) -> QSet:
    """``u|p``: restrict every child recursively and meet every value with ``p``.

    Distinct children may coincide after restriction; their values are then
    joined.
    """
    memo = {} if _memo is None else _memo
    hit = memo.get(u)
    if hit is not None:
        return hit
    merged = {}
    for c, v in u.entries:
        rc = restrict(L, c, p, memo)
        w = L.meet(v, p)
        merged[rc] = L.join(merged[rc], w) if rc in merged else w
    out = QSet(merged.items())
    memo[u] = out
    return out


def has_collision(L: Logic, u: QSet, p: int) -> bool:
    def walk(x):
        kids = [restrict(L, c, p) for c, _ in x.entries]
        return len(set(kids)) < len(kids) or any(walk(c) for c, _ in x.entries)

    return walk(u)


def hf(*members) -> frozenset:
    return frozenset(members)


def check_embed(L: Logic, s) -> QSet:
    """Check-name of a hereditarily finite set (nested frozensets)."""
    return QSet((check_embed(L, t), L.top) for t in s)


def make_ub(L: Logic, b: int) -> QSet:
    return QSet([(EMPTY, b)])


def translate(u: QSet, mapping) -> QSet:
    """Rename every value through ``mapping`` (e.g. into a standalone sublogic)."""
    return QSet((translate(c, mapping), mapping[v]) for c, v in u.entries)


def in_sublogic(u: QSet, sub) -> bool:
    return u.support <= frozenset(sub)
