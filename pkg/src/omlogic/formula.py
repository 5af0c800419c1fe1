"""Formulas of the set-theoretic language with a commutator predicate.

Grammar (loosest binding first)::

    formula := iff
    iff     := imp ('<->' imp)*
    imp     := or ('->' imp)?
    or      := and (('or' | '|') and)*
    and     := unary (('and' | '&') unary)*
    unary   := ('not' | '!') unary
             | ('forall' | 'exists') VAR ('in' term)? unary
             | '(' formula ')' | atom
    atom    := term ('in' | '=' | 'sub') term | 'com' '(' term (',' term)* ')'
    term    := VAR | '{' [term ':' ELEM (',' term ':' ELEM)*] '}'
             | 'check' '(' hf ')' | 'ub' '(' ELEM ')'
    hf      := '{' [hf (',' hf)*] '}'

``x sub y`` is expanded to ``forall t in x (t in y)`` with a fresh ``t``.
Truth values are computed by :class:`EvalContext`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import commutator as _com
from . import kernels
from .implication import impl_table
from .lattice import Logic
from .universe import EMPTY, QSet, check_embed, closure, csr, make_ub

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class NodeLit:
    """A literal node; ``entries`` pairs child literals with element names."""

    entries: tuple = ()


@dataclass(frozen=True)
class CheckLit:
    hf: frozenset


@dataclass(frozen=True)
class UbLit:
    elem: str


@dataclass(frozen=True)
class Const:
    """A node supplied directly (not through text)."""

    node: QSet


Term = Union[Var, NodeLit, CheckLit, UbLit, Const]


@dataclass(frozen=True)
class In:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Com:
    args: tuple


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    bound: Term | None
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    bound: Term | None
    body: "Formula"


Formula = Union[In, Eq, Com, Not, And, Or, Implies, Iff, Forall, Exists]
BINARY = {And: "and", Or: "or", Implies: "->", Iff: "<->"}


class FormulaError(ValueError):
    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} at position {pos}")
        self.pos = pos


# ---------------------------------------------------------------------------
# parser

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*'*")
_ELEM = re.compile(r"[A-Za-z0-9_'+.*#]+")
_KEYWORDS = {"forall", "exists", "in", "not", "and", "or", "sub", "com", "check", "ub"}
_UNICODE = {"∀": "forall ", "∃": "exists ", "∈": " in ", "¬": "not ", "∧": " and ", "∨": " or ",
            "→": " -> ", "⇒": " -> ", "↔": " <-> ", "⇔": " <-> ", "⊆": " sub ", "⌀": "com"}


class _Parser:
    def __init__(self, text):
        for k, v in _UNICODE.items():
            text = text.replace(k, v)
        self.s = text
        self.i = 0
        self.used = set(_IDENT.findall(text))
        self.fresh = itertools.count()

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self, tok):
        self.ws()
        if not self.s.startswith(tok, self.i):
            return False
        if tok[-1].isalpha():
            end = self.i + len(tok)
            if end < len(self.s) and (self.s[end].isalnum() or self.s[end] in "_'"):
                return False
        return True

    def take(self, tok):
        if self.peek(tok):
            self.i += len(tok)
            return True
        return False

    def expect(self, tok):
        if not self.take(tok):
            raise FormulaError(f"expected {tok!r}", self.i)

    def ident(self):
        self.ws()
        m = _IDENT.match(self.s, self.i)
        if not m or m.group() in _KEYWORDS:
            raise FormulaError("expected a variable name", self.i)
        self.i = m.end()
        return m.group()

    def elem(self):
        self.ws()
        m = _ELEM.match(self.s, self.i)
        if not m:
            raise FormulaError("expected an element name", self.i)
        self.i = m.end()
        return m.group()

    def new_var(self):
        while True:
            name = f"_t{next(self.fresh)}"
            if name not in self.used:
                self.used.add(name)
                return name

    def parse(self):
        f = self.iff()
        self.ws()
        if self.i != len(self.s):
            raise FormulaError("unexpected trailing input", self.i)
        return f

    def iff(self):
        f = self.imp()
        while self.take("<->"):
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.take("->"):
            return Implies(f, self.imp())
        return f

    def disj(self):
        f = self.conj()
        while self.take("or") or self.take("|"):
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.take("and") or self.take("&"):
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.take("not") or self.take("!"):
            return Not(self.unary())
        for kw, cls in (("forall", Forall), ("exists", Exists)):
            if self.take(kw):
                var = self.ident()
                bound = self.term() if self.take("in") else None
                return cls(var, bound, self.unary())
        if self.take("("):
            f = self.iff()
            self.expect(")")
            return f
        return self.atom()

    def atom(self):
        if self.take("com"):
            self.expect("(")
            args = [self.term()]
            while self.take(","):
                args.append(self.term())
            self.expect(")")
            return Com(tuple(args))
        left = self.term()
        if self.take("in"):
            return In(left, self.term())
        if self.take("sub"):
            right = self.term()
            t = self.new_var()
            return Forall(t, left, In(Var(t), right))
        if self.take("="):
            return Eq(left, self.term())
        raise FormulaError("expected 'in', '=' or 'sub'", self.i)

    def term(self):
        if self.take("check"):
            self.expect("(")
            s = self.hf()
            self.expect(")")
            return CheckLit(s)
        if self.take("ub"):
            self.expect("(")
            e = self.elem()
            self.expect(")")
            return UbLit(e)
        if self.take("{"):
            entries = []
            if not self.take("}"):
                while True:
                    child = self.term()
                    if isinstance(child, Var):
                        raise FormulaError("node literals may only nest literals", self.i)
                    self.expect(":")
                    entries.append((child, self.elem()))
                    if self.take("}"):
                        break
                    self.expect(",")
            return NodeLit(tuple(entries))
        return Var(self.ident())

    def hf(self):
        self.expect("{")
        members = []
        if not self.take("}"):
            members.append(self.hf())
            while self.take(","):
                members.append(self.hf())
            self.expect("}")
        return frozenset(members)


def parse(text: str, free=None) -> Formula:
    """Parse ``text``; if ``free`` is given, every free variable must be listed there."""
    f = _Parser(text).parse()
    if free is not None:
        extra = free_vars(f) - set(free)
        if extra:
            raise FormulaError(f"unbound variable(s): {', '.join(sorted(extra))}")
    return f


def parse_term(text: str) -> Term:
    """Parse a single term such as ``{{}: a}``, ``check({{}})`` or ``ub(b)``."""
    p = _Parser(text)
    t = p.term()
    p.ws()
    if p.i != len(p.s):
        raise FormulaError("unexpected trailing input", p.i)
    return t


# ---------------------------------------------------------------------------
# printing and structure


def _show_hf(s):
    return "{" + ", ".join(sorted(_show_hf(t) for t in s)) + "}"


def show_term(t, L: Logic | None = None) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, NodeLit):
        return "{" + ", ".join(f"{show_term(c, L)}: {e}" for c, e in t.entries) + "}"
    if isinstance(t, CheckLit):
        return f"check({_show_hf(t.hf)})"
    if isinstance(t, UbLit):
        return f"ub({t.elem})"
    if isinstance(t, Const):
        return t.node.show(L)
    raise TypeError(t)


def show(f, L: Logic | None = None) -> str:
    """Fully bracketed text that parses back to the same tree."""
    t = lambda x: show_term(x, L)  # noqa: E731
    if isinstance(f, In):
        return f"{t(f.left)} in {t(f.right)}"
    if isinstance(f, Eq):
        return f"{t(f.left)} = {t(f.right)}"
    if isinstance(f, Com):
        return "com(" + ", ".join(t(a) for a in f.args) + ")"
    if isinstance(f, Not):
        return f"not ({show(f.body, L)})"
    if type(f) in BINARY:
        return f"({show(f.left, L)} {BINARY[type(f)]} {show(f.right, L)})"
    if isinstance(f, (Forall, Exists)):
        kw = "forall" if isinstance(f, Forall) else "exists"
        rng = f" in {t(f.bound)}" if f.bound is not None else ""
        return f"{kw} {f.var}{rng} ({show(f.body, L)})"
    raise TypeError(f)


def _term_vars(t):
    return {t.name} if isinstance(t, Var) else set()


def free_vars(f) -> set:
    if isinstance(f, (In, Eq)):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, Com):
        return set().union(*(_term_vars(a) for a in f.args))
    if isinstance(f, Not):
        return free_vars(f.body)
    if type(f) in BINARY:
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        inner = free_vars(f.body) - {f.var}
        return inner | (_term_vars(f.bound) if f.bound is not None else set())
    raise TypeError(f)


def is_delta0(f) -> bool:
    if isinstance(f, (In, Eq, Com)):
        return True
    if isinstance(f, Not):
        return is_delta0(f.body)
    if type(f) in BINARY:
        return is_delta0(f.left) and is_delta0(f.right)
    if isinstance(f, (Forall, Exists)):
        return f.bound is not None and is_delta0(f.body)
    raise TypeError(f)


def has_com(f) -> bool:
    if isinstance(f, Com):
        return True
    if isinstance(f, (In, Eq)):
        return False
    if isinstance(f, (Not, Forall, Exists)):
        return has_com(f.body)
    return has_com(f.left) or has_com(f.right)


def substitute(f, name: str, node: QSet):
    """Replace free occurrences of ``name`` by a constant node."""
    def st(t):
        return Const(node) if isinstance(t, Var) and t.name == name else t

    if isinstance(f, In):
        return In(st(f.left), st(f.right))
    if isinstance(f, Eq):
        return Eq(st(f.left), st(f.right))
    if isinstance(f, Com):
        return Com(tuple(st(a) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute(f.body, name, node))
    if type(f) in BINARY:
        return type(f)(substitute(f.left, name, node), substitute(f.right, name, node))
    bound = st(f.bound) if f.bound is not None else None
    body = f.body if f.var == name else substitute(f.body, name, node)
    return type(f)(f.var, bound, body)


# ---------------------------------------------------------------------------
# evaluation


class EvalContext:
    """Logic, implication and quantifier domain for truth values.

    ``domain`` is the node list unbounded quantifiers range over (normally a
    fragment); values involving it are relative to that truncation.
    Atomic values ``[[u = v]]`` / ``[[u in v]]`` are memoised per node pair.
    """

    def __init__(self, L: Logic, impl, domain=None, check=True):
        self.L = L
        self.impl_spec = impl
        self.impl = np.ascontiguousarray(impl_table(L, impl))
        if check:
            from .implication import check_axioms

            rep = check_axioms(L, impl)
            if not rep.generalized:
                raise ValueError(f"{impl} is not a generalized implication on this logic")
        self.domain = list(domain) if domain is not None else None
        self._pos = {}
        self._eq_tab = None
        self._mem_tab = None
        self._eq = {}
        self._mem = {}
        self._com = {}

    # atoms -------------------------------------------------------------

    def prime(self, nodes):
        """Bulk-compute all atomic values among the closure of ``nodes``."""
        known = list(self._pos)
        order = closure(known + list(nodes))
        ptr, child, val = csr(order)
        L = self.L
        eq, mem = kernels.atom_tables(ptr, child, val, L.meet_table, L.join_table, self.impl, L.bottom, L.top)
        self._pos = {u: i for i, u in enumerate(order)}
        self._eq_tab, self._mem_tab = eq, mem
        self._eq.clear()
        self._mem.clear()

    def eq(self, u: QSet, v: QSet) -> int:
        i, j = self._pos.get(u), self._pos.get(v)
        if i is not None and j is not None:
            return int(self._eq_tab[i, j])
        key = (u, v)
        hit = self._eq.get(key)
        if hit is not None:
            return hit
        L, t = self.L, self.impl
        acc = L.top
        for c, a in u.entries:
            assert c.rank < u.rank
            acc = L.meet_table[acc, t[a, self.mem(c, v)]]
        for c, b in v.entries:
            assert c.rank < v.rank
            acc = L.meet_table[acc, t[b, self.mem(c, u)]]
        acc = int(acc)
        self._eq[key] = acc
        return acc

    def mem(self, u: QSet, v: QSet) -> int:
        i, j = self._pos.get(u), self._pos.get(v)
        if i is not None and j is not None:
            return int(self._mem_tab[i, j])
        key = (u, v)
        hit = self._mem.get(key)
        if hit is not None:
            return hit
        L = self.L
        acc = L.bottom
        for c, b in v.entries:
            acc = L.join_table[acc, L.meet_table[b, self.eq(u, c)]]
        acc = int(acc)
        self._mem[key] = acc
        return acc

    def com(self, nodes) -> int:
        s = frozenset().union(*(u.support for u in nodes))
        hit = self._com.get(s)
        if hit is None:
            hit = self._com[s] = _com.commutator(self.L, s)
        return hit

    # terms and formulas -------------------------------------------------

    def term(self, t, env) -> QSet:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise FormulaError(f"unbound variable {t.name!r}") from None
        if isinstance(t, Const):
            return t.node
        if isinstance(t, NodeLit):
            return QSet((self.term(c, env), self.L.index(e)) for c, e in t.entries)
        if isinstance(t, CheckLit):
            return check_embed(self.L, t.hf)
        if isinstance(t, UbLit):
            return make_ub(self.L, self.L.index(t.elem))
        raise TypeError(t)

    def value(self, f, env=None) -> int:
        return self._val(f, dict(env or {}))

    def _val(self, f, env) -> int:
        L = self.L
        if isinstance(f, In):
            return self.mem(self.term(f.left, env), self.term(f.right, env))
        if isinstance(f, Eq):
            return self.eq(self.term(f.left, env), self.term(f.right, env))
        if isinstance(f, Com):
            return self.com([self.term(a, env) for a in f.args])
        if isinstance(f, Not):
            return int(L.ortho[self._val(f.body, env)])
        if isinstance(f, And):
            return int(L.meet_table[self._val(f.left, env), self._val(f.right, env)])
        if isinstance(f, Or):
            return int(L.join_table[self._val(f.left, env), self._val(f.right, env)])
        if isinstance(f, Implies):
            return int(self.impl[self._val(f.left, env), self._val(f.right, env)])
        if isinstance(f, Iff):
            a, b = self._val(f.left, env), self._val(f.right, env)
            return int(L.meet_table[self.impl[a, b], self.impl[b, a]])
        if isinstance(f, (Forall, Exists)):
            univ = isinstance(f, Forall)
            acc = L.top if univ else L.bottom
            saved = env.get(f.var, _MISSING)
            if f.bound is not None:
                items = self.term(f.bound, env).entries
            else:
                if self.domain is None:
                    raise FormulaError("unbounded quantifier needs a quantifier domain")
                items = ((u, None) for u in self.domain)
            for x, w in items:
                env[f.var] = x
                b = self._val(f.body, env)
                if w is None:
                    acc = L.meet_table[acc, b] if univ else L.join_table[acc, b]
                elif univ:
                    acc = L.meet_table[acc, self.impl[w, b]]
                else:
                    acc = L.join_table[acc, L.meet_table[w, b]]
            if saved is _MISSING:
                env.pop(f.var, None)
            else:
                env[f.var] = saved
            return int(acc)
        raise TypeError(f)


_MISSING = object()


def truth_value(ctx: EvalContext, f, env=None) -> int:
    """Truth value of a sentence; ``env`` closes any free variables."""
    if isinstance(f, str):
        f = parse(f)
    missing = free_vars(f) - set(env or {})
    if missing:
        raise FormulaError(f"open formula; free variable(s): {', '.join(sorted(missing))}")
    return ctx.value(f, env)


__all__ = [
    "parse", "parse_term", "show", "is_delta0", "free_vars", "substitute", "truth_value", "EvalContext",
    "FormulaError", "EMPTY",
]
