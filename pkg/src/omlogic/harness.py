"""Verification suites for the Q-valued universe.

Everything here returns a :class:`VerificationReport`.  Suites that range
over a truncated universe say so in ``notes``; the unbounded quantifier
semantics there is relative to the fragment that was built.

The classical oracle :func:`hf_eval` evaluates formulas on hereditarily
finite sets (nested ``frozenset``s) and is used to vet the corpus and as the
reference side of the elementary-equivalence suite.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from . import formula as F
from .implication import Poly, impl_table
from .lattice import Logic
from .universe import (
    QSet,
    build_fragment,
    check_embed,
    make_ub,
    qset_commutator,
    restrict,
    support,
    translate,
)

FRAGMENT_NOTE = "unbounded quantifiers range over the built fragment only"

# ---------------------------------------------------------------------------
# hereditarily finite sets


def hf_universe(k: int) -> list:
    """The k-th cumulative stage (``hf_universe(4)`` has 16 sets)."""
    stage = [frozenset()]
    for _ in range(k - 1):
        stage = [frozenset(c) for r in range(len(stage) + 1) for c in itertools.combinations(stage, r)]
    stage = [frozenset()] if k == 1 else stage
    return sorted(stage, key=_hf_key)


def _hf_key(s):
    return (hf_rank(s), len(s), sorted(_hf_key(t) for t in s))


def hf_rank(s) -> int:
    return 1 + max((hf_rank(t) for t in s), default=0) if s else 1


def hf_show(s) -> str:
    return "{" + ",".join(hf_show(t) for t in sorted(s, key=_hf_key)) + "}"


def _hf_term(t, env):
    if isinstance(t, F.Var):
        try:
            return env[t.name]
        except KeyError:
            raise F.FormulaError(f"unbound variable {t.name!r}") from None
    if isinstance(t, F.CheckLit):
        return t.hf
    if isinstance(t, F.NodeLit) and not t.entries:
        return frozenset()
    raise F.FormulaError("only check(...) and {} literals have a classical reading")


def hf_eval(f, env=None, universe=None) -> bool:
    """Two-valued satisfaction on hereditarily finite sets."""
    env = dict(env or {})
    if isinstance(f, str):
        f = F.parse(f)
    return _hf(f, env, universe)


def _hf(f, env, universe):
    if isinstance(f, F.In):
        return _hf_term(f.left, env) in _hf_term(f.right, env)
    if isinstance(f, F.Eq):
        return _hf_term(f.left, env) == _hf_term(f.right, env)
    if isinstance(f, F.Com):
        return True
    if isinstance(f, F.Not):
        return not _hf(f.body, env, universe)
    if isinstance(f, F.And):
        return _hf(f.left, env, universe) and _hf(f.right, env, universe)
    if isinstance(f, F.Or):
        return _hf(f.left, env, universe) or _hf(f.right, env, universe)
    if isinstance(f, F.Implies):
        return (not _hf(f.left, env, universe)) or _hf(f.right, env, universe)
    if isinstance(f, F.Iff):
        return _hf(f.left, env, universe) == _hf(f.right, env, universe)
    if isinstance(f, (F.Forall, F.Exists)):
        if f.bound is not None:
            rng = _hf_term(f.bound, env)
        elif universe is None:
            raise F.FormulaError("unbounded quantifier needs a universe")
        else:
            rng = universe
        test = all if isinstance(f, F.Forall) else any
        saved = env.get(f.var, None)

        def each(x):
            env[f.var] = x
            return _hf(f.body, env, universe)

        out = test(each(x) for x in rng)
        if saved is None:
            env.pop(f.var, None)
        else:
            env[f.var] = saved
        return out
    raise TypeError(f)


# ---------------------------------------------------------------------------
# corpus and schedule


@dataclass(frozen=True)
class CorpusItem:
    name: str
    text: str
    vars: tuple
    note: str
    theorem: bool = True

    @property
    def formula(self):
        return F.parse(self.text, free=self.vars)

    @property
    def delta0(self) -> bool:
        return F.is_delta0(self.formula)

    def pi2_parts(self):
        """``(x, y, psi)`` for a sentence of the form ``forall x exists y psi``."""
        f = self.formula
        if isinstance(f, F.Forall) and f.bound is None and isinstance(f.body, F.Exists) and f.body.bound is None:
            if F.is_delta0(f.body.body):
                return f.var, f.body.var, f.body.body
        raise ValueError(f"{self.name} is not a forall-exists sentence with bounded matrix")


CORPUS = [
    CorpusItem("subset-reflexive", "x sub x", ("x",), "every element of x is an element of x"),
    CorpusItem("eq-reflexive", "x = x", ("x",), "reflexivity of equality in first-order logic"),
    CorpusItem("eq-symmetric", "x = y -> y = x", ("x", "y"), "symmetry of equality in first-order logic"),
    CorpusItem(
        "subset-transitive",
        "(x sub y and y sub z) -> x sub z",
        ("x", "y", "z"),
        "chain the two inclusions elementwise",
    ),
    CorpusItem(
        "eq-gives-subsets",
        "x = y -> (x sub y and y sub x)",
        ("x", "y"),
        "substitute y for x in the reflexive inclusion",
    ),
    CorpusItem(
        "subset-unfolds",
        "forall t in x (t in y) <-> x sub y",
        ("x", "y"),
        "inclusion is defined by the bounded formula on the left",
    ),
    CorpusItem("upper-bound", "forall x exists y (x sub y)", (), "take y = x"),
    CorpusItem("member-of-something", "forall x exists y (x in y)", (), "pairing gives y = {x}"),
]

NON_THEOREMS = [
    CorpusItem("member", "x in y", ("x", "y"), "false for x = y = {}", theorem=False),
    CorpusItem("equal", "x = y", ("x", "y"), "false for {} and {{}}", theorem=False),
    CorpusItem("subset", "x sub y", ("x", "y"), "false for {{}} and {}", theorem=False),
    CorpusItem("member-swap", "x in y -> y in x", ("x", "y"), "false for {} and {{}}", theorem=False),
    CorpusItem("inhabited", "exists t in x (t = t)", ("x",), "false for {}", theorem=False),
    CorpusItem(
        "proper-subset", "x sub y and not (x = y)", ("x", "y"), "false for x = y", theorem=False
    ),
    CorpusItem(
        "subset-chain-reversed",
        "(x sub y and y sub z) -> z sub x",
        ("x", "y", "z"),
        "false for {}, {}, {{}}",
        theorem=False,
    ),
]


def delta0_corpus():
    return [c for c in CORPUS if c.delta0]


def pi2_corpus():
    return [c for c in CORPUS if not c.delta0]


def schedule():
    """Bounded formulas used by the absoluteness, restriction and equivalence suites."""
    return delta0_corpus() + NON_THEOREMS


def vet_corpus(k: int = 4) -> list:
    """Return the corpus items that fail classically on ``hf_universe(k)`` tuples.

    Forall-exists items take x from stage ``k - 1`` and y from stage ``k`` so
    that every witness the classical proof names is available.
    """
    bad = []
    sets = hf_universe(k)
    for item in schedule():
        f = item.formula
        verdicts = (hf_eval(f, dict(zip(item.vars, tup))) for tup in itertools.product(sets, repeat=len(item.vars)))
        holds = all(verdicts)
        if holds != item.theorem:
            bad.append(item.name)
    small = hf_universe(k - 1)
    for item in pi2_corpus():
        x, y, psi = item.pi2_parts()
        if not all(any(hf_eval(psi, {x: a, y: b}) for b in sets) for a in small):
            bad.append(item.name)
    return bad


# ---------------------------------------------------------------------------
# reports


@dataclass
class VerificationReport:
    suite: str
    params: dict
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    max_witnesses: int = 20
    _failed: int = 0

    @property
    def failed(self) -> int:
        return self._failed

    def fail(self, **witness):
        self._failed += 1
        if len(self.failures) < self.max_witnesses:
            self.failures.append(witness)

    @property
    def ok(self) -> bool:
        return self._failed == 0

    def merge(self, other: "VerificationReport"):
        self.checked += other.checked
        self._failed += other._failed
        room = self.max_witnesses - len(self.failures)
        self.failures.extend(other.failures[: max(room, 0)])
        for n in other.notes:
            if n not in self.notes:
                self.notes.append(n)
        return self

    def to_dict(self):
        out = {
            "suite": self.suite,
            "params": self.params,
            "checked": self.checked,
            "failed": self.failed,
            "witnesses": self.failures,
        }
        if self.notes:
            out["notes"] = self.notes
        if self.extra:
            out["extra"] = self.extra
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=str)

    def lines(self):
        status = "PASS" if self.ok else "FAIL"
        yield f"[{status}] {self.suite} {json.dumps(self.params, sort_keys=True)}: checked={self.checked} failed={self.failed}"
        for n in self.notes:
            yield f"    note: {n}"
        for w in self.failures:
            yield f"    witness: {json.dumps(w, sort_keys=True, default=str)}"


def _params(L_spec, impl, **kw):
    d = {"logic": L_spec, "impl": str(impl)}
    d.update(kw)
    return d


def _nm(L, p):
    return L.names[p]


def make_context(L: Logic, impl, frag=None) -> F.EvalContext:
    ctx = F.EvalContext(L, impl, domain=frag.nodes if frag is not None else None)
    if frag is not None:
        ctx.prime(frag.nodes)
    return ctx


# ---------------------------------------------------------------------------
# suites


def equality_gate(L: Logic, frag, impl=Poly(3), label="") -> VerificationReport:
    """[[u = u]] = 1, symmetry of [[u = v]], and u(x) <= [[x in u]] on the fragment."""
    rep = VerificationReport("equality-gate", _params(label, impl, **frag.params()))
    ctx = make_context(L, impl, frag)
    nodes = frag.nodes
    for u in nodes:
        rep.checked += 1
        if ctx.eq(u, u) != L.top:
            rep.fail(prop="reflexive", u=u.show(L), value=_nm(L, ctx.eq(u, u)))
        for x, w in u.entries:
            rep.checked += 1
            if not L.le(w, ctx.mem(x, u)):
                rep.fail(prop="value-below-membership", u=u.show(L), x=x.show(L))
    for u, v in itertools.combinations(nodes, 2):
        rep.checked += 1
        if ctx.eq(u, v) != ctx.eq(v, u):
            rep.fail(prop="symmetric", u=u.show(L), v=v.show(L))
    return rep


def elementary_equivalence_check(L: Logic, impl=Poly(3), k=4, label="", items=None) -> VerificationReport:
    """Classical truth on HF tuples agrees with truth value 1 of the check-names."""
    rep = VerificationReport("elementary-equivalence", _params(label, impl, hf_stage=k))
    sets = hf_universe(k)
    checks = {s: check_embed(L, s) for s in sets}
    ctx = F.EvalContext(L, impl)
    ctx.prime(checks.values())
    for item in items or schedule():
        f = item.formula
        for tup in itertools.product(sets, repeat=len(item.vars)):
            classical = hf_eval(f, dict(zip(item.vars, tup)))
            val = ctx.value(f, {v: checks[s] for v, s in zip(item.vars, tup)})
            rep.checked += 1
            if classical != (val == L.top):
                rep.fail(item=item.name, sets=[hf_show(s) for s in tup], classical=classical, value=_nm(L, val))
    return rep


def _tuples(nodes, arity):
    return itertools.product(nodes, repeat=arity)


def absoluteness_check(L: Logic, sub, rank=2, dom_cap=2, impl=Poly(3), label="", items=None) -> VerificationReport:
    """Truth values over the sub-fragment agree in the sublogic and in the whole logic.

    The sublogic is materialised as a standalone logic, so the two sides are
    computed by separate evaluators over separate carriers.
    """
    sub = frozenset(sub)
    S, emb = L.restrict_to(sub)
    to_sub = {int(p): k for k, p in enumerate(emb)}
    frag = build_fragment(L, rank, dom_cap, values=sub)
    rep = VerificationReport(
        "absoluteness",
        _params(label, impl, rank=rank, dom_cap=dom_cap, sublogic=sorted(L.names[p] for p in sub)),
    )
    big = make_context(L, impl, frag)
    small = F.EvalContext(S, impl)
    small.prime([translate(u, to_sub) for u in frag.nodes])
    for item in items or schedule():
        f = item.formula
        for tup in _tuples(frag.nodes, len(item.vars)):
            a = big.value(f, dict(zip(item.vars, tup)))
            b = small.value(f, {v: translate(u, to_sub) for v, u in zip(item.vars, tup)})
            rep.checked += 1
            if a != int(emb[b]):
                rep.fail(item=item.name, nodes=[u.show(L) for u in tup], whole=_nm(L, a), sub=S.names[b])
    return rep


def restriction_check(L: Logic, rank=2, dom_cap=2, impl=Poly(3), label="", items=None, frag=None,
                      sample=None, seed=0) -> VerificationReport:
    """[[phi(u)]] & p = [[phi(u|p)]] & p for p commuting with the supports, plus the atom identities."""
    import random

    frag = frag or build_fragment(L, rank, dom_cap)
    rep = VerificationReport("restriction", _params(label, impl, **frag.params()))
    ctx = make_context(L, impl, frag)
    m = L.meet
    rng = random.Random(seed)
    cache = {}

    def r(u, p):
        key = (u, p)
        if key not in cache:
            cache[key] = restrict(L, u, p)
        return cache[key]

    collisions = 0
    if sample is not None and sample < len(frag.nodes) ** 2:
        pairs = [(rng.choice(frag.nodes), rng.choice(frag.nodes)) for _ in range(sample)]
    else:
        pairs = _tuples(frag.nodes, 2)
    for u, v in pairs:
        for p in sorted(L.commutant(support(u, v))):
            up, vp = r(u, p), r(v, p)
            if len(up) < len(u) or len(vp) < len(v):
                collisions += 1
            sub_uv = ctx.value(_SUB, {"x": u, "y": v})
            sub_p = ctx.value(_SUB, {"x": up, "y": vp})
            checks = [
                ("atom-in", ctx.mem(up, vp), m(ctx.mem(u, v), p)),
                ("atom-sub", m(sub_p, p), m(sub_uv, p)),
                ("atom-eq", m(ctx.eq(up, vp), p), m(ctx.eq(u, v), p)),
            ]
            for name, lhs, rhs in checks:
                rep.checked += 1
                if lhs != rhs:
                    rep.fail(prop=name, u=u.show(L), v=v.show(L), p=_nm(L, p), lhs=_nm(L, lhs), rhs=_nm(L, rhs))
    for item in items or schedule():
        f = item.formula
        k = len(item.vars)
        if sample is not None and sample < len(frag.nodes) ** k:
            tuples = [tuple(rng.choice(frag.nodes) for _ in range(k)) for _ in range(sample)]
        else:
            tuples = _tuples(frag.nodes, k)
        for tup in tuples:
            val = ctx.value(f, dict(zip(item.vars, tup)))
            for p in sorted(L.commutant(support(*tup))):
                rv = ctx.value(f, {x: r(u, p) for x, u in zip(item.vars, tup)})
                rep.checked += 1
                if m(val, p) != m(rv, p):
                    rep.fail(item=item.name, nodes=[u.show(L) for u in tup], p=_nm(L, p))
    rep.extra["restriction_collisions"] = collisions
    return rep


_SUB = F.parse("x sub y")


def range_and_commutation_check(L: Logic, rank=2, dom_cap=2, impl=Poly(3), label="", items=None) -> VerificationReport:
    frag = build_fragment(L, rank, dom_cap)
    rep = VerificationReport("range-and-commutation", _params(label, impl, **frag.params()))
    ctx = make_context(L, impl, frag)
    gen_cache = {}
    for item in items or schedule():
        f = item.formula
        for tup in _tuples(frag.nodes, len(item.vars)):
            s = support(*tup)
            if s not in gen_cache:
                gen_cache[s] = (L.sublogic_generated(s), sorted(L.commutant(s)))
            gen, comm = gen_cache[s]
            val = ctx.value(f, dict(zip(item.vars, tup)))
            rep.checked += 1
            if val not in gen:
                rep.fail(prop="range", item=item.name, nodes=[u.show(L) for u in tup], value=_nm(L, val))
            for p in comm:
                rv = ctx.value(f, {x: restrict(L, u, p) for x, u in zip(item.vars, tup)})
                rep.checked += 1
                if not (L.commutes(p, val) and L.commutes(p, rv)):
                    rep.fail(prop="commutation", item=item.name, nodes=[u.show(L) for u in tup], p=_nm(L, p))
    return rep


def delta0_transfer_check(L: Logic, rank=2, dom_cap=2, impls=None, label="", items=None) -> VerificationReport:
    """com(u1..un) <= [[phi(u1..un)]] for every bounded corpus theorem and every tuple."""
    impls = impls or [Poly(j) for j in range(6)]
    frag = build_fragment(L, rank, dom_cap)
    rep = VerificationReport(
        "delta0-transfer", {"logic": label, "impl": [str(i) for i in impls], **frag.params()}
    )
    for impl in impls:
        ctx = make_context(L, impl, frag)
        for item in items or delta0_corpus():
            f = item.formula
            for tup in _tuples(frag.nodes, len(item.vars)):
                c = ctx.com(tup)
                val = ctx.value(f, dict(zip(item.vars, tup)))
                rep.checked += 1
                if not L.le(c, val):
                    rep.fail(item=item.name, impl=str(impl), nodes=[u.show(L) for u in tup],
                             com=_nm(L, c), value=_nm(L, val))
    return rep


def boolean_maximum_witness(L: Logic, sentence, frag, impl=Poly(0), env=None, witnessable=False):
    """Search the fragment for a node attaining ``[[exists x phi(x)]]``.

    Returns ``(node or None, value, report)``; a missing witness is a failure
    only when ``witnessable`` is set.
    """
    if not L.is_boolean():
        raise ValueError("the maximum principle is only checked for Boolean logics")
    f = F.parse(sentence) if isinstance(sentence, str) else sentence
    if not isinstance(f, F.Exists) or f.bound is not None:
        raise ValueError("expected a sentence of the form 'exists x phi'")
    ctx = make_context(L, impl, frag)
    env = dict(env or {})
    sup = ctx.value(f, env)
    rep = VerificationReport("boolean-maximum", _params("", impl, sentence=F.show(f, L), **frag.params()))
    rep.notes.append(FRAGMENT_NOTE)
    rep.checked = 1
    for u in frag.nodes:
        if ctx.value(f.body, {**env, f.var: u}) == sup:
            rep.extra["witness"] = u.show(L)
            return u, sup, rep
    rep.extra["witness"] = None
    if witnessable:
        rep.fail(sentence=F.show(f, L), value=_nm(L, sup), reason="not attained in fragment")
    else:
        rep.notes.append("supremum not attained inside the fragment")
    return None, sup, rep


# ---------------------------------------------------------------------------
# de Morgan and the Boolean bounded equivalence


def _demorgan_pairs(L: Logic, frag):
    """(u, phi) pairs: phi has the free variable x and constants from the fragment."""
    templates = ["x in w", "w in x", "x = w", "x sub w", "w sub x"]
    for u in frag.nodes:
        if not u.entries:
            continue
        for w in frag.nodes:
            for t in templates:
                yield u, F.substitute(F.parse(t), "w", w), t, w


def de_morgan_checks(L: Logic, frag, impl) -> VerificationReport:
    """Laws for connectives and unbounded quantifiers, and the bounded law.

    ``extra['bounded_holds']`` tells whether the bounded law held everywhere;
    ``extra['bounded_counterexample']`` records the first failure.
    """
    rep = VerificationReport("de-morgan", _params("", impl, **frag.params()))
    rep.notes.append(FRAGMENT_NOTE)
    ctx = make_context(L, impl, frag)
    o = L.ortho
    atoms = [F.parse(t) for t in ("x in y", "x = y", "y in x", "x sub y")]
    for u, v in itertools.product(frag.nodes, repeat=2):
        env = {"x": u, "y": v}
        for a, b in itertools.combinations_with_replacement(atoms, 2):
            va, vb = ctx.value(a, env), ctx.value(b, env)
            rep.checked += 2
            if o[L.meet(va, vb)] != L.join(o[va], o[vb]):
                rep.fail(law="not-and", a=F.show(a), b=F.show(b))
            if o[L.join(va, vb)] != L.meet(o[va], o[vb]):
                rep.fail(law="not-or", a=F.show(a), b=F.show(b))
    for v in frag.nodes:
        for a in atoms:
            env = {"y": v}
            ex = ctx.value(F.Exists("x", None, a), env)
            fa = ctx.value(F.Forall("x", None, F.Not(a)), env)
            fo = ctx.value(F.Forall("x", None, a), env)
            en = ctx.value(F.Exists("x", None, F.Not(a)), env)
            rep.checked += 2
            if o[ex] != fa:
                rep.fail(law="not-exists", phi=F.show(a), y=v.show(L))
            if o[fo] != en:
                rep.fail(law="not-forall", phi=F.show(a), y=v.show(L))
    bounded_ok = True
    counter = None
    bounded_checked = 0
    for u, phi, t, w in _demorgan_pairs(L, frag):
        env = {"u": u}
        lhs1 = o[ctx.value(F.Exists("x", F.Var("u"), phi), env)]
        rhs1 = ctx.value(F.Forall("x", F.Var("u"), F.Not(phi)), env)
        lhs2 = o[ctx.value(F.Forall("x", F.Var("u"), phi), env)]
        rhs2 = ctx.value(F.Exists("x", F.Var("u"), F.Not(phi)), env)
        bounded_checked += 2
        for form, lhs, rhs in (("exists", lhs1, rhs1), ("forall", lhs2, rhs2)):
            if lhs != rhs:
                bounded_ok = False
                if counter is None:
                    counter = {"u": u.show(L), "phi": t, "w": w.show(L), "form": form,
                               "lhs": _nm(L, int(lhs)), "rhs": _nm(L, int(rhs))}
    rep.checked += bounded_checked
    rep.extra["bounded_holds"] = bounded_ok
    rep.extra["bounded_counterexample"] = counter
    return rep


def bounded_de_morgan_schedule(L: Logic, frag, impl, items=None) -> VerificationReport:
    """The bounded law for every schedule item, each free variable in turn playing x.

    ``not exists x in u phi`` against ``forall x in u not phi`` (and dually),
    with u and the remaining variables ranging over the fragment.
    """
    rep = VerificationReport("bounded-de-morgan", _params("", impl, **frag.params()))
    ctx = make_context(L, impl, frag)
    o = L.ortho
    for item in items or schedule():
        f = item.formula
        for x in item.vars:
            rest = [v for v in item.vars if v != x]
            # a fresh name for the bound, so it cannot clash with the item's variables
            bound = F.Var("_u")
            ex, fa = F.Exists(x, bound, f), F.Forall(x, bound, F.Not(f))
            fo, en = F.Forall(x, bound, f), F.Exists(x, bound, F.Not(f))
            for u in frag.nodes:
                for tup in _tuples(frag.nodes, len(rest)):
                    env = {"_u": u, **dict(zip(rest, tup))}
                    rep.checked += 2
                    if o[ctx.value(ex, env)] != ctx.value(fa, env):
                        rep.fail(item=item.name, x=x, form="exists", u=u.show(L))
                    if o[ctx.value(fo, env)] != ctx.value(en, env):
                        rep.fail(item=item.name, x=x, form="forall", u=u.show(L))
    return rep


def boolean_bounded_equivalence(L: Logic, frag, impl=Poly(0)) -> VerificationReport:
    """Bounded quantifiers agree with their relativised unbounded forms on a Boolean logic."""
    if not L.is_boolean():
        raise ValueError("only meaningful for Boolean logics")
    rep = VerificationReport("boolean-bounded-equivalence", _params("", impl, **frag.params()))
    rep.notes.append(FRAGMENT_NOTE)
    ctx = make_context(L, impl, frag)
    xu = F.parse("x in u")
    for u, phi, t, w in _demorgan_pairs(L, frag):
        env = {"u": u}
        pairs = [
            (F.Forall("x", F.Var("u"), phi), F.Forall("x", None, F.Implies(xu, phi))),
            (F.Exists("x", F.Var("u"), phi), F.Exists("x", None, F.And(xu, phi))),
        ]
        for bounded, relativised in pairs:
            rep.checked += 1
            a, b = ctx.value(bounded, env), ctx.value(relativised, env)
            if a != b:
                rep.fail(u=u.show(L), phi=t, w=w.show(L), bounded=_nm(L, a), relativised=_nm(L, b))
    return rep


def monotone_truncation_check(L: Logic, impl=Poly(3), small=(2, 2), large=(3, 1)) -> VerificationReport:
    """Enlarging the quantifier domain can only lower a forall and raise an exists."""
    f_small = build_fragment(L, *small)
    f_large = build_fragment(L, *large)
    missing = [u for u in f_small.nodes if u not in f_large]
    domain = f_large.nodes + missing
    rep = VerificationReport("monotone-truncation", _params("", impl, small=small, large=large))
    a = F.EvalContext(L, impl, domain=f_small.nodes)
    b = F.EvalContext(L, impl, domain=domain)
    b.prime(domain)
    a._pos, a._eq_tab, a._mem_tab = b._pos, b._eq_tab, b._mem_tab
    for text in ("x in y", "y in x", "x = y", "x sub y", "y sub x"):
        body = F.parse(text)
        for v in f_small.nodes:
            env = {"y": v}
            fa_s, fa_l = a.value(F.Forall("x", None, body), env), b.value(F.Forall("x", None, body), env)
            ex_s, ex_l = a.value(F.Exists("x", None, body), env), b.value(F.Exists("x", None, body), env)
            rep.checked += 2
            if not L.le(fa_l, fa_s):
                rep.fail(quantifier="forall", phi=text, y=v.show(L))
            if not L.le(ex_s, ex_l):
                rep.fail(quantifier="exists", phi=text, y=v.show(L))
    return rep


# ---------------------------------------------------------------------------
# forall-exists demonstrator


@dataclass
class TransferTrace:
    item: str
    u: str
    steps: list = field(default_factory=list)
    outcome: str = "pending"

    @property
    def ok(self) -> bool:
        return self.outcome == "success"

    def step(self, name, ok=True, **data):
        self.steps.append({"step": name, "ok": bool(ok), **data})
        return ok

    def to_dict(self):
        return {"item": self.item, "u": self.u, "outcome": self.outcome, "steps": self.steps}


def _witness_candidates(L, bfrag_nodes, up, B):
    yield from bfrag_nodes
    yield up
    pool = list(bfrag_nodes) + [up]
    for b in sorted(B, key=lambda p: (p != L.top, p)):
        for x in pool:
            yield QSet([(x, b)])


def transfer_demonstrator(L: Logic, item: CorpusItem, u: QSet, impl=Poly(3), rank=2, dom_cap=2) -> TransferTrace:
    """Walk the forall-exists transfer argument for one node ``u``."""
    x, y, psi = item.pi2_parts()
    tr = TransferTrace(item.name, u.show(L))
    n = lambda p: _nm(L, p)  # noqa: E731
    p = qset_commutator(L, [u])
    tr.step("commutator", p=n(p))
    Z = L.center(u.support)
    tr.step("centre", ok=p in Z, centre=sorted(n(z) for z in Z))
    B = frozenset(L.maximal_boolean_sublogic(Z))
    tr.step("boolean-block", ok=Z <= B and L.is_boolean(B), block=sorted(n(b) for b in B))
    up = restrict(L, u, p)
    sup_expected = frozenset(L.meet(s, p) for s in u.support)
    ok = up.support <= B and up.support == sup_expected
    if not tr.step("restricted", ok=ok, u_p=up.show(L), support=sorted(n(s) for s in up.support)):
        tr.outcome = "restriction left the block"
        return tr

    S, emb = L.restrict_to(B)
    to_s = {int(q): k for k, q in enumerate(emb)}
    back = lambda k: int(emb[k])  # noqa: E731
    bfrag = build_fragment(L, rank, dom_cap, values=B)
    ctx_b = F.EvalContext(S, impl)
    up_s = translate(up, to_s)
    witness = None
    tried = 0
    for cand in _witness_candidates(L, bfrag.nodes, up, B):
        tried += 1
        if ctx_b.value(psi, {x: up_s, y: translate(cand, to_s)}) == S.top:
            witness = cand
            break
    if witness is None:
        tr.step("search", ok=False, tried=tried)
        tr.outcome = "witness beyond fragment"
        return tr
    tr.step("search", v_prime=witness.show(L), tried=tried)

    vp_s = translate(witness, to_s)
    dom = {c: None for c in witness.dom}
    for b in sorted(B):
        dom.setdefault(make_ub(L, b), None)
    v = QSet((c, back(ctx_b.mem(translate(c, to_s), vp_s))) for c in dom)
    v_s = translate(v, to_s)
    tr.step("extend", v=v.show(L), support_is_block=v.support == B)
    tr.step("v-equals-v'", ok=ctx_b.eq(v_s, vp_s) == S.top)
    tr.step("psi-in-block", ok=ctx_b.value(psi, {x: up_s, y: v_s}) == S.top)

    ctx = F.EvalContext(L, impl)
    in_q = ctx.value(psi, {x: up, y: v})
    tr.step("psi-absolute", ok=in_q == L.top, value=n(in_q))
    com_uv = ctx.com([u, v])
    tr.step("commutator-unchanged", ok=com_uv == p, com_uv=n(com_uv))
    full = ctx.value(psi, {x: u, y: v})
    tr.step("restriction", ok=L.meet(full, p) == p, value=n(full))
    lower = L.meet(com_uv, full)
    tr.step("lower-bound", ok=L.le(p, lower), bound=n(lower))
    t = impl_table(L, impl)
    tr.step("deduction", ok=int(t[p, lower]) == L.top)
    tr.outcome = "success" if all(s["ok"] for s in tr.steps) else "failed"
    return tr


def transfer_suite(L: Logic, rank=2, dom_cap=2, impl=Poly(3), label="") -> VerificationReport:
    frag = build_fragment(L, rank, dom_cap)
    rep = VerificationReport("transfer", _params(label, impl, **frag.params()))
    rep.notes.append("forall-exists corpus items only; witnesses searched in the block fragment plus one step")
    for item in pi2_corpus():
        for u in frag.nodes:
            tr = transfer_demonstrator(L, item, u, impl, rank, dom_cap)
            rep.checked += 1
            if not tr.ok:
                rep.fail(**tr.to_dict())
    return rep


def absoluteness_sublogics(L: Logic):
    """Sublogics exercised by the absoluteness suite: {0,1}, centre, blocks, single generators."""
    subs = {frozenset({L.bottom, L.top}), frozenset(L.center())}
    subs.update(frozenset(B) for B in L.maximal_boolean_sublogics())
    for p in range(L.n):
        subs.add(frozenset(L.sublogic_generated({p})))
    subs.add(frozenset(range(L.n)))
    return sorted(subs, key=lambda s: (len(s), sorted(s)))

