"""Named verification suites, shared by the command line and the test-suite.

Each suite takes a :class:`RunConfig` and returns a list of
:class:`~omlogic.harness.VerificationReport`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from . import commutator as C
from . import harness as H
from . import implication as I
from . import matrix as M
from .lattice import Logic, sweep
from .universe import DEFAULT_BUDGET, build_fragment


@dataclass
class RunConfig:
    logics: list = field(default_factory=sweep)  # (label, Logic) pairs
    impl: object = None  # None means "suite default"
    rank: int = 2
    dom_cap: int = 2
    seed: int = M.DEFAULT_SEED
    budget: int = DEFAULT_BUDGET
    samples: int = 200
    dims: tuple = (2, 3, 4)
    thetas: tuple = (math.pi / 4, math.pi / 2, math.pi, 3 * math.pi / 2)

    def impl_or(self, default):
        return self.impl if self.impl is not None else default

    def header(self):
        return {
            "logics": [label for label, _ in self.logics],
            "impl": None if self.impl is None else str(self.impl),
            "rank": self.rank,
            "dom_cap": self.dom_cap,
            "seed": self.seed,
            "budget": self.budget,
            "samples": self.samples,
            "dims": list(self.dims),
        }


def _frag(cfg, L):
    return build_fragment(L, cfg.rank, cfg.dom_cap, budget=cfg.budget)


# ---------------------------------------------------------------------------
# lattice-level suites


def commutator_report(L: Logic, label="", seed=0, samples=500, max_size=2) -> H.VerificationReport:
    """The four commutator routes agree on all small families and on random triples."""
    rep = H.VerificationReport("commutator", {"logic": label, "max_size": max_size, "samples": samples, "seed": seed})
    families = [fam for r in range(max_size + 1) for fam in itertools.combinations(range(L.n), r)]
    rng = random.Random(seed)
    if L.n >= 3:
        families += [tuple(sorted(rng.sample(range(L.n), 3))) for _ in range(samples)]
    for fam in families:
        r = C.verify_commutator_equivalence(L, fam)
        rep.checked += 1
        if not r.agree:
            rep.fail(family=[L.names[p] for p in fam], **r.to_dict(L))
        by_cut = C.subcommutators_by_cut(L, fam)
        by_int = C.subcommutators_by_interval(L, fam)
        rep.checked += 1
        if not (r.subcommutator_set == by_cut == by_int):
            rep.fail(family=[L.names[p] for p in fam], reason="subcommutator characterisations differ")
        rep.checked += 1
        if not C.direct_product_check(L, fam):
            rep.fail(family=[L.names[p] for p in fam], reason="direct product decomposition")
    return rep


def implication_report(L: Logic, label="", impls=None) -> H.VerificationReport:
    impls = impls or [I.Poly(j) for j in range(6)]
    rep = H.VerificationReport("implication", {"logic": label, "impl": [str(s) for s in impls]})
    for spec in impls:
        ax = I.check_axioms(L, spec)
        checks = {
            "generalized": ax.generalized,
            "equivalences": bool(I.verify_implication_equivalences(L, spec)),
            "mp-characterisation": I.mp_characterization(L, spec),
            "deduction": I.deduction_checks(L, spec),
            "le": I.le_checks(L, spec),
        }
        for name, ok in checks.items():
            rep.checked += 1
            if not ok:
                rep.fail(impl=str(spec), check=name)
    rep.checked += 2
    if not I.verify_six_relations(L):
        rep.fail(check="six-relations")
    if not I.sasaki_characterizations(L):
        rep.fail(check="sasaki")
    return rep


def deduction_report(L: Logic, label="") -> H.VerificationReport:
    rep = H.VerificationReport("deduction", {"logic": label})
    for j in range(6):
        rep.checked += 1
        if not I.deduction_checks(L, I.Poly(j)):
            rep.fail(impl=f"poly:{j}")
    return rep


# ---------------------------------------------------------------------------
# suite registry


def _per_logic(fn):
    def run(cfg: RunConfig):
        return [fn(cfg, label, L) for label, L in cfg.logics]

    return run


@_per_logic
def _commutator(cfg, label, L):
    return commutator_report(L, label, seed=cfg.seed)


@_per_logic
def _implication(cfg, label, L):
    return implication_report(L, label, None if cfg.impl is None else [cfg.impl])


@_per_logic
def _equality(cfg, label, L):
    return H.equality_gate(L, _frag(cfg, L), cfg.impl_or(I.Poly(3)), label)


@_per_logic
def _elementary(cfg, label, L):
    return H.elementary_equivalence_check(L, cfg.impl_or(I.Poly(3)), label=label)


@_per_logic
def _absoluteness(cfg, label, L):
    rep = H.VerificationReport("absoluteness", {"logic": label, "impl": str(cfg.impl_or(I.Poly(3)))})
    for sub in H.absoluteness_sublogics(L):
        rep.merge(H.absoluteness_check(L, sub, cfg.rank, cfg.dom_cap, cfg.impl_or(I.Poly(3)), label))
    return rep


@_per_logic
def _restriction(cfg, label, L):
    # exhaustive at rank 2; beyond that the tuple count explodes, so sample
    sample = None if cfg.rank <= 2 else cfg.samples
    rep = H.restriction_check(L, cfg.rank, cfg.dom_cap, cfg.impl_or(I.Poly(3)), label, frag=_frag(cfg, L),
                              sample=sample, seed=cfg.seed)
    rep.params["sampled"] = sample
    return rep


@_per_logic
def _range(cfg, label, L):
    return H.range_and_commutation_check(L, cfg.rank, cfg.dom_cap, cfg.impl_or(I.Poly(3)), label)


@_per_logic
def _delta0(cfg, label, L):
    impls = None if cfg.impl is None else [cfg.impl]
    return H.delta0_transfer_check(L, cfg.rank, cfg.dom_cap, impls, label)


@_per_logic
def _transfer(cfg, label, L):
    return H.transfer_suite(L, cfg.rank, cfg.dom_cap, cfg.impl_or(I.Poly(3)), label)


@_per_logic
def _demorgan(cfg, label, L):
    rep = H.de_morgan_checks(L, _frag(cfg, L), cfg.impl_or(I.Poly(3)))
    rep.params["logic"] = label
    return rep


@_per_logic
def _demorgan_bounded(cfg, label, L):
    """Pass means: the bounded law holds exactly when the implication is the maximum one here."""
    impl = cfg.impl_or(I.Poly(3))
    frag = _frag(cfg, L)
    rep = H.de_morgan_checks(L, frag, impl)
    sched = H.bounded_de_morgan_schedule(L, frag, impl)
    out = H.VerificationReport("demorgan-bounded", {"logic": label, "impl": str(impl), **frag.params()})
    expect = bool((I.impl_table(L, impl) == I.poly_table(L, 0)).all())
    out.checked = 2
    out.extra = {"expect_bounded_law": expect, "schedule_holds": sched.ok, **rep.extra}
    if rep.extra["bounded_holds"] != expect:
        out.fail(expected=expect, observed=rep.extra["bounded_holds"], over="atomic templates")
    if sched.ok != expect:
        out.fail(expected=expect, observed=sched.ok, over="schedule")
    return out


@_per_logic
def _boolean(cfg, label, L):
    rep = H.VerificationReport("boolean", {"logic": label})
    if not L.is_boolean():
        rep.notes.append("skipped: logic is not Boolean")
        return rep
    frag = _frag(cfg, L)
    rep.merge(H.boolean_bounded_equivalence(L, frag, cfg.impl_or(I.Poly(0))))
    for text in ("exists x (x = x)", "exists x (x in check({{}}))"):
        _, _, r = H.boolean_maximum_witness(L, text, frag, cfg.impl_or(I.Poly(0)), witnessable=True)
        rep.merge(r)
    return rep


@_per_logic
def _truncation(cfg, label, L):
    rep = H.monotone_truncation_check(L, cfg.impl_or(I.Poly(3)))
    rep.params["logic"] = label
    return rep


def _twisted(cfg):
    r = M.verify_twisted_relations(cfg.samples, cfg.dims, cfg.seed)
    rep = H.VerificationReport("twisted", r.to_dict()["params"] | {"dims": list(cfg.dims)})
    rep.checked = r.checked
    for label, count in sorted(r.failures.items()):
        for _ in range(count):
            rep.fail(relation=label)
    for _ in range(r.mp_failures):
        rep.fail(relation="mp")
    rep.extra = {"max_error": r.max_error, "kinds": r.kinds, "mp_counterexamples_for_3_1": r.mp31_counterexamples}
    return [rep]


def _witness(cfg):
    rep = H.VerificationReport("non-polynomial", {"thetas": list(cfg.thetas)})
    for theta in cfg.thetas:
        w = M.non_polynomial_witness(theta)
        rep.checked += 1
        if not w.ok:
            rep.fail(**w.to_dict())
    return [rep]


SUITES = {
    "commutator": _commutator,
    "implication": _implication,
    "equality": _equality,
    "elementary": _elementary,
    "absoluteness": _absoluteness,
    "restriction": _restriction,
    "range": _range,
    "delta0-transfer": _delta0,
    "transfer": _transfer,
    "demorgan": _demorgan,
    "demorgan-bounded": _demorgan_bounded,
    "boolean": _boolean,
    "truncation": _truncation,
    "twisted": _twisted,
    "witness": _witness,
}

# suites whose reports only make sense after the equality gate passes
GATED = {"elementary", "absoluteness", "restriction", "range", "delta0-transfer", "transfer", "demorgan",
         "demorgan-bounded", "boolean", "truncation"}


def run(names, cfg: RunConfig):
    """Run suites in order; universe suites are preceded by the equality gate."""
    names = list(SUITES) if names in (None, "all", ["all"]) else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    reports = []
    if any(n in GATED for n in names) and "equality" not in names:
        gate = SUITES["equality"](cfg)
        reports.extend(gate)
        if not all(r.ok for r in gate):
            return reports
    for n in names:
        reports.extend(SUITES[n](cfg))
    return reports
