"""The ten acceptance criteria, each with its tolerance and time limit.

Every test prints one ``PASS``/``FAIL`` line (visible with ``-s`` or in the
``-v`` log through the terminal writer) and then asserts.
"""

import cmath
import math
import time

import pytest

from omlogic import harness as H
from omlogic import implication as I
from omlogic import lattice as LT
from omlogic import matrix as M
from omlogic.suites import commutator_report
from omlogic.universe import build_fragment

POLYS = [I.Poly(j) for j in range(6)]
THETAS = [math.pi / 4, math.pi / 2, math.pi, 3 * math.pi / 2]


@pytest.fixture(scope="module")
def sweep():
    return LT.sweep()


@pytest.fixture
def verdict(capsys):
    """Run a criterion under its time limit and print its verdict line."""

    def check(number, title, limit, body):
        start = time.perf_counter()
        ok, detail = body()
        elapsed = time.perf_counter() - start
        passed = bool(ok) and elapsed < limit
        line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d} {title}: {detail} [{elapsed:.2f}s < {limit}s]"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
        assert elapsed < limit, line

    return check


def _merge(reports):
    checked = sum(r.checked for r in reports)
    failed = sum(r.failed for r in reports)
    return failed == 0, f"checked={checked} failed={failed}"


def test_criterion_01_commutator_routes(sweep, verdict):
    def body():
        reps = [commutator_report(L, label, seed=M.DEFAULT_SEED, samples=500, max_size=2) for label, L in sweep]
        return _merge(reps)

    verdict(1, "commutator four-way equality", 60, body)


def test_criterion_02_kotas_classification(verdict):
    def body():
        L = LT.mo(2)
        a, b = L.index("a"), L.index("b")
        vals = [L.name(I.impl_eval(L, p, a, b)) for p in POLYS]
        reports = [I.check_axioms(L, p) for p in POLYS]
        ok = (
            vals == ["1", "a", "b'", "a'", "b", "0"]
            and len(set(vals)) == 6
            and [r.e for r in reports] == [j != 0 for j in range(6)]
            and {j for j, r in enumerate(reports) if r.mp} == {2, 3, 4, 5}
            and {j for j, r in enumerate(reports) if r.le} == {1, 2, 3, 4, 5}
        )
        return ok, f"values={vals}"

    verdict(2, "implication classification on MO2", 5, body)


def test_criterion_03_deduction(sweep, verdict):
    def body():
        bad = [(label, str(p)) for label, L in sweep for p in POLYS if not I.deduction_checks(L, p)]
        return not bad, f"failures={bad}"

    verdict(3, "deduction theorem", 30, body)


def test_criterion_04_twisted(verdict):
    def body():
        rep = M.verify_twisted_relations(samples=200, dims=(2, 3, 4), seed=M.DEFAULT_SEED, tol=1e-9)
        ok = rep.ok and rep.max_error <= 1e-9
        for theta in THETAS:
            w = M.non_polynomial_witness(theta)
            ok = ok and w.ok
            ok = ok and abs(w.e1_phi - math.sqrt(3) / 2) <= 1e-12
            ok = ok and abs(w.phi_phitheta - (1 + 3 * cmath.exp(1j * theta)) / 4) <= 1e-12
        return ok, f"relations checked={rep.checked} max_error={rep.max_error:.2e}; witness at {len(THETAS)} angles"

    verdict(4, "twisted relations and non-polynomial witness", 60, body)


def test_criterion_05_equality_semantics(sweep, verdict):
    def body():
        reps = []
        for _, L in sweep:
            frag = build_fragment(L, 2, 2)
            reps += [H.equality_gate(L, frag, p) for p in POLYS]
            if L.n <= 4:
                big = build_fragment(L, 3, 2)
                reps += [H.equality_gate(L, big, p) for p in POLYS]
        return _merge(reps)

    verdict(5, "equality and membership atoms", 120, body)


def test_criterion_06_absoluteness_and_restriction(sweep, verdict):
    def body():
        reps = []
        for label, L in sweep:
            for p in POLYS:
                for sub in H.absoluteness_sublogics(L):
                    reps.append(H.absoluteness_check(L, sub, 2, 2, p, label))
                reps.append(H.restriction_check(L, 2, 2, p, label))
        return _merge(reps)

    verdict(6, "bounded absoluteness and restriction", 120, body)


def test_criterion_07_elementary_equivalence(sweep, verdict):
    def body():
        reps = [H.elementary_equivalence_check(L, p, label=label) for label, L in sweep for p in POLYS]
        return _merge(reps)

    verdict(7, "agreement with the HF oracle", 60, body)


def test_criterion_08_delta0_transfer(sweep, verdict):
    def body():
        reps = [H.delta0_transfer_check(L, 2, 2, POLYS, label) for label, L in sweep]
        return _merge(reps)

    verdict(8, "bounded transfer bound", 300, body)


def test_criterion_09_bounded_de_morgan(sweep, verdict):
    def body():
        classical = [H.bounded_de_morgan_schedule(L, build_fragment(L, 2, 2), I.Poly(0)) for _, L in sweep]
        L = LT.mo(2)
        sasaki = H.de_morgan_checks(L, build_fragment(L, 2, 2), I.Poly(3))
        ce = sasaki.extra["bounded_counterexample"]
        ok, detail = _merge(classical)
        return ok and ce is not None, f"maximum implication {detail}; Sasaki counterexample {ce}"

    verdict(9, "bounded de Morgan dichotomy", 60, body)


def test_criterion_10_transfer_demonstrator(sweep, verdict):
    def body():
        reps = [H.transfer_suite(L, 2, 2, I.Poly(3), label) for label, L in sweep]
        ok, detail = _merge(reps)
        items = len(H.pi2_corpus())
        return ok and items == 2, f"{detail} over {items} forall-exists items (finite instance only)"

    verdict(10, "forall-exists transfer demonstrator", 60, body)
