"""Projection lattices of small complex inner-product spaces.

Projections are plain ``numpy`` complex arrays.  Lattice operations go
through spectral decompositions with a rank threshold, so results are exact
projections up to rounding.  On top of that sit the twisted operation
``P o_theta Q = exp(i theta P) Q exp(-i theta P)`` and the twisted
implications built from it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import expm

TAU = 1e-9
RANK_EPS = 1e-7
MAX_DIM = 8
DEFAULT_SEED = 0xC0FFEE


class NumericalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class MatrixContext:
    dim: int
    tol: float = TAU

    def __post_init__(self):
        if not 0 < self.tol <= 1e-6:
            raise ValueError("tolerance must lie in (0, 1e-6]")
        if not 1 <= self.dim <= MAX_DIM:
            raise ValueError(f"dimension must be 1..{MAX_DIM}")


def _norm(a):
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def is_projection(P, tol=TAU) -> bool:
    P = np.asarray(P)
    return _norm(P - P.conj().T) <= tol and _norm(P @ P - P) <= tol


def _check_pair(P, Q):
    if P.shape != Q.shape or P.shape[0] != P.shape[1]:
        raise ValueError(f"dimension mismatch: {P.shape} vs {Q.shape}")


def close(A, B, tol=TAU) -> bool:
    return _norm(np.asarray(A) - np.asarray(B)) <= tol


def span_projection(vectors) -> np.ndarray:
    """Projection onto the span of the given columns."""
    V = np.asarray(vectors, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    U = U[:, s > RANK_EPS]
    return U @ U.conj().T


def ket(*coords) -> np.ndarray:
    return np.asarray(coords, dtype=complex)


def ketbra(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def identity(dim):
    return np.eye(dim, dtype=complex)


def zero(dim):
    return np.zeros((dim, dim), dtype=complex)


def proj_ortho(P):
    return identity(P.shape[0]) - P


def proj_meet(P, Q):
    _check_pair(P, Q)
    n = P.shape[0]
    M = (identity(n) - P) + (identity(n) - Q)
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    V = V[:, w < RANK_EPS]
    return V @ V.conj().T


def proj_join(P, Q):
    _check_pair(P, Q)
    return span_projection(np.hstack([P, Q]))


def proj_le(P, Q, tol=TAU) -> bool:
    return close(Q @ P, P, tol)


def proj_commutes(P, Q, tol=TAU) -> bool:
    _check_pair(P, Q)
    return _norm(P @ Q - Q @ P) <= tol


def marsden_com(P, Q):
    Po, Qo = proj_ortho(P), proj_ortho(Q)
    out = proj_meet(P, Q)
    for A, B in ((P, Qo), (Po, Q), (Po, Qo)):
        out = proj_join(out, proj_meet(A, B))
    return out


def poly(j: int, P, Q):
    """The j-th two-variable implication polynomial on projections."""
    m, v, o = proj_meet, proj_join, proj_ortho
    Po, Qo = o(P), o(Q)
    if j == 0:
        return v(Po, Q)
    if j == 1:
        return v(v(m(Po, Qo), m(Po, Q)), m(P, v(Po, Q)))
    if j == 2:
        return v(v(m(v(Po, Q), Qo), m(Po, Q)), m(P, Q))
    if j == 3:
        return v(Po, m(P, Q))
    if j == 4:
        return v(m(Po, Qo), Q)
    if j == 5:
        return v(v(m(Po, Qo), m(Po, Q)), m(P, Q))
    raise ValueError(f"polynomial implication index must be 0..5, got {j}")


def circ_theta_closed(P, Q, theta):
    e = np.exp(1j * theta)
    return Q + (e - 1) * P @ Q + (np.conj(e) - 1) * Q @ P + 2 * (1 - math.cos(theta)) * P @ Q @ P


def circ_theta(P, Q, theta, tol=TAU):
    """``exp(i theta P) Q exp(-i theta P)``, cross-checked against the expanded form."""
    _check_pair(P, Q)
    if theta == 0:
        return np.array(Q, dtype=complex, copy=True)
    U = expm(1j * theta * P)
    out = U @ Q @ U.conj().T
    alt = circ_theta_closed(P, Q, theta)
    if not close(out, alt, tol):
        raise NumericalError(f"conjugation and expanded form differ by {_norm(out - alt):.3g}")
    return (out + out.conj().T) / 2


def twisted_impl(j: int, theta: float, i: int, P, Q, tol=TAU):
    if i == 0:
        return poly(j, P, circ_theta(P, Q, theta, tol))
    if i == 1:
        return poly(j, circ_theta(Q, P, theta, tol), Q)
    raise ValueError("twist side must be 0 or 1")


# ---------------------------------------------------------------------------
# sampling


def _random_unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Qm, R = np.linalg.qr(Z)
    return Qm * (np.diag(R) / np.abs(np.diag(R)))


def random_projection(rng, n, rank=None):
    if rank is None:
        rank = int(rng.integers(1, n)) if n > 1 else 1
    U = _random_unitary(rng, n)[:, :rank]
    return U @ U.conj().T


def _generic_block_pair(rng):
    return random_projection(rng, 2, 1), random_projection(rng, 2, 1)


def sample_pair(rng, dim, kind=None):
    """A projection pair of the given kind: generic, partial (block-commuting) or commuting."""
    kinds = ["generic", "commuting"] + (["partial"] if dim >= 3 else [])
    kind = kind or kinds[int(rng.integers(len(kinds)))]
    if kind == "generic":
        return random_projection(rng, dim), random_projection(rng, dim), kind
    U = _random_unitary(rng, dim)
    if kind == "commuting":
        dp = rng.integers(0, 2, dim)
        dq = rng.integers(0, 2, dim)
        P, Q = np.diag(dp).astype(complex), np.diag(dq).astype(complex)
    elif kind == "partial":
        P, Q = zero(dim), zero(dim)
        P[:2, :2], Q[:2, :2] = _generic_block_pair(rng)
        rest = dim - 2
        P[2:, 2:] = np.diag(rng.integers(0, 2, rest))
        Q[2:, 2:] = np.diag(rng.integers(0, 2, rest))
    else:
        raise ValueError(f"unknown sample kind {kind!r}")
    return U @ P @ U.conj().T, U @ Q @ U.conj().T, kind


# ---------------------------------------------------------------------------
# the ten relations


def _relations(P, Q, theta):
    """Yield ``(label, lhs, rhs)`` for the ten identities."""
    c_perp = proj_ortho(marsden_com(P, Q))
    t5 = poly(5, P, Q)
    pq = circ_theta(P, Q, theta)
    qp = circ_theta(Q, P, theta)
    T = lambda j, i: twisted_impl(j, theta, i, P, Q)  # noqa: E731
    yield "i/0", T(0, 0), poly(0, P, Q)
    yield "i/1", T(0, 1), poly(0, P, Q)
    yield "ii", T(1, 0), poly(1, P, Q)
    yield "iii", T(2, 1), poly(2, P, Q)
    yield "iv", T(3, 0), poly(3, P, Q)
    yield "v", T(4, 1), poly(4, P, Q)
    yield "vi/0", T(5, 0), t5
    yield "vi/1", T(5, 1), t5
    yield "vii", T(1, 1), proj_join(t5, proj_meet(qp, c_perp))
    yield "viii", T(2, 0), proj_join(t5, proj_meet(proj_ortho(pq), c_perp))
    yield "ix", T(3, 1), proj_join(t5, proj_meet(proj_ortho(qp), c_perp))
    yield "x", T(4, 0), proj_join(t5, proj_meet(pq, c_perp))


MP_PAIRS = [(j, i) for j in range(2, 6) for i in (0, 1) if (j, i) != (3, 1)]


@dataclass
class TwistedReport:
    seed: int
    samples_per_dim: int
    checked: int = 0
    failures: dict = field(default_factory=dict)
    max_error: float = 0.0
    mp_failures: int = 0
    mp31_counterexamples: int = 0
    kinds: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and self.mp_failures == 0

    def to_dict(self):
        return {
            "suite": "twisted-relations",
            "params": {"seed": self.seed, "samples_per_dim": self.samples_per_dim},
            "checked": self.checked,
            "failed": sum(self.failures.values()) + self.mp_failures,
            "failures": self.failures,
            "max_error": self.max_error,
            "mp_failures": self.mp_failures,
            "mp_counterexamples_for_3_1": self.mp31_counterexamples,
            "kinds": self.kinds,
        }


def verify_twisted_relations(samples=200, dims=(2, 3, 4), seed=DEFAULT_SEED, tol=TAU) -> TwistedReport:
    rng = np.random.default_rng(seed)
    rep = TwistedReport(seed=seed, samples_per_dim=samples)
    for dim in dims:
        for _ in range(samples):
            P, Q, kind = sample_pair(rng, dim)
            theta = float(rng.uniform(0, 2 * math.pi))
            rep.kinds[kind] = rep.kinds.get(kind, 0) + 1
            for label, lhs, rhs in _relations(P, Q, theta):
                err = _norm(lhs - rhs)
                rep.max_error = max(rep.max_error, err)
                rep.checked += 1
                if err > tol or not is_projection(lhs, tol):
                    rep.failures[label] = rep.failures.get(label, 0) + 1
            for j, i in MP_PAIRS:
                rep.checked += 1
                if not proj_le(proj_meet(P, twisted_impl(j, theta, i, P, Q)), Q, tol):
                    rep.mp_failures += 1
            if not proj_le(proj_meet(P, twisted_impl(3, theta, 1, P, Q)), Q, tol):
                rep.mp31_counterexamples += 1
    return rep


# ---------------------------------------------------------------------------
# non-polynomiality witness

WITNESS_OPS = [(1, 1), (2, 0), (3, 1), (4, 0)]


def witness_pair():
    phi = ket(1, math.sqrt(3)) / 2
    e1 = ket(0, 1)
    return phi, e1, ketbra(phi), ketbra(e1)


def phi_theta(theta):
    return ket(1, np.exp(1j * theta) * math.sqrt(3)) / 2


@dataclass
class NonPolyReport:
    theta: float
    e1_phi: complex
    phi_phitheta: complex
    e1_phitheta: complex
    com_is_zero: bool
    matches_ketbra: bool
    outside_by_inner_products: bool
    outside: dict
    matrices: dict = field(repr=False, default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.com_is_zero and self.matches_ketbra and self.outside_by_inner_products and all(self.outside.values())

    def to_dict(self):
        cplx = lambda z: [z.real, z.imag]  # noqa: E731
        return {
            "suite": "non-polynomial-witness",
            "theta": self.theta,
            "<1|phi>": cplx(self.e1_phi),
            "<phi|phi(theta)>": cplx(self.phi_phitheta),
            "<1|phi(theta)>": cplx(self.e1_phitheta),
            "com_is_zero": self.com_is_zero,
            "matches_ketbra": self.matches_ketbra,
            "outside_by_inner_products": self.outside_by_inner_products,
            "outside": {f"{j},{i}": v for (j, i), v in self.outside.items()},
            "ok": self.ok,
        }


def non_polynomial_witness(theta: float, tol=TAU) -> NonPolyReport:
    theta = float(theta)
    if not 0 < theta < 2 * math.pi:
        raise ValueError("theta must lie in (0, 2 pi); at 0 the twist is the identity")
    phi, e1, P, Q = witness_pair()
    pt = phi_theta(theta)
    e1_phi = complex(np.vdot(e1, phi))
    phi_pt = complex(np.vdot(phi, pt))
    e1_pt = complex(np.vdot(e1, pt))
    com_zero = close(marsden_com(P, Q), zero(2), tol)
    R = twisted_impl(1, theta, 1, P, Q)
    matches = close(R, ketbra(pt), tol) and close(circ_theta(Q, P, theta), ketbra(pt), tol)
    # |phi(theta)><phi(theta)| is rank one, so it is one of the six only if it
    # equals P, P', Q or Q', i.e. only if an overlap has modulus 0 or 1
    eps = 1e-12
    by_ip = all(eps < abs(z) < 1 - eps for z in (phi_pt, e1_pt))
    six = [zero(2), P, proj_ortho(P), Q, proj_ortho(Q), identity(2)]
    outside = {}
    mats = {"P": P, "Q": Q}
    for j, i in WITNESS_OPS:
        T = twisted_impl(j, theta, i, P, Q)
        mats[f"impl_{j}_{i}"] = T
        outside[(j, i)] = not any(close(T, S, 1e-6) for S in six)
    return NonPolyReport(theta, e1_phi, phi_pt, e1_pt, com_zero, matches, by_ip, outside, mats)


def dump_matrices_csv(matrices: dict, path) -> None:
    """Write ``name,row,col,re,im`` rows for each matrix."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "row", "col", "re", "im"])
        for name, M in matrices.items():
            for (r, c), z in np.ndenumerate(M):
                w.writerow([name, r, c, repr(float(z.real)), repr(float(z.imag))])
