import pytest

from omlogic import lattice as LT


@pytest.fixture(scope="session")
def mo2():
    return LT.mo(2)


@pytest.fixture(scope="session")
def sweep_logics():
    return LT.sweep()


def brute_meet(L, p, q):
    """Greatest common lower bound straight from the order relation."""
    lower = [k for k in range(L.n) if L.leq[k, p] and L.leq[k, q]]
    best = [k for k in lower if all(L.leq[m, k] for m in lower)]
    assert len(best) == 1
    return best[0]


def brute_join(L, p, q):
    upper = [k for k in range(L.n) if L.leq[p, k] and L.leq[q, k]]
    best = [k for k in upper if all(L.leq[k, m] for m in upper)]
    assert len(best) == 1
    return best[0]
