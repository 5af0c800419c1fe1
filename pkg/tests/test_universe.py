import itertools
import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omlogic import commutator as C
from omlogic import lattice as LT
from omlogic import universe as U
from omlogic.universe import EMPTY, QSet, node


def _brute_count(rank, cap, q):
    """Count names by building partial functions as frozensets of pairs."""
    layer = {frozenset()}
    for _ in range(rank - 1):
        prev = sorted(layer, key=repr)
        layer = set()
        for size in range(min(cap, len(prev)) + 1):
            for dom in itertools.combinations(prev, size):
                for vals in itertools.product(range(q), repeat=size):
                    layer.add(frozenset(zip(dom, vals)))
    return len(layer)


@pytest.mark.parametrize("rank,cap,q,frozen", [
    (1, 2, 6, 1), (2, 2, 6, 7), (3, 2, 6, 799), (3, 2, 4, 181), (2, 2, 2, 3), (3, 1, 6, 43), (3, 2, 2, 19),
])
def test_fragment_counts(rank, cap, q, frozen):
    assert U.fragment_count(rank, cap, q) == frozen == _brute_count(rank, cap, q)


def test_build_fragment_mo2_rank3(mo2):
    frag = U.build_fragment(mo2, 3, 2)
    assert len(frag) == 799
    assert len(frag.of_rank(1)) == 1 and len(frag.of_rank(2)) == 6
    assert all(u.rank <= 3 and len(u) <= 2 for u in frag)
    # children before parents
    pos = frag.index
    assert all(pos[c] < pos[u] for u in frag for c in u.dom)


def test_budget_guard(mo2):
    with pytest.raises(OverflowError):
        U.build_fragment(mo2, 4, 2, budget=1000)
    with pytest.raises(ValueError):
        U.build_fragment(mo2, 0)


def test_interning_and_merge():
    a = node((EMPTY, 1))
    assert node((EMPTY, 1)) is a
    assert QSet([(EMPTY, 2), (EMPTY, 2)]) is node((EMPTY, 2))
    with pytest.raises(ValueError):
        QSet([(EMPTY, 1), (EMPTY, 2)])
    with pytest.raises(TypeError):
        QSet([("x", 1)])
    assert pickle.loads(pickle.dumps(a)) is a


def test_rank_and_support():
    a = node((EMPTY, 1))
    b = node((a, 3), (EMPTY, 2))
    assert EMPTY.rank == 1 and a.rank == 2 and b.rank == 3
    assert b.support == {1, 2, 3}
    assert b.value(a) == 3
    with pytest.raises(KeyError):
        a.value(b)


def test_show_roundtrip_through_parser(mo2):
    from omlogic.formula import EvalContext, parse_term
    from omlogic.implication import Poly

    ctx = EvalContext(mo2, Poly(3))
    for u in U.build_fragment(mo2, 3, 2).nodes[::37]:
        assert ctx.term(parse_term(u.show(mo2)), {}) is u


def test_closure_and_csr():
    a = node((EMPTY, 1))
    b = node((a, 2))
    nodes = U.closure([b])
    assert nodes == [EMPTY, a, b]
    ptr, child, val = U.csr(nodes)
    assert list(ptr) == [0, 0, 1, 2]
    assert list(child) == [0, 1] and list(val) == [1, 2]


def test_restriction_meets_every_value(mo2):
    a, b, ap = (mo2.index(x) for x in ("a", "b", "a'"))
    u = node((node((EMPTY, b)), a), (EMPTY, b))
    r = U.restrict(mo2, u, a)
    assert r.support <= {mo2.bottom, a}
    assert U.restrict(mo2, u, mo2.top) is u
    # everything collapses to {{}: 0}-style names under 0
    z = U.restrict(mo2, u, mo2.bottom)
    assert z.support <= {mo2.bottom}
    # restriction to p and then to p again changes nothing
    assert U.restrict(mo2, r, a) is r
    assert U.restrict(mo2, node((EMPTY, ap)), a) is node((EMPTY, mo2.bottom))


def test_restriction_collision_joins_values(mo2):
    a, b, bp = (mo2.index(x) for x in ("a", "b", "b'"))
    c1, c2 = node((EMPTY, b)), node((EMPTY, bp))
    u = node((c1, a), (c2, a))
    # both children restrict to {{}: 0} under a, so their values are joined
    assert U.has_collision(mo2, u, a)
    r = U.restrict(mo2, u, a)
    assert len(r) == 1 and r.entries[0][1] == a


def test_commutator_of_names(mo2):
    a, b = mo2.index("a"), mo2.index("b")
    u, v = node((EMPTY, a)), node((EMPTY, b))
    assert U.qset_commutator(mo2, [u]) == mo2.top
    assert U.qset_commutator(mo2, [u, v]) == C.commutator(mo2, {a, b}) == mo2.bottom
    assert U.generated_logic(mo2, [u]) == {0, a, mo2.index("a'"), 5}


def test_check_embedding_and_ub(mo2):
    one = U.hf(U.hf())
    u = U.check_embed(mo2, one)
    assert u is node((EMPTY, mo2.top))
    assert U.make_ub(mo2, 3) is node((EMPTY, 3))
    B = {0, 1, 2, 5}
    assert U.in_sublogic(u, B)
    sub, emb = mo2.restrict_to(B)
    back = {e: i for i, e in enumerate(emb)}
    t = U.translate(u, back)
    assert U.translate(t, dict(enumerate(emb))) is u


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_restriction_properties(data):
    L = LT.from_spec(data.draw(st.sampled_from(["mo:2", "prod:boolean:1,mo:2", "boolean:2"])))
    nodes = U.build_fragment(L, 3, 2).nodes
    u = data.draw(st.sampled_from(nodes))
    p = data.draw(st.integers(0, L.n - 1))
    q = data.draw(st.integers(0, L.n - 1))
    r = U.restrict(L, u, p)
    assert r.rank <= u.rank
    assert all(L.le(v, p) for v in r.support)
    # without merges, restricting twice is restricting to the meet (merges
    # join values, and joins need not distribute over the second meet)
    if not (U.has_collision(L, u, p) or U.has_collision(L, r, q)):
        assert U.restrict(L, r, q) is U.restrict(L, u, L.meet(p, q))
    if L.is_boolean():
        assert U.restrict(L, r, q) is U.restrict(L, u, L.meet(p, q))
