import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omlogic import lattice as LT
from omlogic.lattice import LatticeError

from conftest import brute_join, brute_meet

O6 = {
    "n": 6,
    "names": ["0", "a", "b", "b'", "a'", "1"],
    "leq": [[0, k] for k in range(1, 6)] + [[k, 5] for k in range(1, 5)] + [[1, 2], [3, 4]],
    "ortho": [5, 4, 3, 2, 1, 0],
}


def test_mo2_basic_operations(mo2):
    a, b = mo2.index("a"), mo2.index("b")
    assert mo2.names == ("0", "a", "a'", "b", "b'", "1")
    assert mo2.meet(a, b) == mo2.bottom
    assert mo2.join(a, b) == mo2.top
    assert not mo2.commutes(a, b)
    assert mo2.commutes(a, mo2.index("a'"))
    assert {mo2.name(p) for p in mo2.commutant({a})} == {"0", "a", "a'", "1"}


@pytest.mark.parametrize("spec,size", [
    ("boolean:0", 1), ("boolean:1", 2), ("boolean:3", 8), ("mo:2", 6), ("mo:3", 8),
    ("prod:boolean:1,mo:2", 12), ("hsum:boolean:2,boolean:2", 6), ("hsum:(prod:boolean:1,mo:2),boolean:2", 14),
])
def test_generator_sizes(spec, size):
    assert LT.from_spec(spec).n == size


def test_tables_match_order_oracle(sweep_logics):
    for _, L in sweep_logics:
        for p, q in itertools.product(range(L.n), repeat=2):
            assert L.meet(p, q) == brute_meet(L, p, q)
            assert L.join(p, q) == brute_join(L, p, q)


def test_orthomodular_law_holds_on_sweep(sweep_logics):
    for _, L in sweep_logics:
        for p, q in itertools.product(range(L.n), repeat=2):
            if L.le(p, q):
                assert L.join(p, L.meet(L.ocompl(p), q)) == q


def test_commutation_symmetric_and_matches_definition(sweep_logics):
    for _, L in sweep_logics:
        assert np.array_equal(L.comm, L.comm.T)
        for p, q in itertools.product(range(L.n), repeat=2):
            direct = L.join(L.meet(p, q), L.meet(p, L.ocompl(q))) == p
            assert L.commutes(p, q) == direct


def test_o6_rejected_with_om_witness():
    with pytest.raises(LatticeError) as err:
        LT.validate(O6)
    assert err.value.axiom == "OM"
    assert tuple(O6["names"][k] for k in err.value.witness) == ("a", "b")


@pytest.mark.parametrize("desc,axiom", [
    ({"n": 2}, "format"),
    ({"n": 2, "leq": [[0, 5]], "ortho": [1, 0]}, "format"),
    ({"n": 2, "leq": [[0, 1], [1, 0]], "ortho": [1, 0]}, "order"),
    ({"n": 3, "leq": [[0, 1]], "ortho": [0, 2, 1]}, "bounds"),
    ({"n": 2, "leq": [[0, 1]], "ortho": [0, 1]}, "C1"),
    # two incomparable middles under a top and over a bottom, but with a
    # second pair of them making join ambiguous
    ({"n": 6, "leq": [[0, 1], [0, 2], [1, 3], [2, 3], [1, 4], [2, 4], [3, 5], [4, 5]],
      "ortho": [5, 4, 3, 2, 1, 0]}, "join"),
    ({"n": 4, "leq": [[0, 1], [0, 2], [1, 3], [2, 3]], "ortho": [3, 1, 2, 0]}, "C3"),
    ({"n": 4, "leq": [[0, 1], [1, 2], [2, 3]], "ortho": [3, 2, 1, 0]}, "C3"),
])
def test_validation_errors(desc, axiom):
    with pytest.raises(LatticeError) as err:
        LT.validate(desc)
    assert err.value.axiom == axiom


def test_non_involutive_ortho_rejected():
    desc = LT.boolean(2).to_dict()
    desc["ortho"] = [3, 2, 0, 1]
    with pytest.raises(LatticeError) as err:
        LT.validate(desc)
    assert err.value.axiom in {"C1", "C2"}


def test_file_roundtrip(tmp_path, sweep_logics):
    for spec, L in sweep_logics:
        path = tmp_path / (spec.replace(":", "_").replace(",", "_") + ".json")
        LT.dump(L, path)
        M = LT.load(path)
        assert M.names == L.names
        assert np.array_equal(M.leq, L.leq)
        assert np.array_equal(M.ortho, L.ortho)


def test_malformed_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2')
    with pytest.raises(LatticeError) as err:
        LT.load(p)
    assert err.value.axiom == "format"
    p.write_text("[1, 2]")
    with pytest.raises(LatticeError):
        LT.load(p)


def test_maximal_boolean_sublogics_of_mo2(mo2):
    blocks = {frozenset(mo2.name(p) for p in B) for B in mo2.maximal_boolean_sublogics()}
    assert blocks == {frozenset({"0", "a", "a'", "1"}), frozenset({"0", "b", "b'", "1"})}
    greedy = mo2.maximal_boolean_sublogic({mo2.index("b")})
    assert {mo2.name(p) for p in greedy} == {"0", "b", "b'", "1"}
    with pytest.raises(ValueError):
        mo2.maximal_boolean_sublogic({mo2.index("a"), mo2.index("b")})


def test_centres():
    assert LT.mo(2).center() == {LT.mo(2).bottom, LT.mo(2).top}
    B = LT.boolean(3)
    assert B.center() == frozenset(range(8))
    P = LT.product(LT.boolean(1), LT.mo(2))
    assert {P.name(p) for p in P.center()} == {"0*0", "0*1", "1*0", "1*1"}
    H = LT.horizontal_sum(LT.boolean(2), LT.boolean(2))
    assert len(H.center()) == 2


def test_sublogic_generated_and_subalgebra(mo2):
    a, b = mo2.index("a"), mo2.index("b")
    assert {mo2.name(p) for p in mo2.sublogic_generated({a})} == {"0", "a", "a'", "1"}
    assert mo2.sublogic_generated({a, b}) == frozenset(range(6))
    assert mo2.subalgebra_generated({a, b}) == frozenset(range(6))
    assert mo2.is_subalgebra({0, a, mo2.index("a'"), 5})
    assert not mo2.is_subalgebra({0, a, 5})


def test_restrict_to_is_a_logic(sweep_logics):
    for _, L in sweep_logics:
        for B in L.maximal_boolean_sublogics():
            S, emb = L.restrict_to(B)
            assert S.is_boolean()
            for p, q in itertools.product(range(S.n), repeat=2):
                assert emb[S.meet(p, q)] == L.meet(emb[p], emb[q])
                assert emb[S.join(p, q)] == L.join(emb[p], emb[q])


def test_index_forms(mo2):
    assert mo2.index("#2") == 2 == mo2.index(2)
    with pytest.raises(KeyError):
        mo2.index("zz")


def test_big_operations_empty(mo2):
    assert mo2.big_meet([]) == mo2.top
    assert mo2.big_join([]) == mo2.bottom


def test_carrier_cap():
    with pytest.raises(ValueError):
        LT.boolean(7)


# property tests over generated logics ---------------------------------------

_specs = st.sampled_from(["boolean:1", "boolean:2", "mo:2", "mo:3", "mo:4"])
spec_strategy = st.recursive(
    _specs,
    lambda inner: st.tuples(st.sampled_from(["prod", "hsum"]), inner, inner).map(
        lambda t: f"{t[0]}:({t[1]}),({t[2]})"
    ),
    max_leaves=2,
)


def _build(spec):
    try:
        return LT.from_spec(spec)
    except ValueError:
        return None


@settings(max_examples=40, deadline=None)
@given(spec_strategy, st.data())
def test_generated_logics_are_orthomodular(spec, data):
    L = _build(spec)
    if L is None:
        return
    p = data.draw(st.integers(0, L.n - 1))
    q = data.draw(st.integers(0, L.n - 1))
    o = L.ocompl
    assert o(o(p)) == p
    assert L.meet(p, o(p)) == L.bottom and L.join(p, o(p)) == L.top
    assert o(L.meet(p, q)) == L.join(o(p), o(q))
    if L.le(p, q):
        assert L.join(p, L.meet(o(p), q)) == q
    # commutation is symmetric and stable under complements
    assert L.commutes(p, q) == L.commutes(q, p) == L.commutes(o(p), q)
    # the commutant is a sublogic
    assert L.is_subalgebra(L.commutant({p, q}))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.sets(st.integers(0, 15), max_size=4))
def test_boolean_logics_everything_commutes(k, raw):
    L = LT.boolean(k)
    subset = {x % L.n for x in raw}
    assert L.is_boolean()
    assert L.center(subset) == L.sublogic_generated(subset)


def test_to_dict_is_json_serialisable(mo2):
    json.dumps(mo2.to_dict())
