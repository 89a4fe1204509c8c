import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from polyring import PolygonSpec, build
from polyring.chipfire import (
    BudgetExceeded,
    Configuration,
    ContractError,
    Sandpile,
    enumerate_recurrent,
    find_identity,
    group_op,
    is_recurrent,
    stabilize,
)
from polyring.graph import cycle_graph, reduced_laplacian
from polyring.groups import sandpile_group
from polyring.linalg import determinant, snf


@pytest.fixture
def c3():
    g = cycle_graph(3)
    return Sandpile(g, sink="c0")


def cfg(sp, *hs):
    return sp.config(dict(zip(sp.nonsink, hs)))


def test_c3_toppling_by_hand(c3):
    assert stabilize(c3.graph, cfg(c3, 2, 0)) == cfg(c3, 0, 1)
    assert stabilize(c3.graph, cfg(c3, 0, 0)) == cfg(c3, 0, 0)
    assert stabilize(c3.graph, cfg(c3, 1, 1)) == cfg(c3, 1, 1)
    _, fired = c3.stabilize(cfg(c3, 2, 0))
    assert fired == {"c1": 1, "c2": 0}


def test_c3_recurrence(c3):
    assert is_recurrent(c3.graph, cfg(c3, 1, 1))
    assert not is_recurrent(c3.graph, cfg(c3, 0, 0))
    with pytest.raises(ContractError):
        c3.is_recurrent(cfg(c3, 2, 0))


def test_bad_inputs(c3):
    with pytest.raises(ContractError):
        c3.config({"c0": 1})
    with pytest.raises(ContractError):
        c3.stabilize(cfg(c3, -1, 0))
    with pytest.raises(ContractError):
        Sandpile(c3.graph, sink="nowhere")
    with pytest.raises(ContractError):
        cfg(c3, 1, 1) + Sandpile(c3.graph, sink="c1").config({})


def test_configuration_json(c3):
    c = cfg(c3, 1, 0)
    assert json.loads(c.to_json()) == {"c1": 1, "c2": 0}
    assert Configuration.from_map("c0", json.loads(c.to_json())) == c


SMALL = {
    "C3": cycle_graph(3),
    "R2(0,0)": build(PolygonSpec.uniform(2, 0, 0)),
    "R2(1,1)": build(PolygonSpec.uniform(2, 1, 1)),
    "K4 = R3(1,0)": build(PolygonSpec.uniform(3, 1, 0)),
    "K4 = T2(1,1)": build(PolygonSpec.uniform(2, 1, 1, "twisted")),
}


@pytest.mark.parametrize("name", SMALL)
def test_recurrent_count_is_tree_count(name):
    g = SMALL[name]
    recs = enumerate_recurrent(g)
    assert len(recs) == determinant(reduced_laplacian(g))


def test_frozen_counts():
    assert len(enumerate_recurrent(SMALL["C3"])) == 3
    assert len(enumerate_recurrent(SMALL["R2(0,0)"])) == 2
    assert len(enumerate_recurrent(SMALL["K4 = R3(1,0)"])) == 16


@pytest.mark.parametrize("name", SMALL)
def test_count_independent_of_sink(name):
    g = SMALL[name]
    counts = {len(Sandpile(g, v).enumerate_recurrent()) for v in g.vertices}
    assert len(counts) == 1


@pytest.mark.parametrize("name", SMALL)
def test_max_stable_is_recurrent(name):
    sp = Sandpile(SMALL[name])
    assert sp.is_recurrent(sp.max_stable())


def test_budget_refusal():
    g = build(PolygonSpec.uniform(4, 2, 2))
    with pytest.raises(BudgetExceeded):
        enumerate_recurrent(g, budget=100)
    with pytest.raises(BudgetExceeded):
        find_identity(g, budget=100)


def test_c3_identity_and_cyclic_structure(c3):
    e = c3.identity()
    assert e == cfg(c3, 1, 1)
    orders = sorted(c3.element_order(c, e) for c in c3.enumerate_recurrent())
    assert orders == [1, 3, 3]


@pytest.mark.parametrize("name", SMALL)
def test_randomized_toppling_order_is_irrelevant(name):
    sp = Sandpile(SMALL[name])
    big = sp.config({v: 3 * sp.degree[v] + i for i, v in enumerate(sp.nonsink)})
    expected, fired = sp.stabilize(big)
    for seed in range(100):
        got, got_fired = sp.stabilize(big, seed=seed)
        assert got == expected and got_fired == fired


def test_k4_is_an_abelian_group():
    g = SMALL["K4 = R3(1,0)"]
    sp = Sandpile(g)
    recs = sp.enumerate_recurrent()
    rset = set(recs)
    e = sp.identity()
    table = {(x, y): sp.add(x, y) for x in recs for y in recs}
    for x in recs:
        assert table[(x, e)] == x
        assert any(table[(x, y)] == e for y in recs)
        for y in recs:
            assert table[(x, y)] in rset
            assert table[(x, y)] == table[(y, x)]
    for x, y, z in itertools.product(recs, repeat=3):
        assert table[(table[(x, y)], z)] == table[(x, table[(y, z)])]


@pytest.mark.parametrize("name", SMALL)
def test_element_orders_divide_exponent(name):
    g = SMALL[name]
    sp = Sandpile(g)
    e = sp.identity()
    factors = sandpile_group_from_graph(g)
    exponent = factors[-1] if factors else 1
    orders = [sp.element_order(c, e) for c in sp.enumerate_recurrent()]
    assert all(exponent % k == 0 for k in orders)
    assert max(orders) == exponent


def sandpile_group_from_graph(g):
    return [d for d in snf(reduced_laplacian(g)).invariant_factors if d > 1]


def test_group_op_wrapper(c3):
    x = cfg(c3, 1, 0)
    assert group_op(c3.graph, x, x) == c3.add(x, x)


def test_loops_do_not_change_dynamics():
    g = build(PolygonSpec(2, (2, 1), (1, 0), "ring"))
    assert any(e.tail == e.head for e in g.edges)
    assert len(enumerate_recurrent(g)) == sandpile_group(PolygonSpec(2, (2, 1), (1, 0)), "laplacian").order


@settings(max_examples=25)
@given(st.integers(2, 3), st.integers(0, 1), st.integers(0, 1), st.sampled_from(["ring", "twisted"]),
       st.lists(st.integers(0, 12), min_size=8, max_size=8), st.integers(0, 10**6))
def test_abelian_property_random(n, a, b, topo, heights, seed):
    sp = Sandpile(build(PolygonSpec.uniform(n, a, b, topo)))
    c = sp.config(dict(zip(sp.nonsink, heights)))
    assert sp.stabilize(c, seed=seed) == sp.stabilize(c)
    assert sp.is_stable(sp.stabilize(c)[0])
