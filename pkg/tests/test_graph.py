import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import count_spanning_trees
from polyring.graph import (
    MultiGraph,
    PolygonSpec,
    SpecError,
    Topology,
    build,
    cut_basis,
    cycle_basis,
    cycle_graph,
    edge_presentation_matrix,
    expected_counts,
    laplacian,
    reduced_laplacian,
)
from polyring.linalg import determinant, snf

FIG1 = PolygonSpec(5, (2, 1, 1, 0, 3), (2, 0, 2, 0, 1), Topology.CHAIN)


def specs(topologies=("chain", "ring", "twisted"), max_n=4, max_side=2):
    @st.composite
    def _spec(draw):
        topo = draw(st.sampled_from(topologies))
        n = draw(st.integers(1 if topo == "chain" else 2, max_n))
        a = draw(st.lists(st.integers(0, max_side), min_size=n, max_size=n))
        b = draw(st.lists(st.integers(0, max_side), min_size=n, max_size=n))
        return PolygonSpec(n, tuple(a), tuple(b), Topology(topo))
    return _spec()


def inner(u, v):
    return sum(x * y for x, y in zip(u, v))


def test_banana_graph():
    g = build(PolygonSpec.uniform(2, 0, 0))
    assert len(g.vertices) == 2 and len(g.edges) == 2
    assert {(e.tail, e.head) for e in g.edges} == {("y0", "x0")}


def test_counts_examples():
    g = build(PolygonSpec.uniform(2, 1, 1))
    assert (len(g.vertices), len(g.edges)) == (4, 6)
    g = build(FIG1)
    assert (len(g.vertices), len(g.edges)) == (14, 18)


def test_orientation_conventions():
    g = build(PolygonSpec.uniform(3, 1, 1))
    by = {e.label: e for e in g.edges}
    c = g.corners
    # rungs u_i -> v_i, top path forwards, bottom path backwards
    assert (by["e1"].tail, by["e1"].head) == (c["u1"], c["v1"])
    assert (by["f1,1"].tail, by["f1,1"].head) == (c["v0"], c["v1"])
    assert (by["g1,1"].tail, by["g1,1"].head) == (c["u1"], c["u0"])
    tw = build(PolygonSpec.uniform(3, 1, 1, "twisted"))
    by = {e.label: e for e in tw.edges}
    assert (by["e3"].tail, by["e3"].head) == (tw.corners["u0"], tw.corners["v0"])
    assert tw.corners["v0"] == tw.corners["u3"] and tw.corners["u0"] == tw.corners["v3"]


def test_edge_order():
    g = build(PolygonSpec(2, (2, 1), (1, 0), "ring"))
    assert g.edge_labels == ["e1", "e2", "f1,1", "f1,2", "f2,1", "g1,1"]


def test_spec_errors():
    with pytest.raises(SpecError):
        PolygonSpec.uniform(1, 1, 1, "ring")
    with pytest.raises(SpecError):
        PolygonSpec(2, (1,), (1, 1), "ring")
    with pytest.raises(SpecError):
        PolygonSpec(2, (1, -1), (1, 1), "ring")
    with pytest.raises(SpecError):
        MultiGraph.from_edges(["p"], [("l", "p", "q")])


def test_loops_from_length_one_paths():
    g = build(PolygonSpec(2, (2, 1), (1, 0), "ring"))
    loops = [e.label for e in g.edges if e.tail == e.head]
    assert loops == ["g1,1"]
    # a loop is its own cycle and never crosses a cut
    k = g.edge_labels.index("g1,1")
    assert any(c[k] == 1 and sum(map(abs, c)) == 1 for c in cycle_basis(g))
    assert all(c[k] == 0 for c in cut_basis(g))
    assert abs(determinant(edge_presentation_matrix(g))) == determinant(reduced_laplacian(g))


def test_degenerate_twisted_ring_has_loop_rung():
    g = build(PolygonSpec.uniform(3, 2, 0, "twisted"))
    e3 = g.edges[2]
    assert e3.label == "e3" and e3.tail == e3.head
    assert len(g.vertices) == 6

def test_triangle_reduced_laplacian():
    g = cycle_graph(3)
    L = reduced_laplacian(g, "c0")
    assert L.to_rows() == [[2, -1], [-1, 2]]
    assert determinant(L) == 3


def test_k4_reduced_laplacian_det():
    assert determinant(reduced_laplacian(build(PolygonSpec.uniform(3, 1, 0)))) == 16


def test_unknown_sink():
    with pytest.raises(SpecError):
        reduced_laplacian(cycle_graph(3), "nope")


def test_digon_bases():
    g = build(PolygonSpec.uniform(2, 0, 0))
    cycles = cycle_basis(g)
    assert cycles in ([(1, -1)], [(-1, 1)])
    # cut of v_0 (omitted from the basis) is -e1 - e2
    assert [x for x in (-(e.head == "x0") for e in g.edges)] == [-1, -1]
    assert cut_basis(g) == [(1, 1)]
    assert snf(edge_presentation_matrix(g)).invariant_factors == (1, 2)


def test_tree_has_empty_cycle_basis():
    g = MultiGraph.from_edges(["p", "q", "r"], [("s", "p", "q"), ("t", "q", "r")])
    assert cycle_basis(g) == []


@pytest.mark.parametrize("spec, trees", [
    (PolygonSpec.uniform(2, 1, 1), 12),
    (PolygonSpec.uniform(3, 1, 1), 75),
])
def test_edge_presentation_determinant(spec, trees):
    g = build(spec)
    assert abs(determinant(edge_presentation_matrix(g))) == trees == count_spanning_trees(g)


def test_graph_json_round_trip():
    g = build(FIG1)
    text = g.to_json(sort_keys=True)
    assert text == build(FIG1).to_json(sort_keys=True)
    back = MultiGraph.from_dict(json.loads(text))
    assert back == g


@given(specs())
def test_count_formulas(spec):
    g = build(spec)
    assert (len(g.vertices), len(g.edges)) == expected_counts(spec)
    A, B = sum(spec.a), sum(spec.b)
    if spec.topology is Topology.CHAIN:
        assert len(g.vertices) == A + B + 2
    elif A and B:
        assert len(g.vertices) == A + B


@given(specs())
def test_laplacian_rows_sum_to_zero(spec):
    L = laplacian(build(spec)).to_rows()
    assert all(sum(r) == 0 for r in L)
    assert all(sum(col) == 0 for col in zip(*L))


@given(specs())
def test_cycles_have_zero_boundary_and_are_orthogonal_to_cuts(spec):
    g = build(spec)
    cycles, cuts = cycle_basis(g), cut_basis(g)
    assert len(cycles) == len(g.edges) - len(g.vertices) + 1
    assert len(cuts) == len(g.vertices) - 1
    for c in cycles:
        for v in g.vertices:
            flow = sum(x * ((e.head == v) - (e.tail == v)) for x, e in zip(c, g.edges))
            assert flow == 0
        for u in cuts:
            assert inner(c, u) == 0
    for u in cuts:
        assert set(u) <= {-1, 0, 1}


@given(specs(max_n=3))
def test_presentations_agree_for_every_sink(spec):
    g = build(spec)
    E = edge_presentation_matrix(g)
    ref = snf(E).nontrivial_factors
    det_e = abs(determinant(E))
    for q in g.vertices:
        L = reduced_laplacian(g, q)
        assert determinant(L) == det_e
        assert snf(L).nontrivial_factors == ref
