import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyring.graph import PolygonSpec, Topology, build, reduced_laplacian
from polyring.linalg import IntegerMatrix, determinant, matrix_power, snf
from polyring.relations import (
    UnsupportedError,
    m_prime,
    relation_matrix,
    relation_matrix_ring,
    relation_matrix_twisted,
    t_prime,
    transfer_chain,
    transfer_matrix,
    transfer_power_closed_form,
    uniform_relation_matrix,
)
from polyring.sequences import tau


def oracle(spec):
    return snf(reduced_laplacian(build(spec))).nontrivial_factors


def test_transfer_matrix_examples():
    assert transfer_matrix(1, 1).to_rows() == [[1, 1, 0], [1, 3, 1], [0, 1, 1]]
    assert transfer_matrix(2, 1).to_rows() == [[1, 1, 0], [2, 4, 1], [0, 1, 1]]
    sq = transfer_matrix(1, 1) @ transfer_matrix(1, 1)
    assert sq.to_rows() == [[2, 4, 1], [4, 11, 4], [1, 4, 2]]
    assert sq == transfer_power_closed_form(2, 1, 1)


def test_transfer_needs_positive_sides():
    with pytest.raises(UnsupportedError):
        transfer_matrix(0, 1)
    with pytest.raises(UnsupportedError):
        relation_matrix_ring(PolygonSpec(3, (1, 0, 1), (1, 1, 1), "ring"))


@pytest.mark.parametrize("a,b", [(a, b) for a in range(1, 5) for b in range(1, 5)])
def test_transfer_unimodular_and_power_closed_form(a, b):
    A = transfer_matrix(a, b)
    assert determinant(A) == 1
    for n in range(0, 13):
        assert transfer_power_closed_form(n, a, b) == matrix_power(A, n)


def test_chain_products_follow_index_convention():
    spec = PolygonSpec(4, (1, 2, 3, 1), (2, 1, 1, 3), "ring")
    ch = transfer_chain(spec)
    A = [transfer_matrix(a, b) for a, b in zip(spec.a, spec.b)]
    assert ch.coeffs == A[3] @ A[2] @ A[1]
    assert ch.products[0] == IntegerMatrix.identity(3)
    # c collects a_i times the f-row of P_i
    expect = [0, 0, 0]
    for ai, P in zip(spec.a, ch.products):
        expect = [x + ai * y for x, y in zip(expect, P.to_rows()[0])]
    assert list(ch.c) == expect


def test_uniform_matrices_examples():
    N = uniform_relation_matrix(4, 1, 0, "ring")
    assert N.to_rows() == [[12, 21], [9, 12]] and determinant(N) == -45
    M = uniform_relation_matrix(2, 1, 1, "ring")
    assert M.to_rows() == [[1, 4, 1], [2, 2, 2], [2, 1, 0]]
    T = uniform_relation_matrix(2, 1, 1, "twisted")
    assert T.to_rows() == [[2, 4, 2], [0, 4, 0], [1, -2, -1]]
    assert abs(determinant(T)) == 16


def test_general_matrices_examples():
    r2 = PolygonSpec.uniform(2, 1, 1)
    assert snf(relation_matrix_ring(r2)).invariant_factors == (1, 1, 12)
    assert abs(determinant(relation_matrix_ring(PolygonSpec.uniform(3, 1, 1)))) == 75
    assert abs(determinant(relation_matrix_twisted(PolygonSpec.uniform(2, 1, 1, "twisted")))) == 16
    assert abs(determinant(relation_matrix_twisted(PolygonSpec.uniform(3, 1, 1, "twisted")))) == 81


def test_uniform_hypotheses():
    with pytest.raises(UnsupportedError):
        uniform_relation_matrix(3, 1, 2, "ring")
    with pytest.raises(UnsupportedError):
        uniform_relation_matrix(3, 0, 0, "ring")
    with pytest.raises(UnsupportedError):
        relation_matrix(PolygonSpec.uniform(3, 1, 1, "chain"))


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (3, 1), (2, 2), (4, 3)])
def test_uniform_and_general_agree_with_laplacian(n, a, b):
    for topo in (Topology.RING, Topology.TWISTED):
        spec = PolygonSpec.uniform(n, a, b, topo)
        ref = oracle(spec)
        det = determinant(reduced_laplacian(build(spec)))
        general = relation_matrix(spec)
        uniform = uniform_relation_matrix(n, a, b, topo)
        assert snf(general).nontrivial_factors == ref
        assert snf(uniform).nontrivial_factors == ref
        assert abs(determinant(general)) == abs(determinant(uniform)) == det
        reduced = m_prime(n, a, b) if topo is Topology.RING else t_prime(n, a, b)
        assert snf(reduced).nontrivial_factors == ref


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("a", [1, 2, 3])
def test_wheel_matrix_n(n, a):
    spec = PolygonSpec.uniform(n, a, 0)
    N = uniform_relation_matrix(n, a, 0, "ring")
    assert snf(N).nontrivial_factors == oracle(spec)
    assert abs(determinant(N)) == tau(n + 1, (a, 0)) - tau(n - 1, (a, 0)) - 2


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("a", [1, 2, 3])
def test_twisted_minus_ring_determinant(n, a):
    ring = abs(determinant(uniform_relation_matrix(n, a, a, "ring")))
    twisted = abs(determinant(uniform_relation_matrix(n, a, a, "twisted")))
    assert twisted - ring == 2 * n * a


@st.composite
def positive_specs(draw):
    n = draw(st.integers(2, 6))
    topo = draw(st.sampled_from([Topology.RING, Topology.TWISTED]))
    a = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    b = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    return PolygonSpec(n, tuple(a), tuple(b), topo)


@given(positive_specs())
def test_general_relation_matrix_matches_laplacian(spec):
    M = relation_matrix(spec)
    assert snf(M).nontrivial_factors == oracle(spec)
    assert abs(determinant(M)) == determinant(reduced_laplacian(build(spec)))
    assert len(snf(M).nontrivial_factors) <= 3
