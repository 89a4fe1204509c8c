"""Small relation matrices for rings built from per-polygon transfer matrices.

With all a_i, b_i >= 1 the edges f_1, e_1, g_1 generate the sandpile group,
and (f_i, e_i, g_i) = A_i (f_{i-1}, e_{i-1}, g_{i-1}) with
A_i = [[1, 1, 0], [a_i, a_i + b_i + 1, b_i], [0, 1, 1]]. The three relations
left unused by that propagation give a 3x3 relation matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import PolygonSpec, Topology
from .linalg import IntegerMatrix
from .sequences import SequenceParams, exact_div, rho, tau, tau_prime


class UnsupportedError(ValueError):
    """The requested fast path does not cover this input; ``fallback`` names what to use."""

    def __init__(self, message: str, fallback: str = "edge"):
        super().__init__(message)
        self.fallback = fallback


def transfer_matrix(a_i: int, b_i: int) -> IntegerMatrix:
    if a_i < 1 or b_i < 1:
        raise UnsupportedError(f"transfer fast path needs a_i, b_i >= 1 (got {a_i}, {b_i})")
    return IntegerMatrix.from_rows([[1, 1, 0], [a_i, a_i + b_i + 1, b_i], [0, 1, 1]])


@dataclass(frozen=True)
class TransferChain:
    """Transfer matrices A_2..A_n, cumulative products and the f-sum coefficients.

    ``products[i-1]`` is P_i = A_i ... A_2 (P_1 = I); ``coeffs`` is P_n (the
    a_ij); ``c`` expresses a_1 f_1 + ... + a_n f_n in terms of (f_1, e_1, g_1).
    """

    matrices: tuple[IntegerMatrix, ...]
    products: tuple[IntegerMatrix, ...]
    c: tuple[int, int, int]

    @property
    def coeffs(self) -> IntegerMatrix:
        return self.products[-1]


def transfer_chain(spec: PolygonSpec) -> TransferChain:
    if min(spec.a) < 1 or min(spec.b) < 1:
        raise UnsupportedError(f"{spec}: some a_i or b_i is zero; use the edge presentation")
    mats = tuple(transfer_matrix(a, b) for a, b in zip(spec.a[1:], spec.b[1:]))
    P = IntegerMatrix.identity(3)
    products = [P]
    c = [spec.a[0] * x for x in P.to_rows()[0]]
    for i, A in enumerate(mats, start=2):
        P = A @ P
        products.append(P)
        frow = P.to_rows()[0]
        c = [ci + spec.a[i - 1] * x for ci, x in zip(c, frow)]
    return TransferChain(mats, tuple(products), tuple(c))


def relation_matrix_ring(spec: PolygonSpec) -> IntegerMatrix:
    """3x3 relation matrix on (f_1, e_1, g_1) for a ring with all a_i, b_i >= 1."""
    if spec.topology is not Topology.RING:
        raise ValueError("relation_matrix_ring needs a ring spec")
    ch = transfer_chain(spec)
    a = ch.coeffs.to_rows()
    a1, b1 = spec.a[0], spec.b[0]
    c1, c2, c3 = ch.c
    return IntegerMatrix.from_rows([
        [a[0][0] - a1 - 1, a[0][1] + 1, a[0][2] - b1],
        [a[1][0] + a1, a[1][1] - 1, a[1][2] + b1],
        [c1, c2, c3],
    ])


def relation_matrix_twisted(spec: PolygonSpec) -> IntegerMatrix:
    """Twisted counterpart; e_n flips sign relative to the ring, hence the changes."""
    if spec.topology is not Topology.TWISTED:
        raise ValueError("relation_matrix_twisted needs a twisted spec")
    ch = transfer_chain(spec)
    a = ch.coeffs.to_rows()
    a1, b1 = spec.a[0], spec.b[0]
    c1, c2, c3 = ch.c
    return IntegerMatrix.from_rows([
        [a[2][0] + a1 + 1, a[2][1] - 1, a[2][2] + b1],
        [a[1][0] - a1, a[1][1] + 1, a[1][2] - b1],
        [c1 - a1, c2 + 1, c3 - b1],
    ])


def relation_matrix(spec: PolygonSpec) -> IntegerMatrix:
    if spec.topology is Topology.RING:
        return relation_matrix_ring(spec)
    if spec.topology is Topology.TWISTED:
        return relation_matrix_twisted(spec)
    raise UnsupportedError("chains have no transfer relation matrix", fallback="edge")


def transfer_power_closed_form(n: int, a: int, b: int) -> IntegerMatrix:
    """A^n for the uniform transfer matrix, assembled from tau_n and tau_{n-1}."""
    if a + b < 1:
        raise ValueError("closed form needs a + b >= 1")
    p = SequenceParams(a, b)
    tn, tp, tnext = tau(n, p), tau(n - 1, p), tau(n + 1, p)
    nu = tn - tp
    ab = a + b
    return IntegerMatrix.from_rows([
        [exact_div(b + a * nu, ab), tn, exact_div(-b + b * nu, ab)],
        [a * tn, tnext - tn, b * tn],
        [exact_div(-a + a * nu, ab), tn, exact_div(a + b * nu, ab)],
    ])


def uniform_relation_matrix(n: int, a: int, b: int, topology: Topology | str) -> IntegerMatrix:
    """Explicit matrix for uniform rings: M (ring, b > 0), N (ring, b = 0, 2x2), T (twisted).

    Expects a >= b (swap beforehand; the graphs are mirror images).
    """
    topology = Topology(topology)
    if n < 2:
        raise UnsupportedError("uniform relation matrices need n >= 2", fallback="laplacian")
    if a < b:
        raise UnsupportedError("expects a >= b; swap a and b first", fallback="relation")
    p = SequenceParams(a, b)
    tn, tp = tau(n, p), tau(n - 1, p)
    if topology is Topology.RING:
        if a < 1:
            raise UnsupportedError("R_n(0,0) has no uniform relation matrix", fallback="closed")
        if b == 0:
            return IntegerMatrix.from_rows([
                [tn - tp - 1, tn],
                [a * (tp + 1), tn - tp - 1],
            ])
        ab = a + b
        r = tn - tp - 1
        return IntegerMatrix.from_rows([
            [exact_div(a * r, ab), tn, exact_div(b * r, ab)],
            [a * (tp + 1), r, b * (tp + 1)],
            [exact_div(a * (n * b + a * (tp + 1)), ab), exact_div(a * r, ab),
             exact_div(b * (-n * a + a * (tp + 1)), ab)],
        ])
    if topology is Topology.TWISTED:
        if b < 1:
            raise UnsupportedError("uniform twisted matrix needs a >= b > 0", fallback="laplacian")
        ab = a + b
        r = tn - tp - 1
        return IntegerMatrix.from_rows([
            [exact_div(a * r, ab) + 1, tn, exact_div(b * r, ab) + 1],
            [a * (tp - 1), tn - tp + 1, b * (tp - 1)],
            [exact_div(a * (n * b + a - b * tp), ab), -exact_div(b * r, ab) - 1,
             exact_div(b * (-n * a + a - b * tp), ab)],
        ])
    raise UnsupportedError("chains have no uniform relation matrix", fallback="closed")


def m_prime(n: int, a: int, b: int) -> IntegerMatrix:
    """Row-reduced form of the uniform ring matrix M, in rho/tau' notation."""
    p = SequenceParams(a, b)
    tn, rn, rn1, tpn = tau(n, p), rho(n, p), rho(n + 1, p), tau_prime(n, p)
    return IntegerMatrix.from_rows([
        [a * rn, tn, b * rn],
        [a * tn, (a + b) * rn1, b * tn],
        [a * tn - a * b * tpn, a * rn1, a * b * tpn],
    ])


def t_prime(n: int, a: int, b: int) -> IntegerMatrix:
    """Row-reduced form of the uniform twisted matrix T."""
    p = SequenceParams(a, b)
    tn, rn, rn1, tpn = tau(n, p), rho(n, p), rho(n + 1, p), tau_prime(n, p)
    return IntegerMatrix.from_rows([
        [a * rn + 1, tn, b * rn + 1],
        [a * tn - (a - b), (a + b) * rn1 + 2, b * tn + a - b],
        [a * tn - a * b * tpn, a * rn1 + 1, a * b * tpn + a - b],
    ])

