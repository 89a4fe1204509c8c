"""Sandpile groups and spanning-tree counts of polygon rings.

Four routes to the same answer: SNF of the reduced Laplacian, SNF of the
cycle/cut edge presentation, SNF of the small transfer relation matrix, and
closed invariant-factor formulas for uniform rings. ``sandpile_group``
dispatches between them and can cross-check two.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd

from .graph import PolygonSpec, Topology, build, edge_presentation_matrix, reduced_laplacian
from .linalg import determinant, determinant_divisors, gcd_all, snf
from .relations import (
    UnsupportedError,
    m_prime,
    relation_matrix,
    t_prime,
    uniform_relation_matrix,
)
from .sequences import (
    ConsistencyError,
    SequenceParams,
    beta,
    delta,
    exact_div,
    gamma,
    gamma_prime,
    rho,
    s_seq,
    tau,
    tau_prime,
)

GROUP_METHODS = ("laplacian", "edge", "relation", "closed")
TREE_METHODS = ("laplacian", "det_relation", "closed")


class CrossCheckError(RuntimeError):
    def __init__(self, message: str, results: dict):
        super().__init__(message)
        self.results = results


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group Z_{d_1} + ... + Z_{d_r} with d_1 >= 2 and d_i | d_{i+1}."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in f):
            raise ValueError(f"invariant factors must be >= 2: {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"invariant factors must form a divisibility chain: {f}")
        object.__setattr__(self, "invariant_factors", f)

    @classmethod
    def from_factors(cls, factors) -> "AbelianGroup":
        """Drop trivial factors; the rest must already be a divisibility chain."""
        return cls(tuple(abs(d) for d in factors if abs(d) != 1))

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def mu(self) -> int:
        return len(self.invariant_factors)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class DeltaTriple:
    d1: int
    d2: int | None
    d3: int

    def __post_init__(self):
        chain = [self.d1] + ([self.d2] if self.d2 is not None else []) + [self.d3]
        if any(x == 0 or y % x for x, y in zip(chain, chain[1:])):
            raise ConsistencyError(f"determinant divisors do not divide: {chain}")

    def group(self) -> AbelianGroup:
        if self.d2 is None:
            raise ValueError("Delta_2 unknown; cannot form the group")
        return AbelianGroup.from_factors(
            (self.d1, exact_div(self.d2, self.d1), exact_div(self.d3, self.d2))
        )


def _normalized(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a >= b else (b, a)


# ---------------------------------------------------------------- closed forms

def closed_form_R_a0(n: int, a: int) -> AbelianGroup:
    """Generalized wheel R_n(a, 0).

    Even n = 2m: Z_{tau_m} + Z_{a(a+4) tau_m} for odd a, and
    Z_{2 tau_m} + Z_{a(a+4)/2 tau_m} for even a. Odd n = 2m+1:
    Z_{gamma_{m+1}} + Z_{a gamma_{m+1}}.
    """
    if a < 1:
        raise ValueError("R_n(a,0) needs a >= 1")
    if n < 2:
        raise ValueError("rings need n >= 2")
    p = SequenceParams(a, 0)
    if n % 2 == 0:
        m = n // 2
        t = tau(m, p)
        if a % 2:
            factors = (t, a * (a + 4) * t)
        else:
            factors = (2 * t, a * (a + 4) // 2 * t)
    else:
        m = (n - 1) // 2
        g = gamma(m + 1, p)
        factors = (g, a * g)
    group = AbelianGroup.from_factors(factors)
    det_n = abs(determinant(uniform_relation_matrix(n, a, 0, Topology.RING)))
    if group.order != det_n:
        raise ConsistencyError(f"R_{n}({a},0): order {group.order} != |det N| = {det_n}")
    return group


def closed_form_R_ab(n: int, a: int, b: int) -> AbelianGroup:
    """Uniform ring R_n(a, b) with a >= b >= 1 via its three determinant divisors."""
    a, b = _normalized(a, b)
    if b == 0:
        return closed_form_R_a0(n, a)
    if n < 2:
        raise ValueError("rings need n >= 2")
    p = SequenceParams(a, b)
    ab = a * b
    g_ab = gcd(a, b)
    if n % 2 == 0:
        m = n // 2
        t, tp = tau(m, p), tau_prime(m, p)
        d1 = gcd(gcd(2, g_ab) * t, 2 * ab * tp)
        d2 = t * gcd(g_ab * (a + b + 4) * t, ab * gcd(2 * m, (a + b + 4) * tp + m))
        d3 = n * ab * (a + b + 4) * t * t
    else:
        m = (n - 1) // 2
        g, gp = gamma(m + 1, p), gamma_prime(m + 1, p)
        d1 = gcd(g, ab * gp)
        d2 = g * gcd(g_ab * g, ab * gcd(2 * m + 1, gp))
        d3 = n * ab * g * g
    group = DeltaTriple(d1, d2, d3).group()
    expected = spanning_trees_closed(PolygonSpec.uniform(n, a, b, Topology.RING))
    if group.order != expected:
        raise ConsistencyError(f"R_{n}({a},{b}): order {group.order} != tree count {expected}")
    return group


def closed_form_T_aa(n: int, a: int) -> AbelianGroup:
    """Uniform twisted ring T_n(a, a)."""
    if a < 1:
        raise ValueError("T_n(a,a) needs a >= 1")
    if n < 2:
        raise ValueError("rings need n >= 2")
    p = SequenceParams(a, a)
    if n % 2 == 0:
        m = n // 2
        bm = beta(m, p)
        half = exact_div(bm, 2, f"beta_{m}/2")
        d1 = gcd(half, a * m)
        d2 = half * gcd_all((n * a, bm, half - n * a * tau(m, p)))
        d3 = m * a * bm * bm
    else:
        m = (n - 1) // 2
        dm = delta(m, p)
        bsum = beta(m, p) + beta(m + 1, p)
        d1 = gcd(dm, a * (2 * m + 1))
        d2 = dm * gcd_all((
            n * a,
            exact_div(bsum, 2, "(beta_m + beta_{m+1})/2"),
            exact_div(bsum - 2 * n * a * gamma(m + 1, p), 4, "quarter term"),
        ))
        d3 = (2 * m + 1) * a * exact_div(dm * bsum, 2, "delta_m (beta_m + beta_{m+1})/2")
    group = DeltaTriple(d1, d2, d3).group()
    expected = spanning_trees_closed(PolygonSpec.uniform(n, a, a, Topology.TWISTED))
    if group.order != expected:
        raise ConsistencyError(f"T_{n}({a},{a}): order {group.order} != tree count {expected}")
    return group


def delta_invariants_Mprime(n: int, a: int, b: int) -> DeltaTriple:
    """Determinant divisors of the reduced ring matrix from the 2x2-minor gcd formulas.

    Checked against brute-force minors of the explicit matrix.
    """
    a, b = _normalized(a, b)
    if b < 1:
        raise ValueError("needs a >= b >= 1")
    p = SequenceParams(a, b)
    tn, tp1, rn = tau(n, p), tau(n - 1, p), rho(n, p)
    tpn, sn = tau_prime(n, p), s_seq(n, p)
    ab = a * b
    d1 = gcd_all((tn, tp1 + 1, a * rn, ab * tpn))
    d2 = gcd_all((
        n * ab * tn, n * ab * rn, a * sn, b * sn,
        exact_div(ab * (sn - n * tn), a + b, "ab (s_n - n tau_n)/(a+b)"),
    ))
    d3 = n * ab * sn
    brute = determinant_divisors(m_prime(n, a, b))
    if brute != (d1, d2, d3):
        raise ConsistencyError(f"M' divisors {(d1, d2, d3)} disagree with minors {brute}")
    return DeltaTriple(d1, d2, d3)


def delta_invariants_Tprime(n: int, a: int, b: int) -> DeltaTriple:
    """Delta_1 and Delta_3 of the reduced twisted matrix; Delta_2 only when a == b."""
    a, b = _normalized(a, b)
    if b < 1:
        raise ValueError("needs a >= b >= 1")
    p = SequenceParams(a, b)
    tn, rn, tpn, sn = tau(n, p), rho(n, p), tau_prime(n, p), s_seq(n, p)
    ab = a * b
    d1 = gcd_all((tn, a * rn + 1, ab * tpn, a - b))
    d3 = n * ab * sn + exact_div(4 * n * ab + (a - b) ** 2 * tn, a + b, "twisted excess")
    d2 = None
    if a == b:
        d2 = gcd_all((
            n * a * a * tn, a * sn + 2, n * a * (a * rn + 1),
            exact_div(a * sn + 2 - n * a * tn, 2, "(a s_n + 2 - n a tau_n)/2"),
        ))
    brute = determinant_divisors(t_prime(n, a, b))
    if (brute[0], abs(brute[2])) != (d1, d3) or (d2 is not None and brute[1] != d2):
        raise ConsistencyError(f"T' divisors {(d1, d2, d3)} disagree with minors {brute}")
    return DeltaTriple(d1, d2, d3)


def spanning_trees_closed(spec: PolygonSpec) -> int:
    """Tree counts of uniform chains and (twisted) rings from tau alone."""
    if not spec.is_uniform:
        raise UnsupportedError("closed tree counts need a uniform spec", fallback="laplacian")
    n = spec.n
    a, b = _normalized(spec.a[0], spec.b[0])
    p = SequenceParams(a, b)
    if spec.topology is Topology.CHAIN:
        return tau(n + 1, p)
    if a == 0:
        if spec.topology is Topology.RING:
            return n  # banana graph
        raise UnsupportedError("twisted ring needs a, b > 0", fallback="laplacian")
    wrap = tau(n + 1, p) - tau(n - 1, p) - 2
    if spec.topology is Topology.RING:
        if b == 0:
            return wrap
        return exact_div(n * a * b * wrap, a + b, "tau(R_n)")
    if b == 0:
        raise UnsupportedError("twisted closed form needs a >= b > 0", fallback="laplacian")
    return exact_div(n * a * b * wrap + 4 * n * a * b + (a - b) ** 2 * tau(n, p), a + b, "tau(T_n)")


def closed_form_group(spec: PolygonSpec) -> AbelianGroup:
    if not spec.is_uniform:
        raise UnsupportedError(f"{spec}: closed forms need a uniform spec", fallback="relation")
    n = spec.n
    a, b = _normalized(spec.a[0], spec.b[0])
    if spec.topology is Topology.CHAIN:
        # chain groups are cyclic
        return AbelianGroup.from_factors((tau(n + 1, SequenceParams(a, b)),))
    if spec.topology is Topology.RING:
        if a == 0:
            return AbelianGroup.from_factors((n,))
        if b == 0:
            return closed_form_R_a0(n, a)
        return closed_form_R_ab(n, a, b)
    if a == b and a >= 1:
        return closed_form_T_aa(n, a)
    raise UnsupportedError(f"{spec}: no closed form for this twisted ring", fallback="relation")


# ---------------------------------------------------------------- dispatcher

def _relation_matrix_for(spec: PolygonSpec):
    try:
        return relation_matrix(spec)
    except UnsupportedError:
        pass
    if spec.is_uniform and spec.topology is Topology.RING:
        a, b = _normalized(spec.a[0], spec.b[0])
        if a >= 1 and b == 0:
            return uniform_relation_matrix(spec.n, a, 0, Topology.RING)
    raise UnsupportedError(f"{spec}: no small relation matrix (zero-length sides)", fallback="edge")


def _group_by(spec: PolygonSpec, method: str) -> AbelianGroup:
    if method == "laplacian":
        return AbelianGroup.from_factors(snf(reduced_laplacian(build(spec))).invariant_factors)
    if method == "edge":
        return AbelianGroup.from_factors(snf(edge_presentation_matrix(build(spec))).invariant_factors)
    if method == "relation":
        return AbelianGroup.from_factors(snf(_relation_matrix_for(spec)).invariant_factors)
    if method == "closed":
        return closed_form_group(spec)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class GroupResult:
    spec: PolygonSpec
    method: str
    group: AbelianGroup
    cross_checked: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "method": self.method,
            "invariant_factors": [str(d) for d in self.group.invariant_factors],
            "order": str(self.group.order),
            "cross_checked": self.cross_checked,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroupResult":
        return cls(
            PolygonSpec.from_dict(d["spec"]),
            d["method"],
            AbelianGroup(tuple(int(x) for x in d["invariant_factors"])),
            bool(d["cross_checked"]),
        )


def compute_group(spec: PolygonSpec, method: str = "auto", verify: bool = False) -> GroupResult:
    """Sandpile group with provenance.

    ``auto`` takes the first applicable of closed, relation, laplacian. With
    ``verify`` a second, independent method (laplacian, or edge when the
    first was laplacian) is run and a mismatch raises CrossCheckError.
    """
    notes = []
    if method == "auto":
        for m in ("closed", "relation", "laplacian"):
            try:
                group = _group_by(spec, m)
                method = m
                break
            except UnsupportedError as e:
                notes.append(f"{m} not applicable: {e}")
    else:
        group = _group_by(spec, method)
    result = GroupResult(spec, method, group, notes=notes)
    if verify:
        other = "edge" if method == "laplacian" else "laplacian"
        check = _group_by(spec, other)
        if check != group:
            raise CrossCheckError(
                f"{spec}: {method} gives {group} but {other} gives {check}",
                {method: group, other: check},
            )
        result.cross_checked = True
    return result


def sandpile_group(spec: PolygonSpec, method: str = "auto", verify: bool = False) -> AbelianGroup:
    return compute_group(spec, method, verify).group


def spanning_trees(spec: PolygonSpec, method: str = "auto") -> int:
    if method == "auto":
        for m in ("closed", "det_relation", "laplacian"):
            try:
                return spanning_trees(spec, m)
            except UnsupportedError:
                continue
    if method == "laplacian":
        return determinant(reduced_laplacian(build(spec)))
    if method == "det_relation":
        return abs(determinant(_relation_matrix_for(spec)))
    if method == "closed":
        return spanning_trees_closed(spec)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class Comparison:
    spec: PolygonSpec
    groups: dict[str, AbelianGroup]
    trees: dict[str, int]
    skipped: dict[str, str]
    runtime_ms: dict[str, float]

    @property
    def agree(self) -> bool:
        return len(set(self.groups.values())) <= 1 and len(set(self.trees.values())) <= 1

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "agree": self.agree,
            "groups": {m: [str(d) for d in g.invariant_factors] for m, g in self.groups.items()},
            "orders": {m: str(g.order) for m, g in self.groups.items()},
            "trees": {m: str(t) for m, t in self.trees.items()},
            "skipped": dict(self.skipped),
        }


def compare_methods(spec: PolygonSpec) -> Comparison:
    """Run every applicable group and tree method on one spec."""
    groups, trees, skipped, times = {}, {}, {}, {}
    for m in GROUP_METHODS:
        t0 = time.perf_counter()
        try:
            groups[m] = _group_by(spec, m)
        except UnsupportedError as e:
            skipped[m] = str(e)
            continue
        times[m] = (time.perf_counter() - t0) * 1000
    for m in TREE_METHODS:
        try:
            trees[m] = spanning_trees(spec, m)
        except UnsupportedError as e:
            skipped[f"trees:{m}"] = str(e)
    return Comparison(spec, groups, trees, skipped, times)
