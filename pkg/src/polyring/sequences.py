"""Integer sequences obeying x_n = (a+b+2) x_{n-1} - x_{n-2}.

tau counts spanning trees of uniform polygon chains; beta, gamma, delta are
companions with other seeds. The closed forms through the roots of
x^2 - s x + 1 are never evaluated: every value comes from the recurrence and
every identity is checked in integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable


class SequenceDomainError(ValueError):
    pass


class ConsistencyError(ArithmeticError):
    """An integrality the theory guarantees failed; signals a bug, not bad input."""


def exact_div(num: int, den: int, what: str = "value") -> int:
    if den == 0:
        raise SequenceDomainError(f"{what}: division by zero")
    q, r = divmod(num, den)
    if r:
        raise ConsistencyError(f"{what}: {num} is not divisible by {den}")
    return q


# seeds (x_0, x_1) as functions of a+b; tau is seeded at index -1
_SEEDS: dict[str, Callable[[int], tuple[int, int]]] = {
    "tau": lambda ab: (-1, 0),
    "beta": lambda ab: (2, ab + 2),
    "gamma": lambda ab: (-1, 1),
    "delta": lambda ab: (1, ab + 1),
}
_OFFSET = {"tau": -1, "beta": 0, "gamma": 0, "delta": 0}


@dataclass(frozen=True)
class SequenceParams:
    a: int
    b: int
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise SequenceDomainError("a and b must be non-negative")

    @property
    def s(self) -> int:
        return self.a + self.b + 2

    @property
    def ab(self) -> int:
        return self.a + self.b

    def values(self, name: str, upto: int) -> list[int]:
        """List of the sequence from its first defined index through ``upto``."""
        seq = self._cache.get(name)
        if seq is None:
            seq = list(_SEEDS[name](self.ab))
            self._cache[name] = seq
        need = upto - _OFFSET[name] + 1
        s = self.s
        while len(seq) < need:
            seq.append(s * seq[-1] - seq[-2])
        return seq

    def term(self, name: str, n: int) -> int:
        lo = _OFFSET[name]
        if n < lo:
            raise SequenceDomainError(f"{name}_{n} is undefined (index must be >= {lo})")
        return self.values(name, n)[n - lo]


def _params(p: SequenceParams | tuple[int, int]) -> SequenceParams:
    return p if isinstance(p, SequenceParams) else SequenceParams(*p)


def tau(n: int, p: SequenceParams | tuple[int, int]) -> int:
    return _params(p).term("tau", n)


def beta(n: int, p: SequenceParams | tuple[int, int]) -> int:
    return _params(p).term("beta", n)


def gamma(n: int, p: SequenceParams | tuple[int, int]) -> int:
    return _params(p).term("gamma", n)


def delta(n: int, p: SequenceParams | tuple[int, int]) -> int:
    return _params(p).term("delta", n)


def _need_ab(p: SequenceParams) -> int:
    if p.ab == 0:
        raise SequenceDomainError("rho, s_n and primed sequences need a + b >= 1")
    return p.ab


def rho(n: int, p: SequenceParams | tuple[int, int]) -> int:
    """(tau_n - tau_{n-1} - 1) / (a+b), which also equals tau_0 + ... + tau_{n-1}."""
    p = _params(p)
    if n < 1:
        raise SequenceDomainError("rho_n needs n >= 1")
    return exact_div(tau(n, p) - tau(n - 1, p) - 1, _need_ab(p), f"rho_{n}")


def s_seq(n: int, p: SequenceParams | tuple[int, int]) -> int:
    """(tau_{n+1} - tau_{n-1} - 2) / (a+b)."""
    p = _params(p)
    if n < 1:
        raise SequenceDomainError("s_n needs n >= 1")
    return exact_div(tau(n + 1, p) - tau(n - 1, p) - 2, _need_ab(p), f"s_{n}")


def tau_prime(n: int, p) -> int:
    p = _params(p)
    return exact_div(tau(n, p) - n, _need_ab(p), f"tau'_{n}")


def beta_prime(n: int, p) -> int:
    p = _params(p)
    return exact_div(beta(n, p) - 2, _need_ab(p), f"beta'_{n}")


def gamma_prime(n: int, p) -> int:
    p = _params(p)
    return exact_div(gamma(n, p) - 2 * n + 1, _need_ab(p), f"gamma'_{n}")


def delta_prime(n: int, p) -> int:
    p = _params(p)
    return exact_div(delta(n, p) - 1, _need_ab(p), f"delta'_{n}")


def primed(n: int, p) -> tuple[int, int, int, int]:
    """(tau'_n, beta'_n, gamma'_n, delta'_n); each division is checked exact."""
    if n < 0:
        raise SequenceDomainError("primed sequences need n >= 0")
    return tau_prime(n, p), beta_prime(n, p), gamma_prime(n, p), delta_prime(n, p)


@dataclass(frozen=True)
class SequenceRow:
    n: int
    tau: int
    beta: int
    gamma: int
    delta: int
    rho: int | None
    s_n: int | None
    tau_prime: int | None
    beta_prime: int | None
    gamma_prime: int | None
    delta_prime: int | None


def sequence_table(p: SequenceParams | tuple[int, int], upto: int) -> list[SequenceRow]:
    p = _params(p)
    rows = []
    for n in range(upto + 1):
        have_ab = p.ab > 0
        pr = primed(n, p) if have_ab else (None,) * 4
        rows.append(SequenceRow(
            n, tau(n, p), beta(n, p), gamma(n, p), delta(n, p),
            rho(n, p) if have_ab and n >= 1 else None,
            s_seq(n, p) if have_ab and n >= 1 else None,
            *pr,
        ))
    return rows


@dataclass
class IdentityReport:
    n: int
    a: int
    b: int
    results: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.results.items() if not v]


def _integral(f: Callable[[], int]) -> bool:
    try:
        f()
    except ConsistencyError:
        return False
    return True


def check_identities(n: int, p: SequenceParams | tuple[int, int]) -> IdentityReport:
    """Evaluate every sequence identity at index n (n >= 1, a+b >= 1)."""
    p = _params(p)
    if n < 1:
        raise SequenceDomainError("identities are checked for n >= 1")
    ab = _need_ab(p)
    t = lambda k: tau(k, p)
    res: dict[str, bool] = {}

    # sum_{i<n} tau_i = (tau_n - tau_{n-1} - 1)/(a+b)
    res["partial_sum"] = sum(t(i) for i in range(n)) * ab == t(n) - t(n - 1) - 1
    # Cassini-type identity
    res["cassini"] = t(n - 1) ** 2 - t(n) * t(n - 2) == 1 if n >= 1 else True
    # rho_{n+1} = tau_n + rho_n and tau_n^2 - (a+b) rho_n rho_{n+1} = s_n
    res["rho_step"] = rho(n + 1, p) == t(n) + rho(n, p)
    res["rho_square"] = t(n) ** 2 - ab * rho(n, p) * rho(n + 1, p) == s_seq(n, p)

    # halving factorizations
    if n % 2 == 0:
        m = n // 2
        res["half_tau"] = t(n) == t(m) * beta(m, p)
        res["half_tau_prev_plus"] = t(n - 1) + 1 == t(m) * beta(m - 1, p)
        res["half_tau_prev_minus"] = t(n - 1) - 1 == t(m - 1) * beta(m, p)
        res["half_rho"] = rho(n, p) == t(m) * gamma(m, p)
        res["half_s"] = s_seq(n, p) == (ab + 4) * t(m) ** 2
    else:
        m = (n - 1) // 2
        res["half_tau"] = t(n) == gamma(m + 1, p) * delta(m, p)
        if m >= 1:
            res["half_tau_prev_plus"] = t(n - 1) + 1 == gamma(m + 1, p) * delta(m - 1, p)
        else:
            # delta_{-1} is undefined; run the recurrence backwards: delta_{-1} = s*delta_0 - delta_1
            res["half_tau_prev_plus"] = t(n - 1) + 1 == gamma(1, p) * (p.s * delta(0, p) - delta(1, p))
        res["half_tau_prev_minus"] = t(n - 1) - 1 == gamma(m, p) * delta(m, p)
        res["half_rho"] = rho(n, p) == t(m) * gamma(m + 1, p)
        res["half_s"] = s_seq(n, p) == gamma(m + 1, p) ** 2

    # consecutive gcds
    res["gcd_tau"] = gcd(t(n), t(n - 1)) == 1
    res["gcd_gamma"] = gcd(gamma(n, p), gamma(n - 1, p)) == 1
    res["gcd_delta"] = gcd(delta(n, p), delta(n - 1, p)) == 1
    res["gcd_beta"] = gcd(beta(n, p), beta(n - 1, p)) == (2 if ab % 2 == 0 else 1)

    # integrality of the primed sequences
    res["tau_prime"] = _integral(lambda: tau_prime(n, p))
    res["beta_prime"] = _integral(lambda: beta_prime(n, p))
    res["gamma_prime"] = _integral(lambda: gamma_prime(n, p))
    res["delta_prime"] = _integral(lambda: delta_prime(n, p))
    return IdentityReport(n, p.a, p.b, res)
