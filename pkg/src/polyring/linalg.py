"""Exact integer matrices: determinants, Smith normal form, determinant divisors.

Everything here works on Python ints, so entries are arbitrary precision and
no floating point is ever involved.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Raised when matrix shapes do not conform."""


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense row-major integer matrix."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, size: int) -> "IntegerMatrix":
        return cls.from_rows([[int(i == j) for j in range(size)] for i in range(size)])

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntegerMatrix":
        k = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(k)] for i in range(k)])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix.from_rows(list(zip(*self.to_rows()))) if self.rows else self

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return multiply(self, other)

    def to_json(self) -> list[list[str]]:
        """Rows of decimal strings (no 64-bit assumption on the reader)."""
        return [[str(x) for x in row] for row in self.to_rows()]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> "IntegerMatrix":
        return cls.from_rows([[int(x) for x in row] for row in data])

    def __str__(self) -> str:
        rows = self.to_rows()
        if not rows:
            return "[]"
        width = max(len(str(x)) for r in rows for x in r)
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in r) + "]" for r in rows)


@dataclass(frozen=True)
class SNFResult:
    invariant_factors: tuple[int, ...]
    rank: int
    determinant_divisors: tuple[int, ...]

    @property
    def nontrivial_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d != 1)


def _as_rows(m: IntegerMatrix | Sequence[Sequence[int]]) -> list[list[int]]:
    if isinstance(m, IntegerMatrix):
        return m.to_rows()
    return [[int(x) for x in r] for r in m]


def _as_matrix(m: IntegerMatrix | Sequence[Sequence[int]]) -> IntegerMatrix:
    return m if isinstance(m, IntegerMatrix) else IntegerMatrix.from_rows(m)


def multiply(a: IntegerMatrix, b: IntegerMatrix) -> IntegerMatrix:
    a, b = _as_matrix(a), _as_matrix(b)
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = list(zip(*b.to_rows())) if b.rows else [() for _ in range(b.cols)]
    out = [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a.to_rows()]
    return IntegerMatrix(a.rows, b.cols, tuple(x for r in out for x in r))


def matrix_power(a: IntegerMatrix, k: int) -> IntegerMatrix:
    if not a.is_square:
        raise DimensionError("matrix power needs a square matrix")
    if k < 0:
        raise ValueError("negative power")
    result = IntegerMatrix.identity(a.rows)
    base = a
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def random_unimodular(size: int, seed: int | None = None, steps: int | None = None) -> IntegerMatrix:
    """Product of random elementary integer row operations, so ``|det| == 1``."""
    rng = random.Random(seed)
    m = IntegerMatrix.identity(size).to_rows()
    if size < 2:
        return IntegerMatrix.from_rows([[rng.choice((1, -1))]] if size else [])
    for _ in range(steps if steps is not None else 4 * size):
        i, j = rng.sample(range(size), 2)
        op = rng.random()
        if op < 0.7:
            k = rng.choice((-2, -1, 1, 2))
            m[i] = [x + k * y for x, y in zip(m[i], m[j])]
        elif op < 0.85:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-x for x in m[i]]
    return IntegerMatrix.from_rows(m)


def determinant(m: IntegerMatrix | Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    a = _as_rows(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def gcd_all(values: Iterable[int]) -> int:
    """gcd of a collection, with gcd(x, 0) = |x| and gcd() = 0."""
    return reduce(gcd, values, 0)


def determinant_divisors(m: IntegerMatrix | Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Delta_1, ..., Delta_r by brute-force enumeration of every k x k minor.

    Stops at the rank (the first k whose minors all vanish). Meant for the
    small relation matrices; cost grows combinatorially.
    """
    a = _as_rows(m)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    out = []
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for rs in combinations(range(nrows), k):
            sub_rows = [a[r] for r in rs]
            for cs in combinations(range(ncols), k):
                g = gcd(g, determinant([[row[c] for c in cs] for row in sub_rows]))
        if g == 0:
            break
        out.append(g)
    return tuple(out)


def _diagonalize(a: list[list[int]]) -> list[int]:
    """Reduce to a diagonal form by unimodular row/column operations.

    Returns the nonzero diagonal entries (absolute values); divisibility is
    not enforced here. Rows are kept sparse (dict col -> value) with a column
    index so that sparse inputs such as Laplacians stay cheap.
    """
    rows: dict[int, dict[int, int]] = {}
    colidx: dict[int, set[int]] = {}
    for i, r in enumerate(a):
        d = {j: x for j, x in enumerate(r) if x}
        if d:
            rows[i] = d
            for j in d:
                colidx.setdefault(j, set()).add(i)

    def set_entry(i: int, j: int, x: int) -> None:
        row = rows[i]
        if x:
            if j not in row:
                colidx.setdefault(j, set()).add(i)
            row[j] = x
        elif j in row:
            del row[j]
            colidx[j].discard(i)

    diag: list[int] = []
    while rows:
        # least absolute value nonzero entry; stop early on a unit
        best = None
        for i, row in rows.items():
            for j, x in row.items():
                ax = abs(x)
                if best is None or ax < best[0]:
                    best = (ax, i, j)
                    if ax == 1:
                        break
            if best is not None and best[0] == 1:
                break
        _, pi, pj = best
        prow = rows[pi]
        p = prow[pj]

        # clear column pj with row operations
        for i in list(colidx.get(pj, ())):
            if i == pi:
                continue
            row = rows[i]
            q = row[pj] // p
            for j, x in prow.items():
                set_entry(i, j, row.get(j, 0) - q * x)
            if not row:
                del rows[i]

        if len(colidx.get(pj, ())) > 1:
            continue  # remainders left in the column; a smaller pivot exists

        # column pj is now zero outside the pivot row, so column operations
        # only touch the pivot row
        leftover = False
        for j in [j for j in prow if j != pj]:
            r = prow[j] - (prow[j] // p) * p
            set_entry(pi, j, r)
            leftover = leftover or r != 0
        if leftover:
            continue

        diag.append(abs(p))
        for j in list(prow):
            colidx[j].discard(pi)
        del rows[pi]
    return diag


def _normalize_diagonal(diag: list[int]) -> list[int]:
    """Turn a diagonal into invariant factors via (gcd, lcm) swaps."""
    units = sum(1 for d in diag if d == 1)
    rest = [d for d in diag if d != 1]
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            x, y = rest[i], rest[j]
            if y % x:
                g = gcd(x, y)
                rest[i], rest[j] = g, x // g * y
    rest.sort()
    return [1] * units + rest


def snf(m: IntegerMatrix | Sequence[Sequence[int]]) -> SNFResult:
    """Smith normal form invariants of an arbitrary rectangular integer matrix.

    Zero diagonal entries are not reported as factors; they show up as
    ``rank < min(rows, cols)``.
    """
    factors = _normalize_diagonal(_diagonalize(_as_rows(m)))
    divisors = []
    acc = 1
    for d in factors:
        acc *= d
        divisors.append(acc)
    return SNFResult(tuple(factors), len(factors), tuple(divisors))
