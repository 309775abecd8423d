"""Exact lower and upper bounds for the topological complexity of RP^n (and CP^n).

All arithmetic here is integer arithmetic; no floating point is used.

Zero-divisor cup-length of RP^n: in H*(RP^n x RP^n; Z2) = Z2[a, b]/(a^(n+1), b^(n+1))
the class a + b is a zero divisor, and the longest nonzero product of zero
divisors is its largest nonzero power.  Any monomial a^i b^j with i + j > 2n
has i > n or j > n, so (a + b)^m = 0 for m > 2n and the search stops at 2n.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional


class ConsistencyError(RuntimeError):
    """A computed bound contradicts a tabulated value."""


def _clmul(x: int, y: int) -> int:
    """Carry-less product of bit vectors (multiplication in Z2[t])."""
    if x.bit_length() < y.bit_length():
        x, y = y, x
    out = 0
    while y:
        low = y & -y
        out ^= x << (low.bit_length() - 1)
        y ^= low
    return out


@dataclass(frozen=True)
class BigradedZ2Poly:
    """Element of Z2[a, b]/(a^(n+1), b^(n+1)).

    ``rows[i]`` is a bit mask whose bit j is the coefficient of a^i b^j.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        mask = (1 << (self.n + 1)) - 1
        rows = tuple(int(r) & mask for r in self.rows) + (0,) * (self.n + 1 - len(self.rows))
        if len(rows) != self.n + 1:
            raise ValueError("too many rows for the truncation degree")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zero(cls, n: int) -> BigradedZ2Poly:
        return cls(n, ())

    @classmethod
    def one(cls, n: int) -> BigradedZ2Poly:
        return cls(n, (1,))

    @classmethod
    def monomial(cls, n: int, i: int, j: int) -> BigradedZ2Poly:
        if i > n or j > n:
            return cls.zero(n)
        rows = [0] * (n + 1)
        rows[i] = 1 << j
        return cls(n, tuple(rows))

    def coefficient(self, i: int, j: int) -> int:
        if not (0 <= i <= self.n and 0 <= j <= self.n):
            return 0
        return (self.rows[i] >> j) & 1

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __add__(self, other: BigradedZ2Poly) -> BigradedZ2Poly:
        self._same(other)
        return BigradedZ2Poly(self.n, tuple(x ^ y for x, y in zip(self.rows, other.rows)))

    __sub__ = __add__

    def __mul__(self, other: BigradedZ2Poly) -> BigradedZ2Poly:
        self._same(other)
        out = [0] * (self.n + 1)
        for i, x in enumerate(self.rows):
            if not x:
                continue
            for k, y in enumerate(other.rows[: self.n + 1 - i]):
                if y:
                    out[i + k] ^= _clmul(x, y)
        return BigradedZ2Poly(self.n, tuple(out))

    def __pow__(self, m: int) -> BigradedZ2Poly:
        if m < 0:
            raise ValueError("negative power")
        result, base = BigradedZ2Poly.one(self.n), self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def _same(self, other):
        if self.n != other.n:
            raise ValueError("truncation degrees differ")


@dataclass(frozen=True)
class BigradedIntPoly:
    """Element of Z[x, y]/(x^(n+1), y^(n+1)) with x = w (x) 1 and y = 1 (x) w.

    Multiplication follows the graded tensor sign rule
    (v1 (x) u1)(v2 (x) u2) = (-1)^(|u1| |v2|) v1 v2 (x) u1 u2, where the
    generator w has degree ``generator_degree``.
    """

    n: int
    coeffs: tuple[tuple[int, ...], ...]
    generator_degree: int = 2

    def __post_init__(self):
        rows = [tuple(int(c) for c in row[: self.n + 1]) for row in self.coeffs[: self.n + 1]]
        rows = [r + (0,) * (self.n + 1 - len(r)) for r in rows]
        rows += [(0,) * (self.n + 1)] * (self.n + 1 - len(rows))
        object.__setattr__(self, "coeffs", tuple(rows))

    @classmethod
    def monomial(cls, n: int, i: int, j: int, c: int = 1, generator_degree: int = 2) -> BigradedIntPoly:
        rows = [[0] * (n + 1) for _ in range(n + 1)]
        if i <= n and j <= n:
            rows[i][j] = c
        return cls(n, tuple(map(tuple, rows)), generator_degree)

    @classmethod
    def one(cls, n: int, generator_degree: int = 2) -> BigradedIntPoly:
        return cls.monomial(n, 0, 0, 1, generator_degree)

    def coefficient(self, i: int, j: int) -> int:
        if not (0 <= i <= self.n and 0 <= j <= self.n):
            return 0
        return self.coeffs[i][j]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.coeffs)

    def _combine(self, other, sign):
        if self.n != other.n or self.generator_degree != other.generator_degree:
            raise ValueError("incompatible rings")
        return BigradedIntPoly(
            self.n,
            tuple(tuple(a + sign * b for a, b in zip(r, s)) for r, s in zip(self.coeffs, other.coeffs)),
            self.generator_degree,
        )

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, other: BigradedIntPoly) -> BigradedIntPoly:
        if self.n != other.n or self.generator_degree != other.generator_degree:
            raise ValueError("incompatible rings")
        n, g = self.n, self.generator_degree
        out = [[0] * (n + 1) for _ in range(n + 1)]
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if not c:
                    continue
                for k in range(n + 1 - i):
                    orow = other.coeffs[k]
                    # sign (-1)^(|y^j| |x^k|)
                    sign = -1 if (j * g * k * g) % 2 else 1
                    for l in range(n + 1 - j):
                        if orow[l]:
                            out[i + k][j + l] += sign * c * orow[l]
        return BigradedIntPoly(n, tuple(map(tuple, out)), g)

    def __pow__(self, m: int) -> BigradedIntPoly:
        if m < 0:
            raise ValueError("negative power")
        result, base = BigradedIntPoly.one(self.n, self.generator_degree), self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result


# -- zero-divisor cup-lengths ------------------------------------------------


def zd_cuplength_rp_poly(n: int) -> int:
    """Largest m <= 2n with (a + b)^m != 0, by repeated truncated multiplication."""
    if n < 1:
        raise ValueError("n must be at least 1")
    zd = BigradedZ2Poly.monomial(n, 1, 0) + BigradedZ2Poly.monomial(n, 0, 1)
    power, m = zd, 1
    while m < 2 * n:
        nxt = power * zd
        if nxt.is_zero():
            break
        power, m = nxt, m + 1
    return m


def zd_cuplength_rp_binomial(n: int) -> int:
    """Largest m <= 2n with some odd C(m, i), i <= n and m - i <= n.

    C(m, i) is odd exactly when the binary digits of i are a subset of those of m.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    for m in range(2 * n, 0, -1):
        if any(i & ~m == 0 for i in range(max(0, m - n), min(n, m) + 1)):
            return m
    return 0


def zd_cuplength_rp(n: int) -> int:
    poly = zd_cuplength_rp_poly(n)
    binom = zd_cuplength_rp_binomial(n)
    if poly != binom:
        raise ConsistencyError(f"cup-length routes disagree at n={n}: {poly} vs {binom}")
    return poly


@dataclass(frozen=True)
class ComplexProjectiveResult:
    n: int
    cup_length: int
    top_coefficient: int
    lower: int
    upper: int

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.lower == self.upper else None


def zd_cuplength_cp_details(n: int) -> ComplexProjectiveResult:
    """Expand (w (x) 1 - 1 (x) w)^m over Z in the cohomology of CP^n x CP^n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    x = BigradedIntPoly.monomial(n, 1, 0)
    y = BigradedIntPoly.monomial(n, 0, 1)
    zd = x - y
    power, m = zd, 1
    while True:
        nxt = power * zd
        if nxt.is_zero():
            break
        power, m = nxt, m + 1
    top = power.coefficient(n, n)
    if m != 2 * n:
        raise ConsistencyError(f"expected the top nonzero power to be {2 * n}, got {m}")
    if top != (-1) ** n * math.comb(2 * n, n):
        raise ConsistencyError(f"coefficient of w^n (x) w^n is {top}")
    if not (zd ** (2 * n + 1)).is_zero():
        raise ConsistencyError("power 2n+1 should vanish")
    return ComplexProjectiveResult(n, m, top, m + 1, upper_bound_connectivity(2 * n, 1))


def zd_cuplength_cp(n: int) -> int:
    return zd_cuplength_cp_details(n).cup_length


# -- individual bounds -------------------------------------------------------


def lower_bound_zdcl(n: int) -> int:
    return zd_cuplength_rp(n) + 1


def lower_bound_pow2(n: int) -> int:
    """2^r for the largest r with n >= 2^(r-1)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 1 << n.bit_length()


def lower_bound_cat(n: int) -> int:
    if n < 1:
        raise ValueError("n must be at least 1")
    return n + 1


def upper_bound_whitney(n: int) -> int:
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2 if n == 1 else 2 * n


# k(n) by n mod 8; only the odd residues are defined.
MILGRAM_K = {1: 0, 3: 1, 5: 1, 7: 4}


def upper_bound_milgram(n: int) -> int:
    if n < 1 or n % 2 == 0:
        raise ValueError(f"the nonsingular-map bound needs odd n >= 1, got {n}")
    return 2 * n + 1 - bin(n).count("1") - MILGRAM_K[n % 8]


def upper_bound_connectivity(dim: int, r: int) -> int:
    """Greatest integer strictly below (2 dim + 1)/(r + 1) + 1."""
    if dim < 1 or r < 0:
        raise ValueError("need dim >= 1 and r >= 0")
    x = Fraction(2 * dim + 1, r + 1) + 1
    return x.numerator // x.denominator - (1 if x.denominator == 1 else 0)


TC_TABLE = (2, 4, 4, 8, 8, 8, 8, 16, 16, 17, 17, 19, 23, 23, 23, 32, 32, 33, 33, 35, 39, 39, 39)
TABLE_MAX_N = len(TC_TABLE)
TABLE_SOURCE = "tabulated: one more than the least immersion dimension of RP^n (n != 1, 3, 7), n + 1 otherwise"


def table_value(n: int) -> int:
    if not 1 <= n <= TABLE_MAX_N:
        raise ValueError(f"tabulated values exist for 1 <= n <= {TABLE_MAX_N}")
    return TC_TABLE[n - 1]


SOURCES = {
    "lower_cat": "TC(X) >= cat(X); cat(RP^n) = n + 1",
    "lower_pow2": "n >= 2^(r-1) implies TC >= 2^r (power of a zero divisor)",
    "lower_zdcl": "TC > zero-divisor cup-length over Z2",
    "upper_whitney": "immersion RP^n -> R^(2n-1) (Whitney) gives TC <= 2n",
    "upper_milgram": "nonsingular maps R^(n+1) x R^(n+1) -> R^(2n+1-alpha(n)-k(n)), n odd",
}


@dataclass(frozen=True)
class BoundsReport:
    n: int
    lower_cat: int
    lower_pow2: int
    lower_zdcl: int
    upper_whitney: int
    upper_milgram: Optional[int]
    table_value: Optional[int]
    special_value: Optional[int]

    @property
    def lower(self) -> int:
        return max(self.lower_cat, self.lower_pow2, self.lower_zdcl)

    @property
    def upper(self) -> int:
        ups = [self.upper_whitney] + ([self.upper_milgram] if self.upper_milgram is not None else [])
        return min(ups)

    @property
    def tight_lower(self) -> Optional[bool]:
        return None if self.table_value is None else self.lower == self.table_value

    @property
    def tight_upper(self) -> Optional[bool]:
        return None if self.table_value is None else self.upper == self.table_value

    def sandwich_ok(self) -> bool:
        if self.table_value is None:
            return self.lower <= self.upper
        return self.lower <= self.table_value <= self.upper

    def to_record(self) -> dict:
        bounds = [
            {"name": name, "value": getattr(self, name), "provenance": SOURCES[name]}
            for name in SOURCES
            if getattr(self, name) is not None
        ]
        return {
            "n": self.n,
            "bounds": bounds,
            "lower": self.lower,
            "upper": self.upper,
            "table_value": self.table_value,
            "table_provenance": TABLE_SOURCE if self.table_value is not None else None,
            "special_value": self.special_value,
            "tight_lower": self.tight_lower,
            "tight_upper": self.tight_upper,
        }

    def csv_row(self) -> dict:
        row = asdict(self)
        row.update(lower=self.lower, upper=self.upper, tight_lower=self.tight_lower, tight_upper=self.tight_upper)
        return row


CSV_FIELDS = (
    "n", "lower_cat", "lower_pow2", "lower_zdcl", "upper_whitney", "upper_milgram",
    "table_value", "special_value", "lower", "upper", "tight_lower", "tight_upper",
)


def bounds_report(n: int, check: bool = True) -> BoundsReport:
    if n < 1:
        raise ValueError("n must be at least 1")
    report = BoundsReport(
        n=n,
        lower_cat=lower_bound_cat(n),
        lower_pow2=lower_bound_pow2(n),
        lower_zdcl=lower_bound_zdcl(n),
        upper_whitney=upper_bound_whitney(n),
        upper_milgram=upper_bound_milgram(n) if n % 2 else None,
        table_value=table_value(n) if n <= TABLE_MAX_N else None,
        special_value=n + 1 if n in (1, 3, 7) else None,
    )
    if check and not report.sandwich_ok():
        raise ConsistencyError(f"bounds {report.lower}..{report.upper} do not bracket {report.table_value} at n={n}")
    return report


def table_csv(max_n: int = TABLE_MAX_N) -> str:
    if not 1 <= max_n <= TABLE_MAX_N:
        raise ValueError(f"max_n must lie in 1..{TABLE_MAX_N}")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for n in range(1, max_n + 1):
        row = bounds_report(n, check=False).csv_row()
        writer.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_FIELDS})
    return buf.getvalue()
