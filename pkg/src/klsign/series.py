"""Exact truncated power series, univariate and bivariate Laurent.

Coefficients are whatever number type the caller supplies; with Fraction
inputs every operation below is exact, which is what lets residue
cancellations be tested against literal zero instead of a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping


@dataclass(frozen=True)
class SeriesExpansion:
    """Power series about 0 truncated at a declared order.

    coeffs[k] is the x^k coefficient; len(coeffs) == order + 1.  All
    arithmetic truncates to the smaller operand order, so the invariant
    "multiply then truncate equals truncate then multiply" holds by
    construction.
    """

    coeffs: tuple

    @classmethod
    def from_polynomial(cls, coeffs, order: int | None = None) -> "SeriesExpansion":
        cs = list(coeffs)
        if order is not None:
            cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        return cls(tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, order: int) -> "SeriesExpansion":
        if order >= self.order:
            return self
        return SeriesExpansion(self.coeffs[: order + 1])

    def __add__(self, other: "SeriesExpansion") -> "SeriesExpansion":
        k = min(self.order, other.order)
        return SeriesExpansion(
            tuple(self.coeffs[i] + other.coeffs[i] for i in range(k + 1))
        )

    def __mul__(self, other: "SeriesExpansion") -> "SeriesExpansion":
        k = min(self.order, other.order)
        out = [0 * (self.coeffs[0] + other.coeffs[0])] * (k + 1)
        for i, a in enumerate(self.coeffs[: k + 1]):
            if a == 0:
                continue
            for j in range(k + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return SeriesExpansion(tuple(out))

    def scale(self, c) -> "SeriesExpansion":
        return SeriesExpansion(tuple(c * a for a in self.coeffs))

    def compose_linear(self, c) -> "SeriesExpansion":
        """The series of f(c x): a_k -> a_k c^k."""
        return SeriesExpansion(tuple(a * c**k for k, a in enumerate(self.coeffs)))

    def divide_by_unit(self, other: "SeriesExpansion") -> "SeriesExpansion":
        """Long division by a series with invertible constant term."""
        if other.coeffs[0] == 0:
            raise ZeroDivisionError("divisor has no constant term")
        k = min(self.order, other.order)
        inv0 = Fraction(1) / other.coeffs[0] if isinstance(other.coeffs[0], (int, Fraction)) else 1.0 / other.coeffs[0]
        out = []
        for i in range(k + 1):
            acc = self.coeffs[i]
            for j in range(i):
                acc = acc - out[j] * other.coeffs[i - j]
            out.append(acc * inv0)
        return SeriesExpansion(tuple(out))

    def derivative(self, times: int = 1) -> "SeriesExpansion":
        cs = list(self.coeffs)
        for _ in range(times):
            cs = [k * c for k, c in enumerate(cs)][1:] or [Fraction(0)]
        return SeriesExpansion(tuple(cs))

    def __call__(self, x):
        acc = 0 * self.coeffs[0]
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


class BivariateSeries:
    """Sparse Laurent series in two variables.

    terms maps (j, k) -> coefficient of s1^j s2^k; exponents may be
    negative.  Products keep every term, so once the input factors are
    truncated consistently the residue coefficient at (-1, -1) is exact
    and independent of multiplication order.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object]):
        self.terms = {jk: c for jk, c in terms.items() if c != 0}

    @classmethod
    def monomial(cls, j: int, k: int, c=Fraction(1)) -> "BivariateSeries":
        return cls({(j, k): c})

    @classmethod
    def from_s1(cls, coeffs: Mapping[int, object]) -> "BivariateSeries":
        return cls({(j, 0): c for j, c in coeffs.items()})

    @classmethod
    def from_s2(cls, coeffs: Mapping[int, object]) -> "BivariateSeries":
        return cls({(0, k): c for k, c in coeffs.items()})

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        out = dict(self.terms)
        for jk, c in other.terms.items():
            out[jk] = out.get(jk, 0) + c
        return BivariateSeries(out)

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        out: dict[tuple[int, int], object] = {}
        for (j1, k1), a in self.terms.items():
            for (j2, k2), b in other.terms.items():
                key = (j1 + j2, k1 + k2)
                out[key] = out.get(key, 0) + a * b
        return BivariateSeries(out)

    def coefficient(self, j: int, k: int):
        return self.terms.get((j, k), Fraction(0))

    @property
    def residue(self):
        """The coefficient of 1/(s1 s2)."""
        return self.coefficient(-1, -1)

    def s1_range(self) -> tuple[int, int]:
        js = [j for j, _ in self.terms] or [0]
        return min(js), max(js)

    def s2_range(self) -> tuple[int, int]:
        ks = [k for _, k in self.terms] or [0]
        return min(ks), max(ks)
