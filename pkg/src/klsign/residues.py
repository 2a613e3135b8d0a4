"""Double-residue bench for smoothed two-variable Perron integrands.

The object of study is the coefficient of 1/(s1 s2) in

    Pcheck(s1) * Qcheck(s2) * Z(s1, s2) * s1^(v1-1) * s2^(v2-1)
        * M^(s1+s2) / (s1 + s2)^v

where Pcheck(s) = sum_k k! p_k / (s log M)^k collects the Mellin data of
a polynomial cutoff P, and Z is entire with a deep diagonal zero.  The
bench evaluates that coefficient two ways: exactly, by expanding every
factor as a Laurent series and reading off the residue, and through the
first-order prediction driven by the diagonal derivative of Z.  The two
must agree to leading order in 1/log M, and the exact route must lose
the predicted power of log M when the problem parameters shift.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .series import BivariateSeries, SeriesExpansion

__all__ = [
    "ResidueProblem",
    "mellin_verify",
    "residue_main_term",
    "residue_numeric",
    "scaling_probe",
]


def _as_fraction_tuple(coeffs) -> tuple:
    out = []
    for c in coeffs:
        out.append(Fraction(c) if isinstance(c, (int, Fraction)) else c)
    return tuple(out)


@dataclass(frozen=True)
class ResidueProblem:
    """One fully-specified residue computation.

    p_coeffs / q_coeffs are the cutoff polynomials by ascending degree;
    z_terms maps (j, k) to the s1^j s2^k coefficient of Z.  log_M is
    carried instead of M so that rational values keep the whole
    computation in exact arithmetic.  checked=False skips the hypothesis
    validation and is how single-monomial slices of a real problem get
    isolated for cancellation experiments.
    """

    p_coeffs: tuple
    q_coeffs: tuple
    z_terms: Mapping[tuple[int, int], object]
    v: int = 1
    v1: int = 1
    v2: int = 1
    m: int = 2
    log_M: object = 20
    C0: object = 1
    checked: bool = True

    def __post_init__(self):
        object.__setattr__(self, "p_coeffs", _as_fraction_tuple(self.p_coeffs))
        object.__setattr__(self, "q_coeffs", _as_fraction_tuple(self.q_coeffs))
        object.__setattr__(self, "z_terms", dict(self.z_terms))
        if min(self.v, self.v1, self.v2) < 1:
            raise ValueError("v, v1, v2 must be positive integers")
        if self.m < 2 or self.m % 2:
            raise ValueError("m must be a positive even integer")
        if not (isinstance(self.log_M, (int, Fraction)) and self.log_M > 0) and not (
            float(self.log_M) > 0
        ):
            raise ValueError("log_M must be positive")
        if any(j < 0 or k < 0 for j, k in self.z_terms):
            raise ValueError("Z must be entire: negative exponents not allowed")
        if self.checked:
            self._validate()

    def _validate(self) -> None:
        half = self.m // 2
        for name, coeffs, vmin in (
            ("p_coeffs", self.p_coeffs, self.v1 + half),
            ("q_coeffs", self.q_coeffs, self.v2 + half),
        ):
            for k, c in enumerate(coeffs):
                if k < vmin and c != 0:
                    raise ValueError(
                        f"{name} must vanish to order {vmin} at 0; "
                        f"found x^{k} coefficient {c}"
                    )
        for (j, k), c in self.z_terms.items():
            if j + k < self.m and c != 0:
                raise ValueError(
                    f"Z needs a diagonal zero of order {self.m}: "
                    f"term s1^{j} s2^{k} violates it"
                )
            if j + k == self.m and (j, k) != (half, half) and c != 0:
                raise ValueError(
                    "order-m part of Z must be the pure diagonal monomial "
                    f"(s1 s2)^{half}; found s1^{j} s2^{k}"
                )
        if self.z_terms.get((half, half), 0) == 0:
            raise ValueError("Z has no diagonal term at order m")

    @property
    def M(self) -> float:
        return math.exp(float(self.log_M))

    @property
    def zm00(self):
        """m-th diagonal derivative of Z at the origin, divided by C0."""
        half = self.m // 2
        c = self.z_terms.get((half, half), 0)
        return math.factorial(self.m) * c / self.C0

    def slice(self, k1: int, k2: int) -> "ResidueProblem":
        """The single-monomial sub-problem keeping only x^k1 of P and x^k2 of Q."""
        p = [Fraction(0)] * (k1 + 1)
        q = [Fraction(0)] * (k2 + 1)
        if k1 <= len(self.p_coeffs) - 1:
            p[k1] = self.p_coeffs[k1]
        if k2 <= len(self.q_coeffs) - 1:
            q[k2] = self.q_coeffs[k2]
        return dataclasses.replace(
            self, p_coeffs=tuple(p), q_coeffs=tuple(q), checked=False
        )


def _mellin_side(coeffs: Sequence, log_m, var: int) -> BivariateSeries:
    # Pcheck(s) = sum_k k! c_k (s log M)^(-k); negative powers of one variable.
    terms = {}
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        terms[-k] = math.factorial(k) * c / log_m**k
    if var == 1:
        return BivariateSeries.from_s1(terms)
    return BivariateSeries.from_s2(terms)


def _exp_series(log_m, order: int, var: int) -> BivariateSeries:
    terms = {}
    acc = Fraction(1) if isinstance(log_m, (int, Fraction)) else 1.0
    for u in range(order + 1):
        terms[u] = acc
        acc = acc * log_m / (u + 1)
    if var == 1:
        return BivariateSeries.from_s1(terms)
    return BivariateSeries.from_s2(terms)


def _binomial_expansion(v: int, order: int, swap: bool) -> BivariateSeries:
    # 1/(s1+s2)^v expanded for |s1| < |s2|:
    #   sum_t (-1)^t C(v+t-1, t) s1^t s2^(-v-t);  swap reverses the roles.
    terms = {}
    for t in range(order + 1):
        c = Fraction((-1) ** t * math.comb(v + t - 1, t))
        terms[(t, -v - t) if not swap else (-v - t, t)] = c
    return BivariateSeries(terms)


def _required_orders(prob: ResidueProblem, swap: bool) -> tuple[int, int, int]:
    """Orders (t, u_inner, u_outer) that provably capture every residue term.

    "Inner" is the variable carrying nonnegative powers of the binomial
    expansion (s1 normally, s2 under swap); its exponential series never
    needs to go past t.  The outer exponential picks up v + t extra
    orders from the s^(-v-t) tail.
    """
    deg_p = max((k for k, c in enumerate(prob.p_coeffs) if c != 0), default=0)
    deg_q = max((k for k, c in enumerate(prob.q_coeffs) if c != 0), default=0)
    inner_deg, inner_v = (deg_p, prob.v1) if not swap else (deg_q, prob.v2)
    outer_deg, outer_v = (deg_q, prob.v2) if not swap else (deg_p, prob.v1)
    t = max(0, inner_deg - inner_v)
    u_inner = t
    u_outer = max(0, outer_deg - outer_v) + prob.v + t
    return t, u_inner, u_outer


def residue_numeric(
    prob: ResidueProblem,
    exp_order: int | None = None,
    binom_order: int | None = None,
    swap: bool = False,
):
    """Exact 1/(s1 s2) coefficient of the full integrand expansion.

    swap=True expands 1/(s1+s2)^v in powers of s2/s1 instead of s1/s2.
    Explicit truncation orders below the provable requirement raise
    rather than silently dropping residue mass.
    """
    t_req, u1_req, u2_req = _required_orders(prob, swap)
    if binom_order is None:
        binom_order = t_req
    elif binom_order < t_req:
        raise ValueError(
            f"binomial truncation {binom_order} insufficient; needs >= {t_req}"
        )
    if exp_order is None:
        exp1, exp2 = u1_req, u2_req
    elif exp_order < max(u1_req, u2_req):
        raise ValueError(
            f"exponential truncation {exp_order} insufficient; "
            f"needs >= {max(u1_req, u2_req)}"
        )
    else:
        exp1 = exp2 = exp_order
    if swap:
        exp1, exp2 = exp2, exp1

    log_m = prob.log_M
    acc = _mellin_side(prob.p_coeffs, log_m, var=1)
    acc = acc * _mellin_side(prob.q_coeffs, log_m, var=2)
    acc = acc * BivariateSeries(dict(prob.z_terms))
    acc = acc * BivariateSeries.monomial(prob.v1 - 1, prob.v2 - 1)
    acc = acc * _exp_series(log_m, exp1, var=1)
    acc = acc * _exp_series(log_m, exp2, var=2)
    acc = acc * _binomial_expansion(prob.v, binom_order, swap)
    return prob.C0 * acc.residue


def _poly_derivative(coeffs: Sequence, times: int) -> tuple:
    cs = list(coeffs)
    for _ in range(times):
        cs = [Fraction(k) * c for k, c in enumerate(cs)][1:] or [Fraction(0)]
    return tuple(cs)


def _poly_mul(a: Sequence, b: Sequence) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _integral_unit_interval(coeffs: Sequence) -> Fraction:
    return sum(
        (Fraction(c) / (k + 1) for k, c in enumerate(coeffs)), start=Fraction(0)
    )


def residue_main_term(prob: ResidueProblem):
    """Leading-order prediction for the residue.

    C0 * zm00 / (Gamma(v) m!) * (log M)^(v - v1 - v2 - m)
        * int_0^1 P^(v1+m/2)(x) Q^(v2+m/2)(x) (1-x)^(v-1) dx
    computed exactly in rationals (up to the type of log_M and C0).
    """
    half = prob.m // 2
    p_der = _poly_derivative(prob.p_coeffs, prob.v1 + half)
    q_der = _poly_derivative(prob.q_coeffs, prob.v2 + half)
    one_minus_x = [Fraction(1), Fraction(-1)]
    weight = [Fraction(1)]
    for _ in range(prob.v - 1):
        weight = _poly_mul(weight, one_minus_x)
    integrand = _poly_mul(_poly_mul(p_der, q_der), weight)
    integral = _integral_unit_interval(integrand)
    power = prob.v - prob.v1 - prob.v2 - prob.m
    gamma_v = math.factorial(prob.v - 1)
    scale = prob.C0 * prob.zm00 * prob.log_M**power
    return scale * integral / (gamma_v * math.factorial(prob.m))


def scaling_probe(prob: ResidueProblem, log_m_values: Sequence) -> float:
    """Fitted d log|residue| / d log log M over a ladder of moduli.

    The fit should recover v - v1 - v2 - m to within the curvature left
    by lower-order terms.
    """
    if len(log_m_values) < 3:
        raise ValueError("need at least three ladder points")
    lms = list(log_m_values)
    if any(b <= a for a, b in zip(lms, lms[1:])) or lms[0] <= 0:
        raise ValueError("ladder must be positive and strictly increasing")
    xs, ys = [], []
    for lm in lms:
        r = residue_numeric(dataclasses.replace(prob, log_M=lm))
        if abs(r) < 1e-30:
            raise ArithmeticError(
                f"residue underflow at log M = {lm}: |r| < 1e-30, fit is meaningless"
            )
        xs.append(math.log(float(lm)))
        ys.append(math.log(abs(float(r))))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def mellin_verify(y: Sequence[float], N: float, f_coeffs: Sequence) -> float:
    """Max pointwise gap between a scaled cutoff and its expanded form.

    Left side evaluates F(log(N/n)/log N) by Horner; right side sums the
    series coefficients against powers of (log N - log n).  Both are cut
    to n <= N, and the maximum absolute difference over the support of y
    comes back.  F must vanish at 0 so the n > N branch is consistent,
    and N must be non-integral so n == N never needs a tie-break.
    """
    if N <= 1:
        raise ValueError("N must exceed 1")
    if float(N) == int(N):
        raise ValueError("integer N puts a sample on the cutoff boundary")
    if f_coeffs and f_coeffs[0] != 0:
        raise ValueError("cutoff polynomial must vanish at 0")
    log_n_cap = math.log(N)
    worst = 0.0
    for idx, yn in enumerate(y):
        n = idx + 1
        if yn == 0:
            continue
        if n > N:
            lhs = 0.0
            rhs = 0.0
        else:
            r = math.log(N / n) / log_n_cap
            acc = 0.0
            for c in reversed(f_coeffs):
                acc = acc * r + float(c)
            lhs = yn * acc
            gap = log_n_cap - math.log(n)
            rhs_acc = 0.0
            gap_pow = 1.0
            for k, c in enumerate(f_coeffs):
                if k:
                    gap_pow *= gap / log_n_cap
                if c:
                    rhs_acc += float(c) * gap_pow
            rhs = yn * rhs_acc
        worst = max(worst, abs(lhs - rhs))
    return worst
