"""Truncated-divisor sieve weights and their moment identities.

The detector weight attached to a modulus n is W(n) = (sum of lambda_d
over d dividing n * Pi_l with d <= sqrt(D))^2, where

    lambda_d = mu(d) * F(1 - log d / log sqrt(D)),   F(x) = x^14,

Pi_l is the product of the first l primes, and D = X^(1/2 - epsilon).
Squaring makes W nonnegative by construction while lambda_1 = 1 keeps it
pinned at moderate size; the kappa = 4 moment cancellation that powers
the main-term analysis shows up here as vanishing alternating moments
of log d over divisors of Pi_l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .arith import FactoredInteger, factorize, primes_up_to

_MP_DPS = 60

# DFS over weighted divisors refuses to visit more nodes than this.
_DIVISOR_BUDGET = 1 << 20


@lru_cache(maxsize=None)
def first_primes(l: int) -> tuple[int, ...]:
    """The first l primes."""
    bound = 64
    while True:
        ps = primes_up_to(bound)
        if len(ps) >= l:
            return tuple(ps[:l])
        bound *= 2


@dataclass(frozen=True)
class SieveConfig:
    """Scale and shape parameters for the weight system.

    D = X^(1/2 - epsilon) is the sieve level; divisors above sqrt(D)
    are cut off.  kappa and l are frozen by the argument (kappa = 4
    detection moments, l = 10 forced small primes); f_exponent is the
    vanishing order of the profile F(x) = x^f_exponent.
    """

    X: float
    epsilon: float = 0.02
    kappa: int = 4
    l: int = 10
    f_exponent: int = 14

    def __post_init__(self) -> None:
        if self.X < 10:
            raise ValueError(f"X must be at least 10, got {self.X}")
        if not 0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")

    @classmethod
    def from_sqrt_d(cls, sqrt_d: float, epsilon: float = 0.02, **kw) -> "SieveConfig":
        """The config whose cutoff sqrt(D) equals the given value."""
        X = sqrt_d ** (2.0 / (0.5 - epsilon))
        return cls(X=X, epsilon=epsilon, **kw)

    @property
    def D(self) -> float:
        return self.X ** (0.5 - self.epsilon)

    @property
    def sqrt_d(self) -> float:
        return self.X ** ((0.5 - self.epsilon) / 2.0)

    @property
    def log_sqrt_d(self) -> float:
        return (0.5 - self.epsilon) / 2.0 * math.log(self.X)

    @property
    def pi_l(self) -> int:
        return math.prod(first_primes(self.l))


def _profile(x: float, exponent: int) -> float:
    # F clamps to [0, 1]: zero left of 0, one right of 1.
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    return x**exponent


def lambda_d(d: int, cfg: SieveConfig) -> float:
    """mu(d) * F(1 - log d / log sqrt(D)), zero beyond the cutoff."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if d == 1:
        return 1.0
    logd = math.log(d)
    if logd > cfg.log_sqrt_d:
        return 0.0
    fi = factorize(d)
    if fi.mu == 0:
        return 0.0
    return fi.mu * _profile(1.0 - logd / cfg.log_sqrt_d, cfg.f_exponent)


def xi_d(d: int, cfg: SieveConfig) -> float:
    """sum of lambda_{h1} lambda_{h2} over pairs with lcm(h1, h2) = d.

    Defined on squarefree d; these are the coefficients produced by
    opening the square in W, and they obey |xi_d| <= 3^omega(d).
    """
    fi = factorize(d)
    if not fi.is_squarefree():
        raise ValueError(f"xi_d expects squarefree d, got {d}")
    total = 0.0
    for h1 in fi.divisors():
        lam1 = lambda_d(h1, cfg)
        if lam1 == 0.0:
            continue
        rest = d // h1
        # h2 must supply every prime of d missing from h1, plus any subset
        # of h1's primes.
        inner = 0.0
        for e in factorize(h1).divisors():
            inner += lambda_d(rest * e, cfg)
        total += lam1 * inner
    return total


def _lambda_divisor_sum(primes: list[int], log_sqrt_d: float, exponent: int) -> float:
    """sum of lambda_d over squarefree d <= sqrt(D) composed of the given primes."""
    logs = [math.log(p) for p in primes]
    total = 0.0
    visits = 0
    stack = [(0, 0.0, 1)]
    while stack:
        i, logd, sign = stack.pop()
        visits += 1
        if visits > _DIVISOR_BUDGET:
            raise RuntimeError(
                f"divisor enumeration exceeded {_DIVISOR_BUDGET} nodes"
            )
        total += sign * _profile(1.0 - logd / log_sqrt_d, exponent)
        for j in range(i, len(primes)):
            nl = logd + logs[j]
            if nl > log_sqrt_d:
                break  # primes ascend, so later j only overshoot further
            stack.append((j + 1, nl, -sign))
    return total


def weight_W(n: int | FactoredInteger, cfg: SieveConfig) -> float:
    """W(n) = (sum of lambda_d over d | n*Pi_l, d <= sqrt(D))^2.

    Only the radical of n matters, and only primes at most sqrt(D) can
    appear in a surviving divisor.
    """
    fi = n if isinstance(n, FactoredInteger) else factorize(n)
    primes = sorted(set(fi.primes()) | set(first_primes(cfg.l)))
    primes = [p for p in primes if p <= cfg.sqrt_d]
    s = _lambda_divisor_sum(primes, cfg.log_sqrt_d, cfg.f_exponent)
    return s * s


def weight_restricted(n: int | FactoredInteger, cfg: SieveConfig) -> float:
    """The d | n variant: (sum of lambda_d over d | n, d <= sqrt(D))^2.

    A prime n beyond sqrt(D) keeps only d = 1 and carries weight exactly 1.
    """
    fi = n if isinstance(n, FactoredInteger) else factorize(n)
    primes = sorted(p for p in set(fi.primes()) if p <= cfg.sqrt_d)
    s = _lambda_divisor_sum(primes, cfg.log_sqrt_d, cfg.f_exponent)
    return s * s


@lru_cache(maxsize=None)
def _subset_log_sums(l: int) -> tuple[tuple[int, ...], ...]:
    # (bit count, prime indices) per squarefree divisor of Pi_l
    out = []
    for mask in range(1 << l):
        idx = tuple(i for i in range(l) if mask >> i & 1)
        out.append(idx)
    return tuple(out)


def divisor_moment(j: int, l: int = 10) -> float:
    """T_j = sum of mu(d) (log d)^j over d | Pi_l, in extended precision.

    The generating function prod_p (1 - e^(t log p)) has a zero of order
    l at t = 0, so T_j vanishes for j < l and T_l = l! * prod of log p.
    Double precision cannot expose the near-total cancellation at j = l-1;
    this runs at 60 digits and rounds once at the end.
    """
    if j < 0:
        raise ValueError(f"moment order must be nonnegative, got {j}")
    if not 1 <= l <= 15:
        raise ValueError(f"l must lie in [1, 15], got {l}")
    with mp.workdps(_MP_DPS):
        logs = [mp.log(p) for p in first_primes(l)]
        total = mp.mpf(0)
        for idx in _subset_log_sums(l):
            s = mp.fsum(logs[i] for i in idx)
            total += (-1) ** len(idx) * s**j
        return float(total)


def lambda_pi_sum(cfg: SieveConfig, method: str = "enumeration") -> tuple[float, float]:
    """(sum of lambda_d over d | Pi_l, leading term of its expansion).

    Two routes compute the same cutoff-restricted sum and must agree:
    "enumeration" walks the squarefree divisors of Pi_l directly, while
    "binomial" opens F(1 - log d / L)^... via the binomial theorem into
    cutoff-restricted moments sum_d mu(d) (log d)^j.  The leading term
    pairs the first unrestricted non-vanishing moment (j = l) with its
    binomial coefficient: l! * C(14, l) * prod(log p) / L^l.  At desk
    scales L = log sqrt(D) is far below the crossover, so the returned
    value and the leading term genuinely disagree; both are reported.
    """
    if method not in ("enumeration", "binomial"):
        raise ValueError(f"unknown method {method!r}")
    exponent = cfg.f_exponent
    with mp.workdps(_MP_DPS):
        L = mp.mpf((0.5 - cfg.epsilon) / 2.0) * mp.log(cfg.X)
        logs = [mp.log(p) for p in first_primes(cfg.l)]
        kept = []
        for idx in _subset_log_sums(cfg.l):
            s = mp.fsum(logs[i] for i in idx)
            if s <= L:
                kept.append((len(idx), s))
        if method == "enumeration":
            value = mp.fsum(
                (-1) ** bits * (1 - s / L) ** exponent for bits, s in kept
            )
        else:
            value = mp.mpf(0)
            for j in range(exponent + 1):
                moment = mp.fsum((-1) ** bits * s**j for bits, s in kept)
                value += mp.binomial(exponent, j) * (-1) ** j * moment / L**j
        leading = (
            mp.factorial(cfg.l)
            * mp.binomial(exponent, cfg.l)
            * mp.fprod(logs)
            / L**cfg.l
        )
        return float(value), float(leading)
