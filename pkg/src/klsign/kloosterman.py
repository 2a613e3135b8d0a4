"""Kloosterman sums: direct, multiplicative, and batched evaluation.

S(m, n; q) = sum over units a mod q of e_q(m a + n a^{-1}), where
e_q(x) = exp(2 pi i x / q).  The pairing a <-> -a conjugates terms, so
every sum is real; the evaluators accumulate cosines and only ever touch
the sine part to assert that it cancels.

Two independent routes are provided.  s_direct is the oracle: a plain
loop over units with exactly rounded (fsum) accumulation.  s_fast
factors the modulus and, for squarefree q, multiplies prime-level sums
twisted by complementary-cofactor inverses:

    S(m, n; q1 q2) = S(m q2', n q2'; q1) * S(m q1', n q1'; q2)

for coprime q1, q2 with q1 q1' = 1 (mod q2) and q2 q2' = 1 (mod q1).
The identity is never trusted blind: the test suite requires the two
routes to agree on every squarefree modulus below 2000.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .arith import FactoredInteger, factorize, inv_mod, is_prime

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class KloostermanEval:
    """One evaluated sum: the route taken and the standard-bound verdict."""

    m: int
    n: int
    q: int
    value: float
    method: str  # "direct" or "multiplicative"
    bound_ok: bool


@dataclass(frozen=True)
class Angle:
    """Angle at a prime modulus: 2 cos(theta) = S(a, 1; p) / sqrt(p)."""

    p: int
    a: int
    theta: float


def s_direct(m: int, n: int, q: int) -> float:
    """S(m, n; q) by the definition, one term per unit.

    The sine parts are accumulated alongside and must cancel to within
    1e-9 * sqrt(q); a violation means the evaluator is broken, so it is
    asserted rather than reported.
    """
    if q < 2:
        raise ValueError(f"modulus must be at least 2, got {q}")
    cos_parts = []
    sin_parts = []
    for a in range(1, q):
        if math.gcd(a, q) != 1:
            continue
        a_inv = pow(a, -1, q)
        t = _TWO_PI * ((m * a + n * a_inv) % q) / q
        cos_parts.append(math.cos(t))
        sin_parts.append(math.sin(t))
    imag = math.fsum(sin_parts)
    assert abs(imag) < 1e-9 * math.sqrt(q), f"S({m},{n};{q}) not real: imag={imag}"
    return math.fsum(cos_parts)


@lru_cache(maxsize=1 << 18)
def _prime_kernel_cached(c: int, p: int) -> float:
    return float(_kernels.prime_kernel(c, p))


def s_prime(m: int, n: int, p: int) -> float:
    """S(m, n; p) at a prime, through the standard reductions.

    S(0, 0; p) = p - 1; a single vanishing argument gives the Ramanujan
    sum -1; otherwise the substitution a -> m^{-1} a reduces to
    S(1, mn; p), evaluated by the shared kernel.
    """
    m %= p
    n %= p
    if m == 0 and n == 0:
        return float(p - 1)
    if m == 0 or n == 0:
        return -1.0
    return _prime_kernel_cached(m * n % p, p)


def _s_multiplicative(m: int, n: int, primes: tuple[int, ...]) -> float:
    q = math.prod(primes)
    total = 1.0
    for p in primes:
        r = q // p
        r_inv = inv_mod(r % p, p)
        total *= s_prime(m * r_inv % p, n * r_inv % p, p)
    return total


def _bound_ok(m: int, n: int, fi: FactoredInteger, value: float) -> bool:
    # |S| <= sqrt(q) sqrt(gcd(m,n,q)) tau(q); for squarefree q the divisor
    # count is exactly 2^omega, so this is also the sharper squarefree form.
    g = math.gcd(math.gcd(abs(m), abs(n)), fi.n)
    bound = math.sqrt(fi.n) * math.sqrt(g) * fi.tau
    return abs(value) <= bound * (1.0 + 1e-12) + 1e-9


def s_fast(m: int, n: int, q: int | FactoredInteger) -> KloostermanEval:
    """S(m, n; q) by the fastest valid route, with bound verdict attached.

    Squarefree composite moduli go through the twisted multiplicative
    split at cost O(sum of prime factors); everything else falls back to
    the direct loop.
    """
    fi = q if isinstance(q, FactoredInteger) else factorize(q)
    if fi.n < 2:
        raise ValueError(f"modulus must be at least 2, got {fi.n}")
    if fi.is_squarefree():
        method = "multiplicative" if fi.omega >= 2 else "direct"
        if fi.omega >= 2:
            value = _s_multiplicative(m, n, fi.primes())
        else:
            value = s_prime(m, n, fi.n)
    else:
        method = "direct"
        value = s_direct(m, n, fi.n)
    return KloostermanEval(m, n, fi.n, value, method, _bound_ok(m, n, fi, value))


def kl_norm(a: int, q: int | FactoredInteger) -> float:
    """Kl(a; q) = S(a, 1; q) / sqrt(q)."""
    ev = s_fast(a, 1, q)
    return ev.value / math.sqrt(ev.q)


def angle(a: int, p: int) -> Angle:
    """The angle theta in [0, pi] with 2 cos(theta) = S(a, 1; p)/sqrt(p).

    Only defined at primes with gcd(a, p) = 1.  A normalized value
    outside [-2, 2] beyond float tolerance would falsify the square-root
    bound and is an error, not a clamp.
    """
    if not is_prime(p):
        raise ValueError(f"angle requires a prime modulus, got {p}")
    if a % p == 0:
        raise ValueError(f"angle requires gcd(a, p) = 1, got a={a}, p={p}")
    kl = s_prime(a, 1, p) / math.sqrt(p)
    x = kl / 2.0
    if abs(x) > 1.0 + 1e-9:
        raise ArithmeticError(f"|Kl({a};{p})| = {abs(kl)} exceeds 2")
    return Angle(p, a, math.acos(min(1.0, max(-1.0, x))))


def bound_check(m: int, n: int, q: int | FactoredInteger) -> bool:
    """Whether |S(m, n; q)| respects sqrt(q) gcd(m,n,q)^{1/2} tau(q)."""
    return s_fast(m, n, q).bound_ok


def s_row(p: int) -> np.ndarray:
    """S(a, 1; p) for all a in [0, p), one FFT of length p.

    With h[x] = e_p(x^{-1}) on units and h[0] = 0, the DFT gives
    fft(h)[p - a] = sum_x h[x] e_p(a x) = S(a, 1; p).  Row entry a = 0
    is the Ramanujan sum -1.  Cross-checked against s_direct in tests.
    """
    if not is_prime(p):
        raise ValueError(f"s_row requires a prime modulus, got {p}")
    inv = np.asarray(_kernels.inverse_table(p))
    h = np.exp(2j * np.pi / p * inv)
    h[0] = 0.0
    spectrum = np.fft.fft(h)
    row = spectrum[(-np.arange(p)) % p]
    assert np.max(np.abs(row.imag)) < 1e-6 * math.sqrt(p)
    return row.real
