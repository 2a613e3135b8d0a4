"""Tight loops for prime-modulus Kloosterman evaluation.

Kept separate so the numba dependency stays swappable: without a JIT the
same code objects run as plain Python over numpy arrays.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba present in normal installs
    njit = None


def _inverse_table_impl(p: int) -> np.ndarray:
    # inv[a] = a^{-1} mod p for prime p, via inv[a] = -(p//a) * inv[p%a].
    inv = np.zeros(p, dtype=np.int64)
    if p > 1:
        inv[1] = 1
    for a in range(2, p):
        inv[a] = (p - p // a) * inv[p % a] % p
    return inv


def _make_prime_kernel(inverse_table):
    def prime_kernel(c: int, p: int) -> float:
        # sum over units a of cos(2*pi*((a + c*a^{-1}) mod p)/p); the
        # reduction mod p keeps the cosine argument small, so a shared
        # table of cos(2*pi*k/p) suffices.
        inv = inverse_table(p)
        table = np.cos(np.arange(p) * (2.0 * np.pi / p))
        total = 0.0
        for a in range(1, p):
            total += table[(a + c * inv[a]) % p]
        return total

    return prime_kernel


if njit is not None:
    inverse_table = njit(cache=True, nogil=True)(_inverse_table_impl)
    prime_kernel = njit(cache=True, nogil=True)(_make_prime_kernel(inverse_table))
else:  # pragma: no cover
    inverse_table = _inverse_table_impl
    prime_kernel = _make_prime_kernel(_inverse_table_impl)
