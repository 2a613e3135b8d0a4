"""Integer arithmetic: sieves, factorization, and the target moduli.

Everything downstream consumes integers through :class:`FactoredInteger`,
so the factorization routines here are the single source of truth for
multiplicative structure (omega, mu, tau, radical).  The enumeration
routines walk the window (X, 2X] that all the averaged sums run over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Trial division handles everything below this; beyond it we fall back to
# Miller-Rabin plus Pollard rho.  Desk scale keeps inputs well under 1e12.
_TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin witness set for n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def primes_up_to(limit: int) -> list[int]:
    """All primes p <= limit, ascending, by Eratosthenes on a numpy mask."""
    if limit < 2:
        return []
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).tolist()


def inv_mod(a: int, q: int) -> int:
    """The inverse of a modulo q, in [1, q).

    Raises ValueError when gcd(a, q) > 1; a missing inverse is an error,
    never a sentinel value.
    """
    if q < 2:
        raise ValueError(f"modulus must be at least 2, got {q}")
    a %= q
    if math.gcd(a, q) != 1:
        raise ValueError(f"{a} is not invertible modulo {q}")
    return pow(a, -1, q)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for all n below 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to split {n}")


@dataclass(frozen=True)
class FactoredInteger:
    """An integer together with its prime factorization.

    factors is sorted by prime and empty exactly for n = 1.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.factors)

    @property
    def mu(self) -> int:
        """Moebius function: 0 unless squarefree, else (-1)^omega."""
        if any(e > 1 for _, e in self.factors):
            return 0
        return -1 if self.omega % 2 else 1

    @property
    def tau(self) -> int:
        """Divisor count, prod (e_i + 1)."""
        t = 1
        for _, e in self.factors:
            t *= e + 1
        return t

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def radical(self) -> int:
        r = 1
        for p, _ in self.factors:
            r *= p
        return r

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def divisors(self) -> list[int]:
        """All positive divisors, ascending."""
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def factorize(n: int) -> FactoredInteger:
    """Full factorization of n >= 1.

    Trial division up to min(sqrt(n), 1e6), then Miller-Rabin and Pollard
    rho on whatever survives.  factorize(1) has empty factors, mu = 1,
    omega = 0.
    """
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    m = n
    factors: list[tuple[int, int]] = []
    for p in (2, 3, 5):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    # 2,3,5-wheel
    p = 7
    increments = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= m and p <= _TRIAL_LIMIT:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += increments[i]
        i = (i + 1) % 8
    if m > 1:
        factors.extend(_factor_hard(m))
    factors.sort()
    return FactoredInteger(n, tuple(factors))


def _factor_hard(m: int) -> list[tuple[int, int]]:
    """Factor m whose prime factors all exceed the trial division bound."""
    if is_prime(m):
        return [(m, 1)]
    stack = [m]
    primes: dict[int, int] = {}
    while stack:
        v = stack.pop()
        if is_prime(v):
            primes[v] = primes.get(v, 0) + 1
            continue
        d = _pollard_rho(v)
        stack.append(d)
        stack.append(v // d)
    return sorted(primes.items())


def _window_sieve(X: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Sieve arrays for the window (X, 2X].

    Returns (count, squarefree, residual, first) indexed by q - (X+1):
    count   distinct primes <= sqrt(2X) dividing q,
    squarefree  False when some p^2 | q,
    residual    q divided by each distinct small prime once (for squarefree
                q this is the single large prime factor, or 1),
    first   smallest prime factor <= sqrt(2X), 0 if none.
    """
    lo, hi = X + 1, 2 * X
    size = hi - lo + 1
    count = np.zeros(size, dtype=np.uint8)
    squarefree = np.ones(size, dtype=bool)
    residual = np.arange(lo, hi + 1, dtype=np.int64)
    first = np.zeros(size, dtype=np.int64)
    for p in primes_up_to(math.isqrt(hi)):
        start = (-lo) % p
        count[start::p] += 1
        residual[start::p] //= p
        view = first[start::p]
        view[view == 0] = p
        p2 = p * p
        if p2 <= hi:
            squarefree[(-lo) % p2 :: p2] = False
    return count, squarefree, residual, first


def enumerate_targets(X: int) -> list[FactoredInteger]:
    """All squarefree q in (X, 2X] with omega(q) in {1, 2}, ascending.

    Every q in the window exceeds sqrt(2X), so q has at most one prime
    factor above the sieve bound and the window sieve determines omega
    and the factorization exactly.
    """
    if X < 2:
        raise ValueError(f"enumerate_targets expects X >= 2, got {X}")
    lo = X + 1
    count, squarefree, residual, first = _window_sieve(X)
    omega = count.astype(np.int64) + (residual > 1)
    keep = np.flatnonzero(squarefree & (omega >= 1) & (omega <= 2))
    out: list[FactoredInteger] = []
    for i in keep.tolist():
        q = lo + i
        c = int(count[i])
        r = int(residual[i])
        if c == 0:
            fac = ((q, 1),)
        elif c == 1 and r > 1:
            fac = ((int(first[i]), 1), (r, 1))
        elif c == 2:
            p1 = int(first[i])
            fac = ((p1, 1), (q // p1, 1))
        else:
            # c == 1, r == 1 would mean q prime and q <= sqrt(2X): impossible
            # for q > X >= 2.
            raise AssertionError(f"window sieve inconsistency at q={q}")
        out.append(FactoredInteger(q, fac))
    return out


def enumerate_P2(X: int, eta: float = 0.0) -> list[tuple[int, int]]:
    """Prime pairs p1 < p2 with p1*p2 in (X, 2X] and p1 not too small.

    Membership requires p1 > X^eta and p1 > p2^(3/4) * X^eta: the smaller
    prime cannot be tiny relative to the larger one.  Pairs are returned
    in increasing order of the product.  With eta = 0 the constraint is
    p1 > p2^(3/4); e.g. (5, 7) qualifies but (3, 13) does not.
    """
    if X < 4:
        raise ValueError(f"enumerate_P2 expects X >= 4, got {X}")
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    cutoff = float(X) ** eta
    out = []
    for fi in enumerate_targets(X):
        if fi.omega != 2:
            continue
        p1, p2 = fi.primes()
        if p1 > cutoff and p1 > p2**0.75 * cutoff:
            out.append((p1, p2))
    return out


def squarefree_window(X: int) -> list[FactoredInteger]:
    """All squarefree n in (X, 2X] with full factorizations, ascending.

    Small factors are harvested from the window sieve; the residual after
    dividing them out is either 1 or a single prime > sqrt(2X).
    """
    if X < 1:
        raise ValueError(f"squarefree_window expects X >= 1, got {X}")
    lo, hi = X + 1, 2 * X
    size = hi - lo + 1
    squarefree = np.ones(size, dtype=bool)
    residual = np.arange(lo, hi + 1, dtype=np.int64)
    small: list[list[int]] = [[] for _ in range(size)]
    for p in primes_up_to(math.isqrt(hi)):
        p2 = p * p
        if p2 <= hi:
            squarefree[(-lo) % p2 :: p2] = False
        residual[(-lo) % p :: p] //= p
        for i in range((-lo) % p, size, p):
            small[i].append(p)
    out = []
    for i in np.flatnonzero(squarefree).tolist():
        r = int(residual[i])
        fac = [(p, 1) for p in small[i]]
        if r > 1:
            fac.append((r, 1))
        out.append(FactoredInteger(lo + i, tuple(fac)))
    return out
