"""Window sums over squarefree moduli, and the sign census.

All sums run over n in (X, 2X] against the smooth bump g(n/X).  The
detector combination is

    R+- = sum g(n/X) mu^2(n) (|Kl| +- Kl)(rho - 2^omega(n)) W(n),

evaluated from this definition directly, never reassembled from the
component sums R1 (absolute), R2 (signed), R3 (2^omega-weighted): the
termwise inequality

    (|t| +- t)(rho - 2^omega) >= rho|t| +- rho t - 2 * 2^omega |t|

then makes the decomposition bound a genuine cross-check between two
independently computed sides.  The census classifies the sign of
Kl(1; q) for every squarefree q in the window with at most two prime
factors; a vanishing value would break the dichotomy and is flagged,
never silently classified.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath as mp
from scipy.integrate import quad

from .arith import FactoredInteger, enumerate_targets, factorize, squarefree_window
from .kloosterman import s_fast
from .sieve import SieveConfig, weight_W, weight_restricted

# Near-zero normalized values get recomputed in extended precision and
# flagged; an exact zero would abort the census.
_ZERO_FLAG = 1e-10


def g_eval(x: float) -> float:
    """The bump exp(-1/((x-1)(2-x))) on (1, 2), zero elsewhere."""
    if x <= 1.0 or x >= 2.0:
        return 0.0
    return math.exp(-1.0 / ((x - 1.0) * (2.0 - x)))


@lru_cache(maxsize=1)
def gtilde1() -> float:
    """The mass of g, by adaptive quadrature to 1e-10 absolute."""
    value, err = quad(g_eval, 1.0, 2.0, epsabs=1e-12, epsrel=1e-12)
    if err > 1e-10:
        raise ArithmeticError(f"quadrature error {err} above tolerance")
    return value


@dataclass(frozen=True)
class SmoothWeight:
    """The fixed bump g and its mass."""

    support: tuple[float, float] = (1.0, 2.0)
    gtilde1: float = field(default_factory=gtilde1)


@dataclass(frozen=True)
class RSumsResult:
    X: float
    rho: float
    R1: float
    R2: float
    R3: float
    Rplus: float
    Rminus: float
    n_terms: int


@dataclass(frozen=True)
class CensusRecord:
    """One classified modulus; p2 is None for primes."""

    q: int
    omega: int
    p1: int
    p2: int | None
    kl: float
    sign: str  # "positive" or "negative"
    flagged: bool = False


def _threads(threads: int | None) -> int:
    return threads if threads else (os.cpu_count() or 1)


def _ordered_map(fn, items: list, threads: int | None) -> list:
    """Map fn over items, results in item order regardless of worker count.

    Work is sharded by index residue (a fixed 64-way plan); the output
    list is indexed, so the reduction that follows never observes
    scheduling order.
    """
    k = _threads(threads)
    out = [None] * len(items)
    if k <= 1 or len(items) < 128:
        for i, it in enumerate(items):
            out[i] = fn(it)
        return out
    shards = 64

    def run(shard: int) -> None:
        for i in range(shard, len(items), shards):
            out[i] = fn(items[i])

    with ThreadPoolExecutor(max_workers=k) as pool:
        list(pool.map(run, range(shards)))
    return out


def _kl_value(fi: FactoredInteger) -> float:
    return s_fast(1, 1, fi).value / math.sqrt(fi.n)


def _kl_value_mp(q: int, dps: int = 40) -> float:
    # Direct definition at high precision, for near-zero adjudication.
    with mp.workdps(dps):
        total = mp.mpf(0)
        for a in range(1, q):
            if math.gcd(a, q) != 1:
                continue
            r = (a + pow(a, -1, q)) % q
            total += mp.cos(2 * mp.pi * r / q)
        return float(total / mp.sqrt(q))


def compute_rsums(
    X: float,
    rho: float,
    cfg: SieveConfig | None = None,
    threads: int | None = None,
) -> RSumsResult:
    """All five window sums at scale X and detector parameter rho.

    Every term shares g(n/X) and W(n); the five combinations differ only
    in the Kloosterman factor.  Per-sum reductions use fsum, so results
    are independent of how the term computations were scheduled.
    """
    if not 10 <= X <= 1e7:
        raise ValueError(f"X must lie in [10, 1e7], got {X}")
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if cfg is None:
        cfg = SieveConfig(X=float(X))
    window = squarefree_window(int(X))

    def term(fi: FactoredInteger):
        gx = g_eval(fi.n / X)
        if gx == 0.0:
            return None
        kl = _kl_value(fi)
        w = weight_W(fi, cfg)
        two_om = 2.0**fi.omega
        base = gx * w
        return (
            base * abs(kl),
            base * kl,
            base * abs(kl) * two_om,
            base * (abs(kl) + kl) * (rho - two_om),
            base * (abs(kl) - kl) * (rho - two_om),
        )

    rows = [t for t in _ordered_map(term, window, threads) if t is not None]
    sums = [math.fsum(r[j] for r in rows) for j in range(5)]
    return RSumsResult(
        X=float(X),
        rho=float(rho),
        R1=sums[0],
        R2=sums[1],
        R3=sums[2],
        Rplus=sums[3],
        Rminus=sums[4],
        n_terms=len(rows),
    )


def h_sum(X: float, cfg: SieveConfig | None = None, threads: int | None = None) -> float:
    """The d | n window sum: g-weighted |Kl| against weight_restricted.

    The truncated divisor sum here sees only divisors of n itself, so a
    prime n above sqrt(D) enters with weight exactly 1.
    """
    if not 10 <= X <= 1e7:
        raise ValueError(f"X must lie in [10, 1e7], got {X}")
    if cfg is None:
        cfg = SieveConfig(X=float(X))
    window = squarefree_window(int(X))

    def term(fi: FactoredInteger) -> float:
        gx = g_eval(fi.n / X)
        if gx == 0.0:
            return 0.0
        return gx * abs(_kl_value(fi)) * weight_restricted(fi, cfg)

    return math.fsum(_ordered_map(term, window, threads))


def bv_probe(X: float, Q: float, cfg: SieveConfig | None = None) -> float:
    """Sum over q <= Q of 3^omega(q) |sum over window n = 0 (mod q)|.

    The inner sum weighs squarefree n by g(n/X) Kl(1; n); the outer sum
    is reported as-is for trend inspection, with no pass/fail threshold.
    Moduli with square factors contribute empty inner sums.
    """
    if X > 1e6:
        raise ValueError(f"X must be at most 1e6, got {X}")
    if Q > math.sqrt(X):
        raise ValueError(f"Q must be at most sqrt(X), got Q={Q}, X={X}")
    window = squarefree_window(int(X))
    contrib = [(fi.n, g_eval(fi.n / X) * _kl_value(fi)) for fi in window]
    total = 0.0
    for q in range(1, int(Q) + 1):
        inner = math.fsum(c for n, c in contrib if n % q == 0)
        total += 3 ** factorize(q).omega * abs(inner)
    return total


def census(
    X: float,
    threads: int | None = None,
) -> tuple[int, int, list[CensusRecord]]:
    """Sign of Kl(1; q) for every target modulus in (X, 2X].

    Returns (pos_count, neg_count, records) with records ascending in q.
    |kl| below 1e-10 triggers an extended-precision recomputation and a
    flag; a value that stays at zero aborts, because sign classification
    would be meaningless.
    """
    if not 2 <= X <= 1e7:
        raise ValueError(f"X must lie in [2, 1e7], got {X}")
    targets = enumerate_targets(int(X))

    def record(fi: FactoredInteger) -> CensusRecord:
        kl = _kl_value(fi)
        flagged = abs(kl) < _ZERO_FLAG
        if flagged:
            kl = _kl_value_mp(fi.n)
            if kl == 0.0:
                raise ArithmeticError(f"Kl(1;{fi.n}) vanishes; sign undefined")
        ps = fi.primes()
        return CensusRecord(
            q=fi.n,
            omega=fi.omega,
            p1=ps[0],
            p2=ps[1] if fi.omega == 2 else None,
            kl=kl,
            sign="positive" if kl > 0 else "negative",
            flagged=flagged,
        )

    records = _ordered_map(record, targets, threads)
    pos = sum(1 for r in records if r.sign == "positive")
    return pos, len(records) - pos, records
