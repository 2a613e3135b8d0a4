"""Empirical angle statistics against the semicircle (Sato-Tate) law.

Vertical samples fix the modulus and sweep the residue; horizontal
samples fix the residue and sweep primes.  Both are compared to the
semicircle CDF through a two-sided Kolmogorov-Smirnov discrepancy; the
horizontal case is an open-conjecture probe, so it is reported, never
gated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import is_prime, primes_up_to
from .kloosterman import angle, s_row
from .rsums import _ordered_map

__all__ = [
    "AngleSample",
    "discrepancy",
    "horizontal_sample",
    "st_cdf",
    "summary",
    "vertical_sample",
]


@dataclass(frozen=True)
class AngleSample:
    """Angles in [0, pi] plus a record of how they were drawn."""

    angles: tuple
    provenance: str

    def __post_init__(self):
        for t in self.angles:
            if not 0.0 <= t <= math.pi:
                raise ValueError(f"angle {t} outside [0, pi]")

    def __len__(self) -> int:
        return len(self.angles)


def st_cdf(theta: float) -> float:
    """CDF of (2/pi) sin^2(t) dt on [0, pi]."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    return theta / math.pi - math.sin(2.0 * theta) / (2.0 * math.pi)


def vertical_sample(p: int) -> AngleSample:
    """All p-1 angles arccos(S(a,1;p) / (2 sqrt p)) at a fixed prime.

    The whole row comes out of one length-p FFT, so the modulus can go
    up to 10^6 while staying interactive.
    """
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    if p > 10**6:
        raise ValueError(f"modulus above 10^6 not supported, got {p}")
    row = s_row(p)
    scaled = row[1:] / (2.0 * math.sqrt(p))
    top = float(np.max(np.abs(scaled)))
    if top > 1.0 + 1e-9:
        raise ArithmeticError(f"normalized value {top} breaks the square-root bound")
    np.clip(scaled, -1.0, 1.0, out=scaled)
    angles = tuple(np.arccos(scaled).tolist())
    return AngleSample(angles=angles, provenance=f"vertical(p={p})")


def horizontal_sample(x_max: float, a: int = 1, threads: int | None = None) -> AngleSample:
    """Angles theta_p(a) over all primes p <= x_max with p not dividing a.

    p = 2 participates like any other prime (S(1,1;2) = 1 sits inside
    the square-root bound).  Each angle costs one O(p) evaluation, hence
    the modest ceiling on x_max.
    """
    if x_max > 10**5:
        raise ValueError(f"x_max above 10^5 not supported, got {x_max}")
    if x_max < 2:
        return AngleSample(angles=(), provenance=f"horizontal(x_max={x_max}, a={a})")
    primes = [p for p in primes_up_to(int(x_max)) if a % p != 0]
    angles = _ordered_map(lambda p: angle(a % p, p).theta, primes, threads)
    return AngleSample(
        angles=tuple(angles), provenance=f"horizontal(x_max={x_max}, a={a})"
    )


def discrepancy(sample: AngleSample) -> float:
    """Two-sided sup gap between the empirical CDF and st_cdf."""
    n = len(sample)
    if n == 0:
        raise ValueError("empty sample has no discrepancy")
    xs = np.sort(np.asarray(sample.angles))
    cdf = xs / math.pi - np.sin(2.0 * xs) / (2.0 * math.pi)
    steps_hi = np.arange(1, n + 1) / n
    steps_lo = np.arange(0, n) / n
    return float(np.max(np.maximum(steps_hi - cdf, cdf - steps_lo)))


def summary(sample: AngleSample) -> dict:
    """The reported statistics: size, discrepancy, first two cosine moments.

    Under the semicircle law cos has mean 0 and cos^2 has mean 1/4, so
    the moments make stray mass visible even when the KS statistic is
    small.
    """
    cosines = np.cos(np.asarray(sample.angles))
    return {
        "count": len(sample),
        "discrepancy": discrepancy(sample),
        "mean_cos": float(np.mean(cosines)),
        "mean_cos2": float(np.mean(cosines**2)),
    }
