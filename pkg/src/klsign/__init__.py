"""Desk-scale laboratory for sign changes of Kloosterman sums.

The package evaluates S(m, n; q) exactly enough to classify signs of
Kl(1; q) = S(1, 1; q)/sqrt(q) over squarefree moduli with at most two
prime factors, builds the Selberg-style sieve weights used to detect
those moduli, and reproduces the constants, Euler products, and residue
calculations that drive the sign-change counting argument.
"""

__version__ = "0.1.0"

from .arith import FactoredInteger, factorize, inv_mod, primes_up_to
from .kloosterman import KloostermanEval, angle, bound_check, kl_norm, s_direct, s_fast

__all__ = [
    "FactoredInteger",
    "KloostermanEval",
    "angle",
    "bound_check",
    "factorize",
    "inv_mod",
    "kl_norm",
    "primes_up_to",
    "s_direct",
    "s_fast",
    "__version__",
]
