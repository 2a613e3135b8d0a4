"""
Sieve weights: from the cutoff profile to the squared divisor sum
=================================================================

The weight W(n) squares a truncated divisor sum of lambda_d over
divisors of n times the first ten primes.  Expanding the square gives
the xi coefficients, bounded by 3^omega; summing lambda over the full
prime-product divisor lattice exposes a near-total cancellation that
two independent routes must agree on.
"""

import math

from klsign.arith import factorize
from klsign.sieve import (
    SieveConfig,
    divisor_moment,
    first_primes,
    lambda_d,
    lambda_pi_sum,
    weight_W,
    xi_d,
)

cfg = SieveConfig(X=10**4)
print(f"level sqrt(D) = {cfg.sqrt_d:.2f}, cutoff exponent {cfg.f_exponent}")

# the first few lambda values: Moebius sign times the shrinking profile
for d in (1, 2, 3, 6, 30):
    print(f"  lambda_{d:<3} = {lambda_d(d, cfg):+.6f}")

# xi stays inside its 3^omega envelope
for d in (2, 6, 30):
    omega = factorize(d).omega
    print(f"  xi_{d:<4} = {xi_d(d, cfg):+.6f}   (|.| <= {3**omega})")

# weights on a few window members
for n in (10007, 10011, 2, 1):
    print(f"  W({n}) = {weight_W(n, cfg):.6f}")

# the cancellation: sum of mu(d) (log d)^j over d | Pi_10 dies for j < 10
print("\nmoments T_j over the 10-prime divisor lattice:")
for j in (0, 5, 9, 10):
    print(f"  T_{j:<2} = {divisor_moment(j):+.3e}")
t10 = math.factorial(10) * math.prod(math.log(p) for p in first_primes(10))
print(f"  predicted T_10 = 10! prod log p = {t10:+.3e}")

# two routes to the cutoff-restricted lambda sum
for sqrt_d in (1e3, 1e6):
    c = SieveConfig.from_sqrt_d(sqrt_d)
    enum, leading = lambda_pi_sum(c, method="enumeration")
    binom, _ = lambda_pi_sum(c, method="binomial")
    print(
        f"\nsqrt(D) = {sqrt_d:.0e}: enumeration {enum:.6e}, "
        f"binomial {binom:.6e}, leading term {leading:.6e}"
    )
