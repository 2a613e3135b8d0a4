"""
Evaluating Kloosterman sums and checking the square-root bound
==============================================================

The direct definition costs one exponential per unit; the twisted
multiplicative split re-expresses a squarefree composite modulus
through its prime parts and brings the cost down to the sum of the
parts.  Both routes land on the same real number.
"""

import math

from klsign.kloosterman import bound_check, kl_norm, s_direct, s_fast

# a prime modulus, straight from the definition
print("S(1,1;101) =", s_direct(1, 1, 101))

# the same sum through the fast dispatcher: primes fall back to the
# direct loop, so the method tag says so
r = s_fast(1, 1, 101)
print("fast route:", r.value, f"({r.method}, bound_ok={r.bound_ok})")

# a product of two primes takes the multiplicative route
r = s_fast(1, 1, 15)
print("S(1,1;15) =", r.value, f"({r.method})")
print("  against direct:", s_direct(1, 1, 15))

# the golden ratio hides in this one: S(1,1;15) = -(1+sqrt(5))/2 - 1
print("  closed form   :", -(1 + math.sqrt(5)) / 2 - 1)

# normalized values stay inside 2^omega for squarefree moduli
for q in (101, 15, 1001):
    print(f"Kl(1;{q}) = {kl_norm(1, q):+.6f}   bound ok: {bound_check(1, 1, q)}")

# moduli with square factors are legal inputs; they just go direct
r = s_fast(1, 1, 12)
print("S(1,1;12) =", r.value, f"({r.method})")
