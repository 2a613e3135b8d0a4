"""
Weighted window sums and the sign-detector inequality
=====================================================

The five window sums share the smooth bump g(n/X) and the squared sieve
weight W(n); they differ only in which combination of |Kl| and Kl each
term carries.  The detector R+- is computed from its own definition and
must dominate the recombination rho(R1 +- R2) - 2 R3 term by term,
whatever rho in (4, 8] is chosen.
"""

from klsign.rsums import compute_rsums, h_sum

for X in (100, 1000, 10000):
    r = compute_rsums(X, rho=5.0)
    print(f"X = {X}: {r.n_terms} terms")
    print(f"  R1 = {r.R1:.6f}   R2 = {r.R2:+.6f}   R3 = {r.R3:.6f}")
    print(f"  R+ = {r.Rplus:.6f}   R- = {r.Rminus:.6f}")
    lower_p = r.rho * (r.R1 + r.R2) - 2.0 * r.R3
    lower_m = r.rho * (r.R1 - r.R2) - 2.0 * r.R3
    print(f"  slack over the recombination: +{r.Rplus - lower_p:.4f} / +{r.Rminus - lower_m:.4f}")

# the slack is exactly rho-independent: d/drho of both sides is R1 +- R2
a = compute_rsums(1000, rho=4.5)
b = compute_rsums(1000, rho=6.0)
slack = lambda r: r.Rplus - (r.rho * (r.R1 + r.R2) - 2.0 * r.R3)
print(f"\nslack at rho=4.5: {slack(a):.10f}")
print(f"slack at rho=6.0: {slack(b):.10f}")

# the divisor-restricted companion sum: primes above sqrt(D) enter with
# weight exactly 1, so it tracks R1 closely
print(f"\nh_sum(1000) = {h_sum(1000):.6f} vs R1 = {compute_rsums(1000, 5.0).R1:.6f}")
