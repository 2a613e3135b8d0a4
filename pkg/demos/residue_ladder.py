"""
Double-residue ladder: exact extraction against the predicted main term
=======================================================================

The bench expands every factor of the two-variable integrand as a
Laurent series over the rationals and reads off the 1/(s1 s2)
coefficient exactly.  The main-term prediction should be off by
exactly the designed correction, here 3/(log M)^2, and the fitted
log-power should land on v - v1 - v2 - m.
"""

import dataclasses
from fractions import Fraction

from klsign.residues import ResidueProblem, residue_main_term, residue_numeric, scaling_probe

# cubic cutoffs, diagonal zero of order two, an extra pair interaction
prob = ResidueProblem(
    p_coeffs=(0, 0, 0, 1),
    q_coeffs=(0, 0, 0, 1),
    z_terms={(1, 1): Fraction(1), (2, 2): Fraction(1)},
    log_M=Fraction(20),
)

print("log M   numeric          main term        ratio        1 + 3/L^2")
for L in (20, 40, 80):
    p = dataclasses.replace(prob, log_M=Fraction(L))
    numeric = residue_numeric(p)
    main = residue_main_term(p)
    ratio = numeric / main
    print(
        f"{L:<7} {float(numeric):<16.6e} {float(main):<16.6e} "
        f"{float(ratio):<12.8f} {float(1 + Fraction(3, L * L)):.8f}"
    )

# the ratio is exactly 1 + 3/L^2 -- rational arithmetic, no fit needed
p = dataclasses.replace(prob, log_M=Fraction(40))
assert residue_numeric(p) / residue_main_term(p) == 1 + Fraction(3, 1600)

# the residue loses (log M)^-3 overall: v - v1 - v2 - m = 1 - 1 - 1 - 2
slope = scaling_probe(prob, [20, 40, 80])
print(f"\nfitted log-power: {slope:.4f} (designed: -3)")

# raising v by one adds back one power of log M
slope = scaling_probe(dataclasses.replace(prob, v=2), [20, 40, 80])
print(f"with v = 2:       {slope:.4f} (designed: -2)")
