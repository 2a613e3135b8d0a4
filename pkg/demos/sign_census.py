"""
Sign census over a window of target moduli
==========================================

Every squarefree q in (X, 2X] with at most two prime factors gets its
normalized sum Kl(1; q) classified as positive or negative.  Both signs
keep showing up at every scale we can reach on a desk, and the closest
approach to zero stays comfortably nonzero.
"""

from klsign.rsums import census

X = 1000
pos, neg, records = census(X)
print(f"window ({X}, {2*X}]: {len(records)} moduli, {pos} positive, {neg} negative")

# the first few classified rows
print("\n  q      omega  factors      Kl(1;q)")
for r in records[:8]:
    factors = f"{r.p1}" if r.p2 is None else f"{r.p1}*{r.p2}"
    print(f"  {r.q:<6} {r.omega:<6} {factors:<12} {r.kl:+.6f}  {r.sign}")

# the modulus that comes nearest to a sign ambiguity
closest = min(records, key=lambda r: abs(r.kl))
print(f"\nsmallest |Kl|: q={closest.q}, Kl={closest.kl:+.3e} ({closest.sign})")
print("flagged for extended-precision recheck:", sum(r.flagged for r in records))

# sign balance by factor count
for omega in (1, 2):
    sub = [r for r in records if r.omega == omega]
    p = sum(1 for r in sub if r.sign == "positive")
    print(f"omega={omega}: {p}/{len(sub)} positive")
