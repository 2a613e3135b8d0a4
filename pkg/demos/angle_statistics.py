"""
Kloosterman angles against the semicircle law
=============================================

Vertical samples (fixed prime, residue sweeping) are known to follow
the semicircle distribution as the prime grows; horizontal samples
(fixed residue, primes sweeping) are only conjectured to.  Both are
summarized by a two-sided KS discrepancy and the first two cosine
moments, which target 0 and 1/4.
"""

from klsign.satotate import discrepancy, horizontal_sample, summary, vertical_sample

print("vertical samples: one prime, all residues")
for p in (101, 1009, 10007):
    s = summary(vertical_sample(p))
    print(
        f"  p = {p:<6} n = {s['count']:<6} D = {s['discrepancy']:.5f}  "
        f"mean cos = {s['mean_cos']:+.5f}  mean cos^2 = {s['mean_cos2']:.5f}"
    )
print("  (D shrinks as the prime grows; the moments sit on 0 and 1/4)")

print("\nhorizontal samples: fixed residue, primes up to x")
for x in (1000, 10000):
    s = summary(horizontal_sample(x, a=1))
    print(
        f"  x = {x:<6} n = {s['count']:<5} D = {s['discrepancy']:.5f}  "
        f"mean cos = {s['mean_cos']:+.5f}"
    )

# a different residue class tells the same story
s = summary(horizontal_sample(10000, a=2))
print(f"  a = 2     n = {s['count']:<5} D = {s['discrepancy']:.5f}")
