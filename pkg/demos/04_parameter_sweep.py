"""
Sweeping gravity and the derivative bound
=========================================

For each rational pair (g, delta) with 0 < delta < g/4: the cycle length
N, the endpoint derivative eta, how many distinct circle positions the
impacts use, and whether the full check battery passes. Some pairs send
an interior impact time onto the circle origin where a different
derivative is required; the construction refuses those instead of
guessing.
"""
import time
from fractions import Fraction as F

from bounce_escape import CollisionError, Parameters, construct, verify_instance

pairs = [(g, d) for g in (4, 8, 10, F(981, 100), 12, 20)
         for d in (F(1, 7), F(1, 5), F(1, 3), F(2, 5), F(1, 2), 1, F(3, 2))
         if 0 < d < F(g) / 4]

print(f"{'g':>8} {'delta':>6} {'N':>3} {'eta':>8} {'positions':>9}  result")
start = time.perf_counter()
for g, d in pairs:
    try:
        bp, profile = construct(Parameters(g, d))
    except CollisionError as exc:
        print(f"{str(g):>8} {str(d):>6}   -        -         -  collision: {exc}")
        continue
    ok = verify_instance(bp, profile).ok
    print(f"{str(g):>8} {str(d):>6} {bp.N:>3} {str(bp.eta):>8} {len(profile.breakpoints) - 1:>9}  "
          f"{'all checks pass' if ok else 'FAILED'}")
print(f"{len(pairs)} pairs in {time.perf_counter() - start:.2f} s")
