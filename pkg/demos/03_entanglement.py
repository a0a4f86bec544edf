"""Midpoint entanglement: area law, logarithmic law and square-root law.

Run: python3 demos/03_entanglement.py
"""
import mpmath as mp

from smw.entangle import (area_law_constant, entropy_from_counts, entropy_from_state,
                          entropy_scan_and_fit, ground_state, leading_sqrt_coefficient,
                          log_law_constant)
from smw.models import ModelSpec

s31, bal, s32 = ModelSpec.s31(0), ModelSpec.s31(1), ModelSpec.s32(2)

print("Counting route against an explicit SVD of the ground state (n = 3, sector 12):")
H, g = ground_state(s31, 3, "12")
print(f"    counts  {float(entropy_from_counts(s31, 3, '12').S):.15f}")
print(f"    SVD     {float(entropy_from_state(H, g).S):.15f}")

print("\nS31 at lambda > 0 saturates to a constant:")
for n in (5, 10, 40):
    print(f"    n={n:3d}  S={mp.nstr(entropy_from_counts(bal, n, '11').S, 15)}")
print(f"    closed form {mp.nstr(area_law_constant(), 15)}")

print("\nS31 at lambda = 0: S - ln(n)/2 tends to a constant:")
rep = entropy_scan_and_fit(s31, "11", (200, 500, 1000))
print(f"    extrapolated {rep.constant:.5f}, evaluated closed form {float(log_law_constant()):.5f}")

print("\nS32 case 2: (S - ln(n)/2)/sqrt(n) tends to a constant:")
rep = entropy_scan_and_fit(s32, "11", (200, 500, 1000))
print(f"    extrapolated {rep.leading:.5f}, closed form {float(leading_sqrt_coefficient()):.5f}")
