"""Counting walks: exhaustive enumeration, the height DP and generating functions.

Run: python3 demos/01_counting.py
"""
from smw.counting import ballot, count
from smw.models import ModelSpec
from smw.series import asymptotic_ratio_scan, closed_form
from smw.walks import enumerate_walks

s31, s32 = ModelSpec.s31(0), ModelSpec.s32(2)

print("Walks of S31 (lambda = 0) of length 3 from 1 to 2 ending at height 0:")
for w in enumerate_walks(s31, 3, 0, 1, 2):
    print("   ", w.indices)

print("\nHeight-resolved counts agree with the closed-form series coefficients:")
for h in range(4):
    dp = [count(s31, n, h, 1, 2) for n in range(9)]
    gf = [int(c) for c in closed_form(s31, "12", h, order=8)]
    print(f"    h={h}: {dp}  {'ok' if dp == gf else 'MISMATCH'}")

print("\nColoured walks (S32 case 2): full counts are 2^h times the tilde counts:")
print("    N(4, h=2, 1->2) =", count(s32, 4, 2, 1, 2), " tilde:", count(s32, 4, 2, 1, 2, tilde=True))

print("\nBallot numbers count Dyck prefixes ending at height h:")
print("   ", [ballot(10, h) for h in range(0, 11, 2)])

print("\nExact count over the leading asymptotic form, sector 11:")
for n, exact, approx, r in asymptotic_ratio_scan(s31, "11", [50, 200, 1000]):
    print(f"    n={n:5d}  ratio={float(r):.5f}")
