"""Frustration-free chains: ground-state degeneracy from exact kernels and move classes.

Run: python3 demos/02_ground_states.py
"""
from smw.ground import addendum_regression, ground_classes, kernel_dimension, verify_zero_energy
from smw.hamiltonian import build_hamiltonian
from smw.models import ModelSpec, Topology

models = {
    "S31 lambda=0": ModelSpec.s31(0),
    "S31 lambda>0": ModelSpec.s31(1),
    "S21": ModelSpec.s21(),
    "S32 case 2": ModelSpec.s32(2),
    "S31 ring": ModelSpec.s31(0, topology=Topology.RING),
    "S31 phase II": ModelSpec.s31_phase(0, 0),
}

print("Exact kernel dimension (rational rank) against the number of surviving classes:")
for name, m in models.items():
    row = []
    for n in (4, 5, 6):
        H = build_hamiltonian(m, n)
        k = kernel_dimension(H, "exact").dim
        live = sum(g.survives for g in ground_classes(H, scope="all"))
        row.append(f"n={n}: {k}/{live}")
    print(f"    {name:14s} " + "  ".join(row))

H = build_hamiltonian(ModelSpec.s31(0), 5)
print("\nSurviving classes of S31 at n = 5, each annihilated exactly:")
for g in ground_classes(H):
    print(f"    {g.label}: {len(g):4d} walks, zero energy = {verify_zero_energy(H, g)}")

rep = addendum_regression(6)
print("\nOriginal against corrected boundary terms at n = 6:")
for bnd in ("original", "corrected"):
    r = rep[bnd][6]
    print(f"    {bnd:9s} GSD={r['gsd']:2d}  residual classes={len(r['non_smw_classes'])}  "
          f"exhibited paths at zero energy={r['exhibit_zero_energy']}")
