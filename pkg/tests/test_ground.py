import numpy as np
import pytest

from smw.ground import (addendum_regression, class_state, ground_classes, kernel_dimension,
                        phase_scan, rank_exact, smw_classes, verify_zero_energy,
                        walk_basis_operator)
from smw.hamiltonian import boundary_perturbation, build_hamiltonian
from smw.models import ModelSpec, Topology

S31, BAL, S21, C1, C2 = ModelSpec.s31(0), ModelSpec.s31(1), ModelSpec.s21(), ModelSpec.s32(1), ModelSpec.s32(2)


def test_rank_exact():
    from fractions import Fraction as F
    assert rank_exact([{0: F(1), 1: F(1)}, {0: F(2), 1: F(2)}, {2: F(1, 3)}]) == 2
    assert rank_exact([]) == 0


@pytest.mark.parametrize("model,gsd,ns", [(S31, 5, range(4, 9)), (BAL, 3, range(4, 9)),
                                          (S21, 2, range(2, 10)), (C1, 5, (4, 5)),
                                          (C2, 5, (4, 5))])
def test_gsd_table(model, gsd, ns):
    for n in ns:
        H = build_hamiltonian(model, n)
        k = kernel_dimension(H, "exact")
        assert int(k) == gsd
        assert sum(g.survives for g in ground_classes(H)) == gsd


def test_surviving_labels():
    H = build_hamiltonian(S31, 6)
    live = sorted(g.label for g in ground_classes(H) if g.survives)
    assert live == ["11", "12", "21", "22", "33"]
    H = build_hamiltonian(BAL, 6)
    assert sorted(g.label for g in ground_classes(H) if g.survives) == ["11", "22", "33"]


@pytest.mark.parametrize("model", [S31, BAL, S21])
def test_link_matches_reduced(model):
    for n in (3, 4):
        assert int(kernel_dimension(build_hamiltonian(model, n, "link"), "exact")) == \
            int(kernel_dimension(build_hamiltonian(model, n), "exact"))


def test_link_rejects_closed_chains():
    with pytest.raises(ValueError):
        build_hamiltonian(ModelSpec.s31(0, topology=Topology.RING), 3, "link")


def test_boundary_perturbation_lifts_sectors():
    H = build_hamiltonian(S31, 5, extra_terms=[boundary_perturbation(S31, 1)])
    assert int(kernel_dimension(H, "exact")) == 3


def test_closed_chains():
    for n in (4, 5, 6):
        assert int(kernel_dimension(build_hamiltonian(
            ModelSpec.s31(0, topology=Topology.RING), n), "exact")) == 2
        assert int(kernel_dimension(build_hamiltonian(
            ModelSpec.s31(0, topology=Topology.IDENTIFIED), n), "exact")) == 3


def test_verify_zero_energy():
    H = build_hamiltonian(S31, 4)
    cls = ground_classes(H, scope="all")
    g33 = next(g for g in cls if g.label == "33" and g.survives)
    assert verify_zero_energy(H, g33)
    dead = next(g for g in cls if not g.survives)
    assert not verify_zero_energy(H, dead)
    H3 = build_hamiltonian(S31, 3)
    g12 = next(g for g in ground_classes(H3) if g.label == "12")
    assert len(g12) == 3 and verify_zero_energy(H3, g12)
    assert set(class_state(g12).values()) == {1}


def test_kernel_equals_class_count_small():
    for m in (S31, BAL, S21, C2, ModelSpec.s31_phase(0, 0)):
        for n in ((2, 3) if m is C2 else (3, 4)):
            H = build_hamiltonian(m, n)
            live = sum(g.survives for g in ground_classes(H, scope="all"))
            assert int(kernel_dimension(H, "exact")) == live
            ev = np.linalg.eigvalsh(H.to_scipy().toarray())
            assert int(np.sum(ev < 1e-9)) == live


def test_walk_basis_classes_match_full():
    for m in (S31, C2):
        full = sorted(g.label for g in ground_classes(build_hamiltonian(m, 5)) if g.survives)
        part = sorted(g.label for g in smw_classes(m, 5) if g.survives)
        assert full == part
    assert walk_basis_operator(S31, 5).sector == "restricted"


def test_addendum_regression():
    rep = addendum_regression(6)
    orig, corr = rep["original"], rep["corrected"]
    assert orig[5]["gsd"] == 9 and orig[6]["gsd"] == 12
    assert orig[6]["non_smw_classes"] and all(orig[6]["exhibit_zero_energy"].values())
    assert corr[5]["gsd"] == corr[6]["gsd"] == 5
    assert not corr[6]["non_smw_classes"]
    assert not any(corr[6]["exhibit_zero_energy"].values())
    with pytest.raises(ValueError):
        addendum_regression(4)


def test_phase_scan():
    rows = phase_scan([ModelSpec.s31_phase(0, 0), ModelSpec.s32(2, mu=0)], [4, 5])
    p2 = [r for r in rows if r["model"].startswith("s31")]
    assert [r["gsd"] for r in p2] == [7, 9]
    mu0 = [r for r in rows if r["model"].startswith("s32")]
    assert [r["classes"] for r in mu0] == [126, 356]
    assert 2.5 < mu0[1]["ratio"] < 3.1
