from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from smw.ground import SpectralGapError, kernel_dimension, kernel_float
from smw.hamiltonian import boundary_perturbation, build_hamiltonian, hamiltonian_terms
from smw.models import Boundary, ModelSpec, ResourceError, Topology

S31, BAL, S21, C1, C2 = ModelSpec.s31(0), ModelSpec.s31(1), ModelSpec.s21(), ModelSpec.s32(1), ModelSpec.s32(2)
ALL = [S31, BAL, S21, C1, C2, ModelSpec.s32(2, mu=0), ModelSpec.s31_phase(0, 0),
       ModelSpec.s31(0, boundary=Boundary.ORIGINAL)]


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("model", [S31, BAL, S21, C1, C2])
@pytest.mark.parametrize("rep", ["reduced", "link"])
def test_local_projectors_idempotent(model, rep):
    _, sp_, terms = hamiltonian_terms(model, 4, rep)
    seen = set()
    for t in terms:
        key = (t.name.split("_")[0], len(t.sites))
        if key in seen:
            continue
        seen.add(key)
        # P is a sum of rank-one projectors, so idempotence is mutual orthogonality
        vecs = [dict(v) for v in t.gram]
        for i, u in enumerate(vecs):
            for v in vecs[i + 1:]:
                assert sum(c * v.get(k, 0) for k, c in u.items()) == 0
        if sp_.d ** len(t.sites) <= 27:
            P = t.local_matrix(sp_.d)
            assert P == [list(r) for r in zip(*P)] and _matmul(P, P) == P
            assert sum(P[i][i] for i in range(len(P))) == len(t.gram)
            assert all(isinstance(v, Fraction) for r in P for v in r)


@pytest.mark.parametrize("model", ALL)
def test_symmetric_and_psd(model):
    H = build_hamiltonian(model, 3 if model.family.name.startswith("S32") else 4)
    M = H.to_scipy()
    assert abs(M - M.T).max() == 0
    ev = np.linalg.eigvalsh(M.toarray())
    assert ev.min() > -1e-10 and abs(ev.min()) < 1e-10


def test_rational_entries():
    H = build_hamiltonian(S31, 3)
    ent = H.rational_entries()
    M = H.to_scipy().toarray()
    for (i, j), v in ent.items():
        assert ent[(j, i)] == v and abs(float(v) - M[i, j]) < 1e-14
    assert {v.denominator for v in ent.values()} <= {1, 2, 3, 6}


def test_link_s31_n2():
    H = build_hamiltonian(S31, 2, "link")
    assert H.dim == 81
    assert kernel_dimension(H, "exact").dim > 0


def test_s21_n2_kernel():
    H = build_hamiltonian(S21, 2)
    assert H.dim == 8
    # 111 and 121 form one class, 222 another
    assert kernel_dimension(H, "exact").dim == 2
    assert np.sum(np.linalg.eigvalsh(H.to_scipy().toarray()) < 1e-10) == 2


def test_lambda_only_weights_balancing_terms():
    _, _, terms = hamiltonian_terms(S31, 5)
    zero = {t.name.split("_")[0] for t in terms if t.weight == 0}
    assert zero == {"B"}
    H = build_hamiltonian(S31, 5)
    assert all(t.weight > 0 for t in H.active_terms)


def test_budget():
    with pytest.raises(ResourceError):
        build_hamiltonian(C2, 9)
    with pytest.raises(ResourceError):
        build_hamiltonian(S31, 5, budget=100)
    with pytest.raises(ValueError):
        build_hamiltonian(S31, 1)


def test_basis_filters():
    assert build_hamiltonian(C2, 4).dim == 3 * 6 ** 4
    H = build_hamiltonian(ModelSpec.s31(0, topology=Topology.IDENTIFIED), 4)
    dg = H.digits()
    assert np.all(dg[:, 0] == dg[:, 4])


def test_export_coo():
    H = build_hamiltonian(S21, 2)
    lines = list(H.export_coo())
    assert lines == sorted(lines, key=lambda s: tuple(map(int, s.split()[:2])))
    i, j, v = lines[0].split()
    assert "/" in v
    fl = list(H.export_coo(exact=False))
    assert len(fl) == len(lines)


def test_render_state():
    H = build_hamiltonian(C2, 3)
    s = H.render_state(int(H.positions(np.array([0]))[0]))
    assert len(s.split()) == 4


def test_float_kernel_agrees():
    for m, n in [(S31, 8), (C2, 5), (BAL, 7)]:
        H = build_hamiltonian(m, n)
        res = kernel_dimension(H, "float")
        assert res.dim == kernel_dimension(H, "exact").dim
        assert res.gap is not None and res.gap > 1e-6


def test_spectral_gap_rejection():
    tiny = replace(boundary_perturbation(S31, 1), weight=Fraction(1, 10 ** 8))
    H = build_hamiltonian(S31, 4, extra_terms=[tiny])
    with pytest.raises(SpectralGapError):
        kernel_float(H)
