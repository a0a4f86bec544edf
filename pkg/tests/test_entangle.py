import json
import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smw.entangle import (area_law_constant, asymptotic_entropy, entropy_from_counts,
                          entropy_from_state, entropy_scan_and_fit, ground_state,
                          leading_sqrt_coefficient, log_law_constant, schmidt_from_counts)
from smw.models import ModelSpec
from smw.walks import iter_walks

S31, BAL, S21, C1, C2 = ModelSpec.s31(0), ModelSpec.s31(1), ModelSpec.s21(), ModelSpec.s32(1), ModelSpec.s32(2)
MU0 = ModelSpec.s32(2, mu=0)


def _walk_split_entropy(model, n, a, c):
    """Oracle: SVD of the uniform superposition of walks split into step halves."""
    rows, cols, pairs = {}, {}, []
    for w, h in iter_walks(model, 2 * n, a):
        if h or w.indices[-1] != c:
            continue
        l, r = w.steps[:n], w.steps[n:]
        pairs.append((rows.setdefault(l, len(rows)), cols.setdefault(r, len(cols))))
    M = np.zeros((len(rows), len(cols)))
    for i, j in pairs:
        M[i, j] += 1
    s = np.linalg.svd(M, compute_uv=False) ** 2
    p = s[s > 1e-14] / s.sum()
    return float(-np.sum(p * np.log(p)))


@pytest.mark.parametrize("model,ns", [(S31, (1, 2, 3)), (BAL, (1, 2, 3)), (S21, (1, 2, 4)),
                                      (C1, (1, 2)), (C2, (1, 2))])
def test_counts_match_walk_oracle(model, ns):
    for n in ns:
        for a in range(1, model.k + 1):
            for c in range(1, model.k + 1):
                try:
                    S = float(entropy_from_counts(model, n, (a, c)).S)
                except ValueError:
                    continue
                assert abs(S - _walk_split_entropy(model, n, a, c)) < 1e-12


def test_examples():
    sp = schmidt_from_counts(S21, 1, "11")
    assert [e.p for e in sp.entries] == [Fraction(1, 2)] * 2
    with mp.workdps(50):
        assert abs(entropy_from_counts(S31, 1, "11").S - mp.log(3)) < mp.mpf(10) ** -45
        for m, s, n in [(S21, "11", 7), (BAL, "22", 5)]:
            assert abs(entropy_from_counts(m, n, s).S - mp.log(2)) < mp.mpf(10) ** -45
    sp = schmidt_from_counts(BAL, 3, "11")
    assert [e.p for e in sp.entries] == [Fraction(7, 17), Fraction(36, 119),
                                         Fraction(25, 119), Fraction(9, 119)]
    sp = schmidt_from_counts(C2, 2, "12")
    assert [(e.p, e.m) for e in sp.entries][-1] == (Fraction(4, 15), 2)
    assert entropy_from_counts(S31, 9, "33").S == 0
    assert entropy_from_counts(S21, 3, "22").S == 0


def test_errors():
    with pytest.raises(ValueError):
        schmidt_from_counts(BAL, 4, "12")
    with pytest.raises(ValueError):
        schmidt_from_counts(S21, 4, "13")
    with pytest.raises(ValueError):
        schmidt_from_counts(S31, 0, "11")
    with pytest.raises(ValueError):
        schmidt_from_counts(S31, 3, "1")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([S31, BAL, S21, C1, C2]), st.integers(1, 60),
       st.sampled_from(["11", "12", "21", "22"]))
def test_normalization(model, n, sector):
    try:
        sp = schmidt_from_counts(model, n, sector)
    except ValueError:
        return
    assert sp.total() + sp.truncated == 1
    assert all(e.p > 0 for e in sp.entries)


def test_sector_reversal_symmetry():
    with mp.workdps(50):
        for m in (S31, C2):
            for n in (5, 40):
                assert abs(entropy_from_counts(m, n, "12").S
                           - entropy_from_counts(m, n, "21").S) < mp.mpf(10) ** -40


def test_regime_separation():
    n = 60
    area = float(entropy_from_counts(BAL, n, "11").S)
    log = float(entropy_from_counts(S31, n, "11").S)
    sq = float(entropy_from_counts(C2, n, "11").S)
    assert area < log < sq
    assert abs(area - float(area_law_constant())) < 1e-10


def test_sectors_agree_at_large_n():
    for m in (S31, C2):
        spread = []
        for n in (100, 500):
            vals = [float(entropy_from_counts(m, n, s).S) for s in ("11", "12", "22")]
            spread.append(max(vals) - min(vals))
        assert spread[1] < spread[0] and spread[1] < 0.03


def test_mu_zero_uses_homogeneous_class():
    for n in (3, 20):
        assert entropy_from_counts(MU0, n, "11").S == entropy_from_counts(S31, n, "11").S


@pytest.mark.parametrize("model,sector,n", [(S31, "11", 3), (S31, "12", 3), (BAL, "11", 3),
                                            (S21, "11", 4), (C2, "12", 2), (C1, "22", 2),
                                            (MU0, "11", 2)])
@pytest.mark.parametrize("rep", ["reduced", "link"])
def test_density_matrix_agrees(model, sector, n, rep):
    H, g = ground_state(model, n, sector, rep)
    dm = entropy_from_state(H, g)
    assert dm.flags == () and dm.method == "density-matrix"
    assert abs(float(dm.S) - float(entropy_from_counts(model, n, sector).S)) < 1e-12


def test_walk_basis_route():
    H, g = ground_state(C2, 4, "12", basis="walks")
    assert H.sector == "restricted"
    assert abs(float(entropy_from_state(H, g).S) - float(entropy_from_counts(C2, 4, "12").S)) < 1e-12


def test_state_dict_and_cut_flag():
    H, g = ground_state(S31, 2, "11")
    st_ = {int(p): 1.0 for p in g.members}
    assert abs(float(entropy_from_state(H, st_).S) - float(entropy_from_state(H, g).S)) < 1e-14
    assert "non-midpoint cut" in entropy_from_state(H, g, cut=2).flags
    with pytest.raises(LookupError):
        ground_state(BAL, 3, "12")


def test_closed_constants():
    with mp.workdps(50):
        sig = (mp.sqrt(2) - 1) / (9 * mp.sqrt(2))
        assert abs(leading_sqrt_coefficient() - 2 * mp.log(2) * mp.sqrt(2 * sig / mp.pi)) \
            < mp.mpf(10) ** -45
        assert abs(log_law_constant() - mp.mpf("0.446848053772150")) < 1e-14
        assert abs(area_law_constant() - mp.mpf("1.28266166629499")) < 1e-13
    assert asymptotic_entropy(S31, 100, "33") == 0
    with mp.workdps(50):
        assert abs(asymptotic_entropy(S21, 10) - mp.log(2)) < mp.mpf(10) ** -40
    with pytest.raises(ValueError):
        asymptotic_entropy(BAL, 10, "12")


def test_lambda_positive_converges():
    assert abs(entropy_from_counts(BAL, 40, "11").S - area_law_constant()) < 1e-15


def test_log_fit():
    rep = entropy_scan_and_fit(S31, "11", (200, 500, 1000))
    assert rep.regime == "log"
    assert abs(rep.constant - rep.target) < 5e-3
    assert max(abs(r) for r in rep.residuals) < 5e-3
    assert json.loads(rep.to_json())["n"] == [200, 500, 1000]
    lines = rep.to_csv().splitlines()
    assert lines[0] == "model,sector,n,S,method" and len(lines) == 4


def test_sqrt_fit():
    rep = entropy_scan_and_fit(C2, "11", (200, 500, 1000))
    assert rep.regime == "sqrt"
    assert abs(rep.leading - rep.target) / rep.target < 0.01
    S1000 = rep.S[-1]
    assert abs(S1000 - float(asymptotic_entropy(C2, 1000))) < 0.05
    with pytest.raises(ValueError):
        entropy_scan_and_fit(C2, "11", (200,))


def test_area_fit():
    rep = entropy_scan_and_fit(BAL, "11", (20, 40))
    assert rep.regime == "area" and max(abs(r) for r in rep.residuals) < 1e-6
    assert math.isclose(entropy_scan_and_fit(S21, "11", (5, 9)).S[-1], math.log(2))
