import numpy as np
import pytest

from smw.algebra import Walk, connectivity, ConnectivityKind
from smw.models import Boundary, Family, ModelSpec, ResourceError, Topology, parse_model
from smw.walks import (brute_force_table, enumerate_walks, height_zero_codes, iter_walks,
                       max_height)

S31, BAL, S21, C1, C2 = ModelSpec.s31(0), ModelSpec.s31(1), ModelSpec.s21(), ModelSpec.s32(1), ModelSpec.s32(2)


# -- models -----------------------------------------------------------------

def test_model_validation():
    with pytest.raises(ValueError):
        ModelSpec.s31_phase(1, 1)
    with pytest.raises(ValueError):
        ModelSpec.s31(-1)
    with pytest.raises(ValueError):
        ModelSpec.s32(2, mu=-1)
    assert ModelSpec.s31(0).lambda1 == 1 and not ModelSpec.s31(0).balanced
    assert ModelSpec.s31(2).lambda2 == 2 and ModelSpec.s31(2).balanced
    assert ModelSpec.s31_phase(0, 0).phase_two


def test_parse_model():
    assert parse_model("s31", lam=0) == S31
    assert parse_model("s31", lambda1=0, lambda2=1) == BAL
    assert parse_model("s32c2", mu=0).mu == 0
    assert parse_model("s21", topology="ring").topology is Topology.RING
    assert parse_model("s31", boundary="original").boundary is Boundary.ORIGINAL
    with pytest.raises(ValueError):
        parse_model("s41")


def test_walk_keys_ignore_hamiltonian_knobs():
    assert ModelSpec.s32(2, mu=0).walk_key() == C2.walk_key()
    assert ModelSpec.s31(0, topology=Topology.RING).walk_key() == "s31"
    assert len({m.walk_key() for m in (S31, BAL, S21, C1, C2)}) == 5


# -- enumeration ------------------------------------------------------------

def test_enumerated_walk_list():
    got = [w.indices for w in enumerate_walks(S31, 3, 0, 1, 2)]
    assert sorted(got) == sorted([(1, 3, 2, 2), (1, 1, 3, 2), (1, 3, 3, 2)])


def test_enumeration_examples():
    assert len(enumerate_walks(S31, 3, 1, 1, 2)) == 6
    assert len(enumerate_walks(C2, 4, 2, 1, 2)) == 8
    tw = enumerate_walks(C2, 4, 2, 1, 2, tilde=True)
    assert len(tw) == 2
    assert all(any(e.color == 0 for e in w.steps) for w in tw)
    assert len(enumerate_walks(S31, 2, 0, 1, 1)) == 3
    assert enumerate_walks(S31, 0, 0, 2, 2) == [Walk(())]


def test_walk_rules():
    for w, h in iter_walks(S31, 6, 1):
        assert w.motzkin_valid(h)
        assert connectivity(w).kind is ConnectivityKind.CONNECTED
    # balanced: an ascent into 3 comes back to its origin
    for w, _ in iter_walks(BAL, 6, 1):
        st = []
        for e in w.steps:
            if e.domain < e.range:
                st.append(e.domain)
            elif e.domain > e.range:
                o = st.pop()
                if e.domain == 3:
                    assert e.range == o
    # case 2: matched pairs share a color
    for w, _ in iter_walks(C2, 5, 2):
        st = []
        for e in w.steps:
            if e.domain < e.range:
                st.append(e.color)
            elif e.domain > e.range:
                assert st.pop() == e.color


def test_cap():
    with pytest.raises(ResourceError):
        list(iter_walks(C2, 10, 1))
    with pytest.raises(ResourceError):
        brute_force_table(S31, 11, cap=10)
    with pytest.raises(ValueError):
        list(iter_walks(S31, 3, 1, tilde=True))


@pytest.mark.parametrize("model", [S31, BAL, S21, C1, C2])
@pytest.mark.parametrize("n", [1, 4, 6])
def test_compiled_tally_matches_generator(model, n):
    full, tilde = brute_force_table(model, n)
    for a in range(1, model.k + 1):
        for b in range(1, model.k + 1):
            for h in range(n + 1):
                assert full[a - 1, h, b - 1] == len(enumerate_walks(model, n, h, a, b))
                if model.family is Family.S32_CASE2:
                    assert tilde[a - 1, h, b - 1] == len(enumerate_walks(model, n, h, a, b, tilde=True))


@pytest.mark.parametrize("model,d", [(S31, 3), (BAL, 3), (S21, 2), (C2, 6)])
def test_height_zero_codes(model, d):
    n = 5
    codes = height_zero_codes(model, n, d)
    want = []
    for a in range(1, model.k + 1):
        for w, h in iter_walks(model, n, a):
            if h:
                continue
            code, mul = a - 1, d
            for e in w.steps:
                code += (e.range - 1 + 3 * ((e.color or 1) - 1)) * mul
                mul *= d
            want.append(code)
    assert codes.tolist() == sorted(want)


def test_height_zero_link_codes():
    codes = height_zero_codes(S31, 3, 9, link=True)
    want = sorted(sum((3 * (e.domain - 1) + e.range - 1) * 9 ** j for j, e in enumerate(w.steps))
                  for a in (1, 2, 3) for w, h in iter_walks(S31, 3, a) if h == 0)
    assert codes.tolist() == want


# -- heights ----------------------------------------------------------------

def test_max_height_examples():
    assert max_height(S31, 5) == 3
    assert max_height(S21, 8) == 1
    assert max_height(S31, 2) == 2


def test_max_height_formulas():
    for n in range(1, 11):
        assert max_height(S31, n) == (n - 2) // 3 + 2
        assert max_height(BAL, n) == min(n, 2)
        assert max_height(S21, n) == 1
    with pytest.raises(ValueError):
        max_height(S31, 0)


def test_brute_force_n0():
    full, tilde = brute_force_table(S31, 0)
    assert np.array_equal(full[:, 0, :], np.eye(3, dtype=np.int64))
