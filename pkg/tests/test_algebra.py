import doctest
import itertools

import pytest
from hypothesis import given, strategies as st

import smw.algebra as alg
from smw.algebra import (ConnectivityKind, PAIR_COLS, PAIR_ROWS, SisElement, StepKind, Walk,
                         alphabet, classify_step, compose, compose_pairs, connectivity,
                         ez_realization, parse_element, parse_walk, render_walk)


def x(a, b, s=None, k=3):
    return SisElement(a, b, s, k)


def test_doctests():
    assert doctest.testmod(alg).failed == 0


def test_compose_examples():
    assert compose(x(1, 2), x(2, 1)) == x(1, 1)
    assert compose(x(1, 1), x(2, 1)) is None
    assert compose(x(1, 2, 2), x(2, 3, 2)) == x(1, 3, 1)
    assert compose(x(1, 2, 1), x(2, 3, 2)) == x(1, 3, 2)


def test_compose_rejects_mixed_alphabets():
    with pytest.raises(ValueError):
        compose(x(1, 2, k=2), x(2, 1))
    with pytest.raises(ValueError):
        compose(x(1, 2, 1), x(2, 1))
    with pytest.raises(ValueError):
        compose(x(1, 2, 0), x(2, 1, 1))


def test_element_validation():
    with pytest.raises(ValueError):
        SisElement(0, 1)
    with pytest.raises(ValueError):
        SisElement(3, 1, k=2)
    with pytest.raises(ValueError):
        SisElement(1, 2, 3)


@pytest.mark.parametrize("e,kind", [(x(1, 3), StepKind.UP), (x(2, 2), StepKind.FLAT),
                                    (x(3, 1), StepKind.DOWN)])
def test_classify(e, kind):
    assert classify_step(e) is kind
    assert e.step.delta == kind.value


@pytest.mark.parametrize("k,colored", [(2, False), (3, False), (3, True)])
def test_alphabet_partition(k, colored):
    alph = alphabet(k, colored)
    mult = 2 if colored else 1
    kinds = [classify_step(e) for e in alph]
    assert kinds.count(StepKind.UP) == kinds.count(StepKind.DOWN) == mult * k * (k - 1) // 2
    assert kinds.count(StepKind.FLAT) == mult * k


@pytest.mark.parametrize("colored", [False, True])
def test_associativity_exhaustive(colored):
    alph = alphabet(3, colored)

    def mul(p, q):
        return None if p is None or q is None else compose(p, q)

    for a, b, c in itertools.product(alph, repeat=3):
        assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_ez_examples():
    assert ez_realization((1, 2), (2, 3)) == x(1, 2, 1)
    assert ez_realization((2, 3), (1, 3)) == x(2, 3, 2)
    assert ez_realization((3, 1), (1, 2)) == x(3, 1, 1)
    with pytest.raises(ValueError):
        ez_realization((1, 3), (1, 2))


def test_ez_bijection_and_homomorphism():
    pairs = [(ab, cd) for ab in PAIR_ROWS for cd in PAIR_COLS]
    images = {ez_realization(*p) for p in pairs}
    assert images == set(alphabet(3, colored=True)) and len(pairs) == 18
    for p, q in itertools.product(pairs, repeat=2):
        terms = compose_pairs(p, q)
        want = compose(ez_realization(*p), ez_realization(*q))
        if want is None:
            assert terms == []
        else:
            assert [ez_realization(*t) for t in terms] == [want]


def test_connectivity_examples():
    c = connectivity([x(1, 2), x(2, 3), x(3, 1)])
    assert c.kind is ConnectivityKind.CONNECTED and c.breaks == ()
    c = connectivity([x(1, 2), x(1, 2)])
    assert c.kind is ConnectivityKind.DISCONNECTED and c.breaks == (1,)
    c = connectivity([x(1, 1), x(1, 2), x(1, 1)])
    assert c.kind is ConnectivityKind.PARTIAL and c.breaks == (2,)
    with pytest.raises(ValueError):
        connectivity([])


def test_walk_profile():
    w = Walk.from_indices([1, 3, 2, 2, 3])
    assert w.height_profile == (0, 1, 0, 0, 1)
    assert w.motzkin_valid() and w.motzkin_valid(1) and not w.motzkin_valid(0)
    assert not Walk.from_indices([2, 1]).motzkin_valid()
    assert w.indices == (1, 3, 2, 2, 3)


elements = st.builds(lambda a, b, s: SisElement(a, b, s), st.integers(1, 3), st.integers(1, 3),
                     st.sampled_from([None, 1, 2]))


@given(st.lists(elements, min_size=1, max_size=8))
def test_text_roundtrip(steps):
    text = render_walk(steps)
    assert parse_walk(text).steps == tuple(steps)


@given(st.lists(elements, min_size=1, max_size=6))
def test_profile_invariants(steps):
    w = Walk(tuple(steps))
    prof = w.height_profile
    assert len(prof) == len(steps) + 1 and prof[0] == 0
    assert all(prof[j + 1] - prof[j] == classify_step(e).delta for j, e in enumerate(steps))


@given(st.lists(elements, min_size=2, max_size=6))
def test_connectivity_invariants(steps):
    c = connectivity(steps)
    assert (c.kind is ConnectivityKind.CONNECTED) == (not c.breaks)
    assert (c.kind is ConnectivityKind.DISCONNECTED) == (len(c.breaks) == len(steps) - 1)


def test_sort_order_is_total():
    alph = alphabet(3, colored=True)
    assert sorted(alph) == sorted(reversed(alph))
    assert parse_element("x^2[1,3]") == x(1, 3, 2)
    assert str(x(1, 3, 0)) == "xi[1,3]"
    with pytest.raises(ValueError):
        parse_element("y[1,2]")
