"""Brute-force enumeration of SMW paths.

This module is the oracle: it walks the full tree of step choices and
keeps exactly the walks satisfying the model rules, with no reference
to recursions or generating functions.

Rules, applied to connected walks of semigroup indices:

* the height never drops below zero;
* balanced S31 (lambda > 0): the down step matched to an ascent
  ``x[a,3]`` is ``x[3,a]``;
* S32 case 2: a matched up/down pair carries one color.
"""
from __future__ import annotations

from typing import Iterator

import numpy as np
from numba import njit

from .algebra import SisElement, Walk
from .models import Family, ModelSpec, ResourceError

__all__ = ["enumerate_walks", "iter_walks", "brute_force_table", "max_height",
           "DEFAULT_CAPS", "oracle_cap", "height_zero_codes"]

DEFAULT_CAPS = {Family.S21: 12, Family.S31: 12, Family.S32_CASE1: 9, Family.S32_CASE2: 9}


def oracle_cap(model: ModelSpec) -> int:
    return DEFAULT_CAPS[model.family]


def _colors(model):
    return (1, 2) if model.colored else (None,)


def iter_walks(model: ModelSpec, n: int, a: int, *, tilde: bool = False,
               cap: int | None = None) -> Iterator[tuple[Walk, int]]:
    """Yield ``(walk, end_height)`` for every valid walk of length n from index a.

    In tilde mode (S32 case 2 only) each class of walks differing only in
    the colors of unmatched ascents is emitted once, with those steps
    replaced by colorless placeholders.
    """
    cap = oracle_cap(model) if cap is None else cap
    if n > cap:
        raise ResourceError(f"enumeration of length {n} exceeds the oracle cap {cap}")
    if tilde and model.family is not Family.S32_CASE2:
        raise ValueError("tilde walks are defined for S32 case 2")
    k = model.k
    colors = _colors(model)
    steps: list[SisElement] = []
    stack: list[tuple[int, int | None]] = []   # unmatched ascents (origin, color)

    def rec(idx, h):
        if len(steps) == n:
            out = list(steps)
            if tilde:
                if any(s != 1 for _, s, _ in _open_ups(steps)):
                    return
                for pos, _, _ in _open_ups(steps):
                    e = out[pos]
                    out[pos] = SisElement(e.domain, e.range, 0, k)
            yield Walk(tuple(out)), h
            return
        for d in range(1, k + 1):
            for s in colors:
                if d > idx:
                    stack.append((idx, s))
                    steps.append(SisElement(idx, d, s, k))
                    yield from rec(d, h + 1)
                    steps.pop()
                    stack.pop()
                elif d < idx:
                    if h == 0:
                        continue
                    origin, col = stack[-1]
                    if model.balanced and idx == 3 and d != origin:
                        continue
                    if model.family is Family.S32_CASE2 and s != col:
                        continue
                    stack.pop()
                    steps.append(SisElement(idx, d, s, k))
                    yield from rec(d, h - 1)
                    steps.pop()
                    stack.append((origin, col))
                else:
                    steps.append(SisElement(idx, d, s, k))
                    yield from rec(d, h)
                    steps.pop()

    yield from rec(a, 0)


def _open_ups(steps):
    """Positions, colors and origins of unmatched ascents."""
    st = []
    for pos, e in enumerate(steps):
        if e.domain < e.range:
            st.append((pos, e.color, e.domain))
        elif e.domain > e.range:
            st.pop()
    return st


def enumerate_walks(model: ModelSpec, n: int, h: int, a: int, b: int, *,
                    tilde: bool = False, cap: int | None = None) -> list[Walk]:
    """All valid walks of length n from index a to index b ending at height h."""
    if n == 0:
        return [Walk(())] if (h == 0 and a == b) else []
    return sorted(w for w, y in iter_walks(model, n, a, tilde=tilde, cap=cap)
                  if y == h and w.steps[-1].range == b)


_MODE = {Family.S21: 0, Family.S31: 0, Family.S32_CASE1: 1, Family.S32_CASE2: 2}


@njit(cache=True)
def _tally(k, n, mode, balanced):
    return _dfs(k, n, mode, balanced, False, 1, False, np.zeros(1, np.int64))


@njit(cache=True)
def _dfs(k, n, mode, balanced, emit, dloc, link, out):
    """Exhaustive tree search; with ``emit`` the basis codes of height-zero
    walks are written to ``out`` (reduced or link labels, base ``dloc``)."""
    nout = 0
    ncol = 1 if mode == 0 else 2
    full = np.zeros((k, n + 1, k), np.int64)
    tilde = np.zeros((k, n + 1, k), np.int64)
    nopt = k * ncol
    idx = np.zeros(n + 1, np.int64)
    hgt = np.zeros(n + 1, np.int64)
    choice = np.zeros(n + 1, np.int64)
    st_org = np.zeros(n + 1, np.int64)
    st_col = np.zeros(n + 1, np.int64)
    # what step d did to the stack: 1 push, -1 pop (saved item), 0 nothing
    act = np.zeros(n + 1, np.int64)
    sv_org = np.zeros(n + 1, np.int64)
    sv_col = np.zeros(n + 1, np.int64)
    cols = np.zeros(n + 1, np.int64)
    for a in range(k):
        idx[0] = a
        hgt[0] = 0
        sp = 0
        d = 0
        choice[0] = -1
        while d >= 0:
            if d == n:
                b = idx[n]
                h = hgt[n]
                full[a, h, b] += 1
                if emit and h == 0:
                    code = 0
                    mul = 1
                    if not link:
                        code = a
                        mul = dloc
                    for j in range(n):
                        if link:
                            lab = k * idx[j] + idx[j + 1] + 9 * cols[j + 1]
                        else:
                            lab = idx[j + 1] + 3 * cols[j + 1]
                        code += lab * mul
                        mul *= dloc
                    out[nout] = code
                    nout += 1
                ok = True
                for j in range(sp):
                    if st_col[j] != 0:
                        ok = False
                tilde[a, h, b] += 1 if ok else 0
                d -= 1
                # undo step d+1 effect
                if d >= 0:
                    if act[d + 1] == 1:
                        sp -= 1
                    elif act[d + 1] == -1:
                        st_org[sp] = sv_org[d + 1]
                        st_col[sp] = sv_col[d + 1]
                        sp += 1
                continue
            choice[d] += 1
            if choice[d] >= nopt:
                d -= 1
                if d >= 0:
                    if act[d + 1] == 1:
                        sp -= 1
                    elif act[d + 1] == -1:
                        st_org[sp] = sv_org[d + 1]
                        st_col[sp] = sv_col[d + 1]
                        sp += 1
                continue
            nxt = choice[d] // ncol
            col = choice[d] % ncol
            cur = idx[d]
            if nxt > cur:
                st_org[sp] = cur
                st_col[sp] = col
                sp += 1
                act[d + 1] = 1
                hgt[d + 1] = hgt[d] + 1
            elif nxt < cur:
                if hgt[d] == 0:
                    continue
                o = st_org[sp - 1]
                c = st_col[sp - 1]
                if balanced and cur == 2 and nxt != o:
                    continue
                if mode == 2 and c != col:
                    continue
                sp -= 1
                sv_org[d + 1] = o
                sv_col[d + 1] = c
                act[d + 1] = -1
                hgt[d + 1] = hgt[d] - 1
            else:
                act[d + 1] = 0
                hgt[d + 1] = hgt[d]
            idx[d + 1] = nxt
            cols[d + 1] = col
            d += 1
            choice[d] = -1
    return full, tilde, nout


def height_zero_codes(model: ModelSpec, n: int, d: int, link: bool = False) -> np.ndarray:
    """Basis codes of all valid walks of length n ending at height zero.

    Reduced labels are ``index-1 + 3 (color-1)`` (site 0 carries color 1);
    link labels are ``k (a-1) + (b-1) + 9 (color-1)``.
    """
    mode, bal = _MODE[model.family], bool(model.balanced)
    full, _, _ = _dfs(model.k, n, mode, bal, False, 0, False, np.zeros(1, np.int64))
    total = int(full[:, 0, :].sum())
    out = np.zeros(total, np.int64)
    _dfs(model.k, n, mode, bal, True, d, link, out)
    return np.sort(out)


def brute_force_table(model: ModelSpec, n: int, *, cap: int | None = None):
    """Exhaustive tallies ``T[a-1, h, b-1]`` of valid walks of length n.

    Returns ``(full, tilde)``; ``tilde`` counts each class of walks that
    differ only in unmatched-ascent colors once (meaningful for S32 case 2).
    The tree search is compiled, so S32 lengths up to 10 stay cheap.
    """
    cap = max(oracle_cap(model), 10) if cap is None else cap
    if n > cap:
        raise ResourceError(f"brute-force length {n} exceeds cap {cap}")
    if n == 0:
        eye = np.zeros((model.k, 1, model.k), np.int64)
        for a in range(model.k):
            eye[a, 0, a] = 1
        return eye, eye.copy()
    full, tilde, _ = _tally(model.k, n, _MODE[model.family], bool(model.balanced))
    return full, tilde


def max_height(model: ModelSpec, n: int, cap: int | None = None) -> int:
    """Largest height reached by any valid walk of length n (brute force)."""
    if n < 1:
        raise ValueError("n must be positive")
    full, _ = brute_force_table(model, n, cap=cap)
    hs = np.nonzero(full.sum(axis=(0, 2)))[0]
    return int(hs.max())
