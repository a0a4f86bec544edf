"""Exact walk counts.

Two independent routes are provided:

* :func:`walk_layers`, a transfer-matrix dynamic program over
  (height, state) with exact big integers.  Colors never enter the state:
  in S32 case 2 a matched pair chooses its color at the ascent, so the
  weights are 2 per flat, 2 per ascent and 1 per descent (tilde counts
  use 2 per flat, 1 per ascent, 2 per descent).
* :func:`recursion_count`, the first-step convolution recursions.

Notation: ``N(model, n, h, a, b)`` counts walks of length n from index a
to index b ending at height h.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from pathlib import Path

import numpy as np
from filelock import FileLock

from .models import Family, ModelSpec

__all__ = ["Automaton", "automaton", "walk_layers", "count", "state_counts",
           "recursion_count", "CountTable", "ballot", "composition_check"]


@dataclass(frozen=True)
class Automaton:
    """States carry a semigroup index; transitions are (src, dst, dh, weight)."""

    index: tuple[int, ...]
    transitions: tuple[tuple[int, int, int, int], ...]
    start: dict = field(hash=False, compare=False)
    labels: tuple[str, ...] = ()


def _plain(k, wflat, wup, wdown):
    trans = []
    for c in range(k):
        for d in range(k):
            dh = (d > c) - (d < c)
            w = wflat if dh == 0 else (wup if dh > 0 else wdown)
            trans.append((c, d, dh, w))
    return Automaton(tuple(range(1, k + 1)), tuple(trans),
                     {a: a - 1 for a in range(1, k + 1)},
                     tuple(str(a) for a in range(1, k + 1)))


def _balanced():
    # 0:'1' 1:'2' 2:'3<1' 3:'3<2' 4:'3' (start only)
    t = [(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 1, 1),
         (1, 1, 0, 1), (1, 0, -1, 1), (1, 3, 1, 1),
         (2, 2, 0, 1), (2, 0, -1, 1),
         (3, 3, 0, 1), (3, 1, -1, 1),
         (4, 4, 0, 1), (4, 0, -1, 1), (4, 1, -1, 1)]
    return Automaton((1, 2, 3, 3, 3), tuple(t), {1: 0, 2: 1, 3: 4},
                     ("1", "2", "3<1", "3<2", "3"))


def automaton(model: ModelSpec, tilde: bool = False) -> Automaton:
    fam = model.family
    if tilde and fam is not Family.S32_CASE2:
        tilde = False
    if fam is Family.S21:
        return _plain(2, 1, 1, 1)
    if fam is Family.S31:
        return _balanced() if model.balanced else _plain(3, 1, 1, 1)
    if fam is Family.S32_CASE1:
        return _plain(3, 2, 2, 2)
    return _plain(3, 2, 1, 2) if tilde else _plain(3, 2, 2, 1)


def _shift(v, dh):
    out = np.zeros_like(v)
    if dh == 0:
        out[:] = v
    elif dh > 0:
        out[dh:] = v[:-dh]
    else:
        out[:dh] = v[-dh:]
    return out


@lru_cache(maxsize=256)
def _layers_cached(akey, model_key_tuple, a, steps, end_zero_at):
    model, tilde = model_key_tuple
    auto = automaton(model, tilde)
    S = len(auto.index)
    nmax = max(steps)
    H = nmax + 1
    cur = [np.zeros(H + 1, dtype=object) for _ in range(S)]
    for v in cur:
        v[:] = 0
    cur[auto.start[a]][0] = 1
    snaps = {}
    want = set(steps)
    if 0 in want:
        snaps[0] = [v.copy() for v in cur]
    for j in range(1, nmax + 1):
        nxt = [np.zeros(H + 1, dtype=object) for _ in range(S)]
        for v in nxt:
            v[:] = 0
        for (src, dst, dh, w) in auto.transitions:
            v = cur[src]
            if w == 1:
                nxt[dst] += _shift(v, dh)
            else:
                nxt[dst] += _shift(v, dh) * w
        if end_zero_at is not None:
            # heights that cannot return to zero in time are dropped
            lim = end_zero_at - j
            if lim + 1 <= H:
                for v in nxt:
                    v[max(lim + 1, 0):] = 0
        cur = nxt
        if j in want:
            snaps[j] = [v.copy() for v in cur]
    return snaps


def walk_layers(model: ModelSpec, a: int, steps, *, tilde: bool = False,
                end_zero_at: int | None = None):
    """State-resolved counts after each requested number of steps.

    Returns ``{n: [array over heights for each automaton state]}``.  With
    ``end_zero_at=N`` only the parts of the layers that can still reach
    height zero by step N are kept (used for N_{2n} at h = 0).
    """
    steps = tuple(sorted(set(int(s) for s in steps)))
    mkey = (model.walk_key(), tilde and model.family is Family.S32_CASE2)
    return _layers_cached(mkey, (_walk_model(model), mkey[1]), a, steps, end_zero_at)


def _walk_model(model: ModelSpec) -> ModelSpec:
    """Canonical model for counting (drops Hamiltonian-only parameters)."""
    if model.family is Family.S31:
        return ModelSpec.s31(1 if model.balanced else 0)
    if model.family is Family.S32_CASE2:
        return ModelSpec.s32(2)
    if model.family is Family.S32_CASE1:
        return ModelSpec.s32(1)
    return ModelSpec.s21()


def state_counts(model: ModelSpec, n: int, a: int, tilde: bool = False):
    """``{(h, state_label): count}`` for walks of length n from index a."""
    auto = automaton(model, tilde)
    lay = walk_layers(model, a, [n], tilde=tilde)[n]
    out = {}
    for s, v in enumerate(lay):
        for h, c in enumerate(v):
            if c:
                out[(h, auto.labels[s])] = int(c)
    return out


def count(model: ModelSpec, n: int, h: int, a: int, b: int, tilde: bool = False) -> int:
    """Exact number of valid walks (dynamic programming route)."""
    k = model.k
    if not (1 <= a <= k and 1 <= b <= k) or n < 0 or h < 0:
        raise ValueError("indices out of range")
    if h > n:
        return 0
    auto = automaton(model, tilde)
    lay = walk_layers(model, a, [n], tilde=tilde)[n]
    return int(sum(int(v[h]) for s, v in enumerate(lay) if auto.index[s] == b))


def end_zero_count(model: ModelSpec, N: int, a: int, c: int) -> int:
    """N_{N, a->c} at height 0, pruning heights that cannot come back."""
    auto = automaton(model)
    lay = walk_layers(model, a, [N], end_zero_at=N)[N]
    return int(sum(int(v[0]) for s, v in enumerate(lay) if auto.index[s] == c))


# --------------------------------------------------------------------------
# first-step recursions

def _weights(model: ModelSpec, tilde: bool):
    """(flat, pair, unmatched ascent) weights for the recursion route."""
    fam = model.family
    if fam is Family.S32_CASE1:
        return 2, 4, 2
    if fam is Family.S32_CASE2:
        return 2, 2, (1 if tilde else 2)
    return 1, 1, 1


def recursion_count(model: ModelSpec, n: int, h: int, a: int, b: int, tilde: bool = False) -> int:
    """Count from the convolution recursions obtained by decomposing at the first step."""
    return _Recursions.of(model, tilde).N(n, h, a, b)


class _Recursions:
    _pool: dict = {}

    @classmethod
    def of(cls, model, tilde):
        key = (model.walk_key(), bool(tilde and model.family is Family.S32_CASE2))
        if key not in cls._pool:
            cls._pool[key] = cls(_walk_model(model), key[1])
        return cls._pool[key]

    def __init__(self, model, tilde):
        self.model = model
        self.f, self.p, self.u = _weights(model, tilde)
        self.kind = ("s21" if model.family is Family.S21
                     else "bal" if model.balanced else "s31")
        self.N = lru_cache(maxsize=None)(self._N)
        self.h0 = lru_cache(maxsize=None)(self._h0)

    def _h0(self, n, a, b):
        """Height-zero counts."""
        f, p = self.f, self.p
        if n == 0:
            return int(a == b)
        if self.kind == "s21":
            if (a, b) == (2, 2):
                return f ** n
            if (a, b) == (1, 1):
                return (f * self.h0(n - 1, 1, 1)
                        + p * sum(self.h0(i, 2, 2) * self.h0(n - 2 - i, 1, 1) for i in range(n - 1)))
            return 0
        if (a, b) == (3, 3):
            return f ** n
        if 3 in (a, b):
            return 0
        if self.kind == "bal":
            if a != b:
                return 0
            if a == 1:
                return (f * self.h0(n - 1, 1, 1)
                        + p * sum((self.h0(i, 2, 2) + self.h0(i, 3, 3)) * self.h0(n - 2 - i, 1, 1)
                                  for i in range(n - 1)))
            return (f * self.h0(n - 1, 2, 2)
                    + p * sum(self.h0(i, 3, 3) * self.h0(n - 2 - i, 2, 2) for i in range(n - 1)))
        if (a, b) == (1, 2):
            return self.h0(n, 2, 1)
        conv = lambda x, y: sum(self.h0(i, *x) * self.h0(n - 2 - i, *y) for i in range(n - 1))
        if (a, b) == (1, 1):
            return (f * self.h0(n - 1, 1, 1) + p * conv((2, 2), (1, 1))
                    + p * conv((3, 3), (1, 1)) + p * conv((3, 3), (2, 1)))
        if (a, b) == (2, 2):
            return (f * self.h0(n - 1, 2, 2) + p * conv((3, 3), (2, 2))
                    + p * conv((3, 3), (2, 1)))
        # (2, 1)
        return (f * self.h0(n - 1, 2, 1) + p * conv((3, 3), (2, 1))
                + p * conv((3, 3), (1, 1)))

    def _N(self, n, h, a, b):
        if h == 0:
            return self.h0(n, a, b)
        if n == 0 or a == 3 or h > n:
            return 0
        f, p, u = self.f, self.p, self.u
        if self.kind == "s21":
            if (a, b, h) != (1, 2, 1):
                return 0
            return (f * self.N(n - 1, 1, 1, 2) + u * self.h0(n - 1, 2, 2)
                    + p * sum(self.h0(i, 2, 2) * self.N(n - 2 - i, 1, 1, 2) for i in range(n - 1)))
        delta = u * f ** (n - 1) if (b == 3 and h == 1) else 0
        if a == 1:
            tot = f * self.N(n - 1, h, 1, b) + u * self.N(n - 1, h - 1, 2, b) + delta
            for i in range(n - 1):
                r1 = self.N(n - 2 - i, h, 1, b)
                tot += p * (self.h0(i, 2, 2) + self.h0(i, 3, 3)) * r1
                if self.kind == "s31":
                    tot += p * self.h0(i, 3, 3) * self.N(n - 2 - i, h, 2, b)
            return tot
        # a == 2
        tot = f * self.N(n - 1, h, 2, b) + delta
        for i in range(n - 1):
            tot += p * self.h0(i, 3, 3) * self.N(n - 2 - i, h, 2, b)
            if self.kind == "s31":
                tot += p * self.h0(i, 3, 3) * self.N(n - 2 - i, h, 1, b)
        return tot


# --------------------------------------------------------------------------

def ballot(n: int, h: int) -> int:
    """Dyck prefixes of length n ending at height h."""
    if n < 0 or h < 0 or (n + h) % 2 or h > n:
        return 0
    m = (n + h) // 2
    num = (h + 1) * comb(n, m)
    assert num % (m + 1) == 0
    return num // (m + 1)


def composition_check(model: ModelSpec, n: int, a: int, c: int) -> bool:
    """Gluing two halves at their common midpoint state reproduces N_{2n, a->c}.

    For S32 case 2 the halves are tilde counts weighted by 2^h.
    """
    tilde = model.family is Family.S32_CASE2
    left = state_counts(model, n, a, tilde)
    right = state_counts(model, n, c, tilde)
    tot = 0
    for key, v in left.items():
        w = right.get(key, 0)
        tot += (2 ** key[0] if tilde else 1) * v * w
    return tot == count(model, 2 * n, 0, a, c)


# --------------------------------------------------------------------------

class CountTable:
    """Exact counts keyed by ``(n, h, a, b, tilde)``, with JSON persistence."""

    def __init__(self, model: ModelSpec, entries: dict | None = None):
        self.model = model
        self.entries: dict[tuple[int, int, int, int, bool], int] = dict(entries or {})

    @classmethod
    def build(cls, model: ModelSpec, n_max: int, tilde: bool = False) -> "CountTable":
        tab = cls(model)
        k = model.k
        for a in range(1, k + 1):
            auto = automaton(model, tilde)
            lay = walk_layers(model, a, range(n_max + 1), tilde=tilde)
            for n, arrs in lay.items():
                for b in range(1, k + 1):
                    tot = sum(arrs[s] for s in range(len(arrs)) if auto.index[s] == b)
                    for h in range(n + 1):
                        tab.entries[(n, h, a, b, tilde)] = int(tot[h])
        return tab

    def get(self, n, h, a, b, tilde=False):
        key = (n, h, a, b, tilde)
        if key not in self.entries:
            self.entries[key] = count(self.model, n, h, a, b, tilde)
        return self.entries[key]

    @property
    def n_max(self):
        return max((k[0] for k in self.entries), default=0)

    def to_json(self) -> str:
        rows = [{"n": n, "h": h, "a": a, "b": b, "tilde": t, "value": str(v)}
                for (n, h, a, b, t), v in sorted(self.entries.items())]
        return json.dumps({"model": self.model.walk_key(), "entries": rows}, separators=(",", ":"))

    @classmethod
    def from_json(cls, model: ModelSpec, text: str) -> "CountTable":
        doc = json.loads(text)
        if doc.get("model") != model.walk_key():
            raise ValueError("cache belongs to another model")
        ent = {}
        for r in doc["entries"]:
            v = r["value"]
            if not isinstance(v, str) or not v.isdigit():
                raise ValueError("bad cache value")
            ent[(int(r["n"]), int(r["h"]), int(r["a"]), int(r["b"]), bool(r["tilde"]))] = int(v)
        return cls(model, ent)

    # cache -------------------------------------------------------------
    @staticmethod
    def cache_path(cache_dir, model: ModelSpec, n_max: int, tilde: bool = False) -> Path:
        return Path(cache_dir) / f"{model.walk_key()}{'-tilde' if tilde else ''}_n{n_max}.json"

    @classmethod
    def cached(cls, model: ModelSpec, n_max: int, cache_dir=None, tilde: bool = False) -> "CountTable":
        """Load a table from the cache, rebuilding it if missing or corrupt."""
        cache_dir = cache_dir or os.environ.get("SMW_CACHE_DIR")
        if cache_dir is None:
            return cls.build(model, n_max, tilde)
        path = cls.cache_path(cache_dir, model, n_max, tilde)
        path.parent.mkdir(parents=True, exist_ok=True)
        with FileLock(str(path) + ".lock"):
            if path.exists():
                try:
                    tab = cls.from_json(model, path.read_text())
                    if all((n_max, 0, a, a, tilde) in tab.entries for a in range(1, model.k + 1)):
                        return tab
                except (ValueError, KeyError, TypeError):
                    pass  # corrupt: rebuild
            tab = cls.build(model, n_max, tilde)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(tab.to_json())
            tmp.replace(path)
        return tab
