"""Half-chain Schmidt spectra and entanglement entropies.

Two independent routes:

* counts: exact integer walk counts give the Schmidt weights
  ``p = L * R / N_{2n}`` of the uniform superposition, and the entropy is
  evaluated in high precision at the very end;
* density matrix: an explicit ground state from the Hamiltonian module is
  reshaped across the cut and its singular values are taken.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath as mp
import numpy as np

from .counting import automaton, end_zero_count, state_counts
from .models import Family, ModelSpec, ResourceError
from .series import EULER_GAMMA

__all__ = ["SchmidtEntry", "SchmidtSpectrum", "EntropyPoint", "FitReport",
           "schmidt_from_counts", "entropy_from_counts", "entropy_from_state",
           "ground_state", "asymptotic_entropy", "entropy_scan_and_fit",
           "leading_sqrt_coefficient", "log_law_constant", "area_law_constant",
           "TAIL_BOUND", "DPS"]

DPS = 50
TAIL_BOUND = Fraction(1, 10 ** 30)


@dataclass(frozen=True)
class SchmidtEntry:
    h: int
    b: int            # semigroup index at the midpoint
    label: str        # midpoint automaton state
    p: Fraction
    m: int            # multiplicity (2**h for S32 case 2)


@dataclass
class SchmidtSpectrum:
    model: ModelSpec
    n: int
    sector: tuple[int, int]
    entries: list[SchmidtEntry]
    truncated: Fraction = Fraction(0)   # exact discarded mass

    def total(self) -> Fraction:
        return sum((e.m * e.p for e in self.entries), Fraction(0))


@dataclass
class EntropyPoint:
    n: int
    sector: tuple[int, int]
    S: mp.mpf
    method: str                     # "counts" or "density-matrix"
    flags: tuple[str, ...] = ()

    def __float__(self):
        return float(self.S)


def _sector(sector) -> tuple[int, int]:
    if isinstance(sector, str):
        if len(sector) != 2 or not sector.isdigit():
            raise ValueError(f"bad sector {sector!r}")
        return int(sector[0]), int(sector[1])
    a, c = sector
    return int(a), int(c)


def _counting_model(model: ModelSpec) -> ModelSpec:
    # at mu = 0 the homogeneous-color class carries single-color walks,
    # which are the uncolored S31 walks
    if model.family is Family.S32_CASE2 and model.mu == 0:
        return ModelSpec.s31(0)
    return model


def schmidt_from_counts(model: ModelSpec, n: int, sector, *,
                        cutoff: bool = True) -> SchmidtSpectrum:
    """Schmidt weights of the uniform superposition of length-2n walks a->c.

    Weights are exact.  With ``cutoff`` heights above
    ``min(max height, ceil(12 sqrt n))`` are dropped; the dropped mass is
    stored exactly and must stay below ``TAIL_BOUND``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    a, c = _sector(sector)
    model = _counting_model(model)
    if not (1 <= a <= model.k and 1 <= c <= model.k):
        raise ValueError("sector indices out of range")
    tilde = model.family is Family.S32_CASE2
    total = end_zero_count(model, 2 * n, a, c)
    if total == 0:
        raise ValueError(f"sector {a}{c} has no walks of length {2 * n}")
    left = state_counts(model, n, a, tilde)
    right = left if c == a else state_counts(model, n, c, tilde)
    hmax = max(h for h, _ in left)
    if cutoff:
        hmax = min(hmax, math.ceil(12 * math.sqrt(n)))
    auto = automaton(model, tilde)
    index = dict(zip(auto.labels, auto.index))
    entries, dropped = [], Fraction(0)
    for (h, lab), L in sorted(left.items()):
        R = right.get((h, lab), 0)
        if not R:
            continue
        m = 2 ** h if tilde else 1
        p = Fraction(L * R, total)
        if h > hmax:
            dropped += m * p
            continue
        entries.append(SchmidtEntry(h, index[lab], lab, p, m))
    spec = SchmidtSpectrum(model, n, (a, c), entries, dropped)
    if spec.total() + dropped != 1:
        raise ArithmeticError("Schmidt weights do not sum to one")
    if dropped >= TAIL_BOUND:
        raise ArithmeticError(f"height cutoff drops mass {float(dropped):.3e}")
    return spec


def _entropy(weights: Iterable[tuple[int, Fraction]], dps: int) -> mp.mpf:
    with mp.workdps(dps):
        S = mp.mpf(0)
        for m, p in weights:
            if p:
                q = mp.mpf(p.numerator) / p.denominator
                S -= m * q * mp.log(q)
        return +S


def entropy_from_counts(model: ModelSpec, n: int, sector, *, dps: int = DPS) -> EntropyPoint:
    """``S = -sum m p ln p`` from exact count ratios (n is the half length)."""
    spec = schmidt_from_counts(model, n, sector)
    S = _entropy(((e.m, e.p) for e in spec.entries), dps)
    return EntropyPoint(n, spec.sector, S, "counts")


# ----------------------------------------------------------------------------
# density-matrix route

def ground_state(model: ModelSpec, n: int, sector, representation: str = "reduced",
                 basis: str = "auto"):
    """``(H, class)`` for the ground state of the chain of length 2n in a sector.

    ``basis='full'`` works in the whole local product space, ``'walks'`` in
    the span of valid walks (surviving classes never leave it), and
    ``'auto'`` takes the full space while it fits the budget.
    At mu = 0 (S32 case 2) the class of the all-color-1 walk is returned.
    """
    from .ground import ground_classes, walk_basis_operator
    from .hamiltonian import build_hamiltonian
    a, c = _sector(sector)
    if basis not in ("auto", "full", "walks"):
        raise ValueError(f"unknown basis {basis!r}")
    H = None
    if basis != "walks":
        try:
            H = build_hamiltonian(model, 2 * n, representation)
        except ResourceError:
            if basis == "full":
                raise
    if H is None:
        H = walk_basis_operator(model, 2 * n, representation)
    want = f"{a}{c}"
    scope = "all" if H.sector == "restricted" else "smw"
    classes = [g for g in ground_classes(H, scope=scope) if g.survives and g.label == want]
    if model.family is Family.S32_CASE2 and model.mu == 0:
        classes = [g for g in classes if _homogeneous(H, g)]
    if not classes:
        raise LookupError(f"no ground state in sector {want}")
    if len(classes) == 1:
        return H, classes[0]
    # short colored chains split a sector into several degenerate classes;
    # their uniform sum is the sector state
    members = np.sort(np.concatenate([g.members for g in classes]))
    return H, replace(classes[0], members=members)


def _homogeneous(H, g) -> bool:
    dg = H.digits(H.basis[g.members])
    if H.representation == "reduced":
        return bool(np.any(np.all(dg // 3 == 0, axis=1)))
    return bool(np.any(np.all(dg // 9 == 0, axis=1)))


def entropy_from_state(H, state, cut: int | None = None) -> EntropyPoint:
    """Entropy of the block of the first ``cut`` sites of a state on ``H``.

    ``state`` is a ground class or a ``{basis position: amplitude}`` mapping.
    The default cut is the chain midpoint: the first ``n`` links in the link
    representation, and sites ``0..n`` in the reduced representation.  A
    reduced site only records its index, so the right block also reads the
    semigroup index of the site at the cut (the step basis sees it on both
    sides).  Other cuts are computed but flagged.
    """
    if hasattr(state, "members"):
        pos = np.asarray(state.members, np.int64)
        amp = np.ones(pos.size)
    else:
        items = sorted(state.items())
        pos = np.array([k for k, _ in items], np.int64)
        amp = np.array([float(v) for _, v in items])
    half = H.n // 2
    mid = half + 1 if H.representation == "reduced" else half
    cut = mid if cut is None else cut
    flags = () if (cut == mid and H.n % 2 == 0) else ("non-midpoint cut",)
    dg = H.digits(H.basis[pos])
    d = H.d
    w = d ** np.arange(H.n_sites, dtype=np.int64)
    left = dg[:, :cut] @ w[:cut]
    right = dg[:, cut:] @ w[:H.n_sites - cut]
    if H.representation == "reduced":
        right = right * 3 + dg[:, cut - 1] % 3
    ul, il = np.unique(left, return_inverse=True)
    ur, ir = np.unique(right, return_inverse=True)
    M = np.zeros((ul.size, ur.size))
    np.add.at(M, (il, ir), amp)
    s = np.linalg.svd(M, compute_uv=False)
    p = s ** 2 / np.sum(s ** 2)
    p = p[p > 1e-300]
    S = mp.mpf(float(-np.sum(p * np.log(p))))
    a = str(state.label) if hasattr(state, "label") else "??"
    sector = (int(a[0]), int(a[1])) if a.isdigit() else (0, 0)
    return EntropyPoint(half, sector, S, "density-matrix", flags)


# ----------------------------------------------------------------------------
# closed forms

def _sigma(dps):
    with mp.workdps(dps):
        return (mp.sqrt(2) - 1) / (9 * mp.sqrt(2))


def leading_sqrt_coefficient(dps: int = DPS) -> mp.mpf:
    """``(2 ln 2) sqrt(2 sigma / pi)`` of the square-root law."""
    with mp.workdps(dps):
        return 2 * mp.log(2) * mp.sqrt(2 * _sigma(dps) / mp.pi)


def log_law_constant(dps: int = DPS) -> mp.mpf:
    """Constant of the logarithmic law: ``1/2 ln(2 pi/3) + gamma - 1/2``."""
    with mp.workdps(dps):
        return mp.log(2 * mp.pi / 3) / 2 + mp.mpf(EULER_GAMMA) - mp.mpf(1) / 2


def area_law_constant(dps: int = DPS) -> mp.mpf:
    """Sector-11 entropy of S31 at lambda > 0."""
    with mp.workdps(dps):
        r = mp.sqrt(5)
        return (-(r + 1) * mp.log(r + 1) - (r - 1) * mp.log(r - 1)
                + 2 * r * mp.log(4 * r)) / (2 * r)


def asymptotic_entropy(model: ModelSpec, n: int, sector="11", *, dps: int = DPS) -> mp.mpf:
    """Large-n entropy of the given regime (vanishing corrections dropped)."""
    if n < 1:
        raise ValueError("n must be positive")
    a, c = _sector(sector)
    if (a, c) == (3, 3):
        return mp.mpf(0)
    fam = model.family
    with mp.workdps(dps):
        if fam is Family.S21:
            return mp.log(2)
        if fam is Family.S31 and model.balanced:
            if (a, c) == (1, 1):
                return area_law_constant(dps)
            if (a, c) == (2, 2):
                return mp.log(2)
            raise ValueError(f"sector {a}{c} is empty at lambda > 0")
        half_log = mp.log(n) / 2
        if fam is Family.S31 and not model.phase_two:
            return half_log + log_law_constant(dps)
        if fam is Family.S32_CASE1 or (fam is Family.S32_CASE2 and model.mu == 0):
            return half_log + log_law_constant(dps)
        if fam is Family.S32_CASE2:
            sig = _sigma(dps)
            return (2 * mp.log(2) * mp.sqrt(2 * sig * n / mp.pi) + half_log
                    + mp.log(2 * mp.pi * sig) / 2 + mp.mpf(EULER_GAMMA) - mp.mpf(1) / 2
                    + mp.log(3 / mp.cbrt(2)))
    raise ValueError("no asymptotic entropy for this regime")


# ----------------------------------------------------------------------------
# scans

@dataclass
class FitReport:
    model: str
    sector: str
    regime: str                       # "log", "sqrt" or "area"
    ns: list[int]
    S: list[float]
    leading: float | None
    constant: float | None
    target: float | None
    residuals: list[float] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"model": self.model, "sector": self.sector, "regime": self.regime,
                           "n": self.ns, "S": self.S, "leading": self.leading,
                           "constant": self.constant, "target": self.target,
                           "residuals": self.residuals}, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["model", "sector", "n", "S", "method"])
        for n, s in zip(self.ns, self.S):
            wr.writerow([self.model, self.sector, n, repr(s), "counts"])
        return buf.getvalue()


def _regime(model: ModelSpec) -> str:
    if model.family is Family.S21 or (model.family is Family.S31 and model.balanced):
        return "area"
    if model.family is Family.S32_CASE2 and model.mu > 0:
        return "sqrt"
    return "log"


def _extrapolate(ns: Sequence[int], ys: Sequence[mp.mpf]) -> mp.mpf:
    """Two-point extrapolation of y(n) = y_inf + c / sqrt(n) using the last two points."""
    (n1, n2), (y1, y2) = ns[-2:], ys[-2:]
    u1, u2 = 1 / mp.sqrt(n1), 1 / mp.sqrt(n2)
    return (y2 * u1 - y1 * u2) / (u1 - u2)


def entropy_scan_and_fit(model: ModelSpec, sector="11", ns: Sequence[int] = (200, 500, 1000),
                         *, dps: int = DPS) -> FitReport:
    """Entropies over an n grid plus the scaling-law extrapolation.

    log regime: ``S - ln(n)/2`` is extrapolated in ``1/sqrt n`` to the constant;
    sqrt regime: ``(S - ln(n)/2)/sqrt n`` is extrapolated to the leading coefficient;
    area regime: the last point is compared with the closed constant.
    Residuals are the per-point deviations from the extrapolated form.
    """
    ns = sorted(int(n) for n in ns)
    if len(ns) < 2:
        raise ValueError("need at least two grid points")
    a, c = _sector(sector)
    regime = _regime(model)
    with mp.workdps(dps):
        S = [entropy_from_counts(model, n, (a, c), dps=dps).S for n in ns]
        leading = constant = target = None
        res: list[float] = []
        if regime == "log":
            ys = [s - mp.log(n) / 2 for s, n in zip(S, ns)]
            constant = _extrapolate(ns, ys)
            slope = (ys[-1] - constant) * mp.sqrt(ns[-1])
            res = [float(y - constant - slope / mp.sqrt(n)) for y, n in zip(ys, ns)]
            leading, target = mp.mpf(1) / 2, log_law_constant(dps)
        elif regime == "sqrt":
            ys = [(s - mp.log(n) / 2) / mp.sqrt(n) for s, n in zip(S, ns)]
            leading = _extrapolate(ns, ys)
            slope = (ys[-1] - leading) * mp.sqrt(ns[-1])
            res = [float(y - leading - slope / mp.sqrt(n)) for y, n in zip(ys, ns)]
            target = leading_sqrt_coefficient(dps)
        else:
            target = asymptotic_entropy(model, ns[-1], (a, c), dps=dps)
            constant = S[-1]
            res = [float(s - target) for s in S]
    f = lambda v: None if v is None else float(v)
    return FitReport(model.key(), f"{a}{c}", regime, ns, [float(s) for s in S],
                     f(leading), f(constant), f(target), res)
