"""Acceptance checks shared by ``smw verify`` and the test suite.

Each check returns a :class:`CheckResult`; ``quick=True`` shrinks the
parameter ranges for the smoke suite.  Checks whose literal target is known
to be unattainable keep the literal target and have a ``-corrected``
companion that tests the derivable value instead.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath as mp

from .counting import ballot, composition_check, count, recursion_count
from .entangle import (area_law_constant, asymptotic_entropy, entropy_from_counts,
                       entropy_from_state, entropy_scan_and_fit, ground_state,
                       leading_sqrt_coefficient, log_law_constant, schmidt_from_counts)
from .ground import (addendum_regression, ground_classes, kernel_dimension, smw_classes,
                     verify_zero_energy)
from .hamiltonian import build_hamiltonian
from .models import Family, ModelSpec, Topology
from .series import asymptotic_ratio_scan, catalan_series, closed_form
from .walks import brute_force_table, max_height

__all__ = ["CheckResult", "CHECKS", "SUITES", "run_check", "REGIMES", "GSD_CAPS"]


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}: {self.detail}"


REGIMES = {
    "s21": ModelSpec.s21(),
    "s31": ModelSpec.s31(0),
    "s31-bal": ModelSpec.s31(1),
    "s32c1": ModelSpec.s32(1),
    "s32c2": ModelSpec.s32(2),
}

# largest chain length per regime for exact GSD runs
GSD_CAPS = {"s21": 12, "s31": 12, "s31-bal": 12, "s32c1": 7, "s32c2": 7, "ring": 12}


def _pairs(k):
    return [(a, b) for a in range(1, k + 1) for b in range(1, k + 1)]


# ----------------------------------------------------------------------------
# counting

def count_triple(quick=False) -> CheckResult:
    nmax = 7 if quick else 10
    tested = 0
    for key, m in REGIMES.items():
        tildes = (False, True) if m.family is Family.S32_CASE2 else (False,)
        for tilde in tildes:
            series = {(f"{a}{b}", h): closed_form(m, f"{a}{b}", h, order=nmax, tilde=tilde).coeffs
                      for a, b in _pairs(m.k) for h in range(nmax + 1)}
            for n in range(1, nmax + 1):
                full, tl = brute_force_table(m, n)
                brute = tl if tilde else full
                for a, b in _pairs(m.k):
                    for h in range(n + 1):
                        bf = int(brute[a - 1, h, b - 1])
                        vals = (count(m, n, h, a, b, tilde), recursion_count(m, n, h, a, b, tilde),
                                int(series[(f"{a}{b}", h)][n]))
                        if any(v != bf for v in vals):
                            return CheckResult("1 count triple agreement", False,
                                               f"{key} tilde={tilde} n={n} h={h} {a}->{b}: "
                                               f"brute {bf}, dp/rec/series {vals}")
                        tested += 1
    return CheckResult("1 count triple agreement", True, f"{tested} (model, n, h, a, b) points, n<={nmax}")


def count_spot_values(quick=False) -> CheckResult:
    s31, s21, c1, c2 = ModelSpec.s31(0), ModelSpec.s21(), ModelSpec.s32(1), ModelSpec.s32(2)
    fails = []
    if count(s31, 3, 0, 1, 2) != 3:
        fails.append("N_{3,1->2}")
    if count(s31, 3, 1, 1, 2) != 6:
        fails.append("N^(1)_{3,1->2}")
    if any(count(s31, n, 0, 3, 3) != 1 for n in range(1, 21)):
        fails.append("N_{n,3->3}")
    if any(count(s21, n, 0, 1, 1) != 2 ** (n - 1) for n in range(1, 21)):
        fails.append("S21 N_{n,1->1}")
    if count(c2, 4, 2, 1, 2) != 8 or count(c2, 4, 2, 1, 2, tilde=True) != 2:
        fails.append("S32 case 2 N^(2)_{4,1->2}")
    for n in range(1, 11):
        for a, b in _pairs(3):
            for h in range(n + 1):
                if count(c1, n, h, a, b) != 2 ** n * count(s31, n, h, a, b):
                    fails.append(f"case 1 scaling n={n}")
    ok = not fails
    return CheckResult("2 count spot values", ok, "all match" if ok else ", ".join(fails[:5]))


def dyck_identity(quick=False) -> CheckResult:
    K = 40
    N = catalan_series(K)
    for h in range(K + 1):
        ser = (N ** (h + 1)).mul_x(h).truncate(K)
        for n in range(K + 1):
            if ser.coeffs[n] != ballot(n, h):
                return CheckResult("3 Dyck identity", False, f"n={n} h={h}")
    return CheckResult("3 Dyck identity", True, "n,h <= 40")


def composition_laws(quick=False) -> CheckResult:
    nmax = 6 if quick else 10
    for key, m in REGIMES.items():
        for n in range(1, nmax + 1):
            for a, c in _pairs(m.k):
                if not composition_check(m, n, a, c):
                    return CheckResult("4 composition laws", False, f"{key} n={n} {a}{c}")
    return CheckResult("4 composition laws", True, f"all regimes and sectors, n<={nmax}")


# ----------------------------------------------------------------------------
# Hamiltonian

def _gsd_models():
    return [("s31", ModelSpec.s31(0), 5), ("s31-bal", ModelSpec.s31(1), 3), ("s21", ModelSpec.s21(), 2),
            ("s32c1", ModelSpec.s32(1), 5), ("s32c2", ModelSpec.s32(2), 5),
            ("ring", ModelSpec.s31(0, topology=Topology.RING), 2)]


def gsd_table(quick=False) -> CheckResult:
    rows = []
    for key, m, want in _gsd_models():
        top = min(GSD_CAPS[key], 6) if quick else GSD_CAPS[key]
        for n in range(4, top + 1):
            H = build_hamiltonian(m, n)
            ker = kernel_dimension(H, "exact").dim
            live = sum(g.survives for g in ground_classes(H, scope="all"))
            if not (ker == live == want):
                return CheckResult("5 GSD table", False, f"{key} n={n}: kernel {ker}, classes {live}, want {want}")
            rows.append(f"{key}:{n}")
    return CheckResult("5 GSD table", True, f"{len(rows)} (model, n) rows, kernel = classes = target")


def frustration_free(quick=False) -> CheckResult:
    """Zero ground energy: a nontrivial exact kernel of the PSD operator, and
    every surviving class killed by every projector row (integer arithmetic);
    up to n = 6 the full rational product ``H psi`` is also formed."""
    checked = 0
    for key, m, _ in _gsd_models():
        top = min(GSD_CAPS[key], 6) if quick else GSD_CAPS[key]
        for n in range(4, top + 1):
            H = build_hamiltonian(m, n)
            if kernel_dimension(H, "exact").dim == 0:
                return CheckResult("6 frustration-freeness", False, f"{key} n={n}: no zero mode")
            live = [g for g in ground_classes(H, scope="all") if g.survives]
            if not all(g.annihilated for g in live):
                return CheckResult("6 frustration-freeness", False, f"{key} n={n}")
            if n <= 6 and not all(verify_zero_energy(H, g) for g in live):
                return CheckResult("6 frustration-freeness", False, f"{key} n={n}: H psi != 0")
            checked += len(live)
    return CheckResult("6 frustration-freeness", True, f"{checked} class states annihilated exactly")


def addendum(quick=False) -> CheckResult:
    rep = addendum_regression(6)
    orig, corr = rep["original"], rep["corrected"]
    z_orig = all(v for m in orig.values() for v in m["exhibit_zero_energy"].values())
    z_corr = not any(v for m in corr.values() for v in m["exhibit_zero_energy"].values())
    ok = z_orig and orig[6]["gsd"] > 5 and corr[6]["gsd"] == 5 and z_corr
    return CheckResult("7 boundary-correction regression", ok,
                       f"original GSD {orig[6]['gsd']}, corrected GSD {corr[6]['gsd']}, "
                       f"exhibited paths zero-energy only with the original terms: {z_orig and z_corr}")


# ----------------------------------------------------------------------------
# entanglement

def entropy_methods(quick=False) -> CheckResult:
    cases = [(ModelSpec.s31(0), 6), (ModelSpec.s31(1), 6), (ModelSpec.s21(), 6),
             (ModelSpec.s32(1), 4), (ModelSpec.s32(2), 4)]
    worst, n_done = 0.0, 0
    for m, nmax in cases:
        nmax = min(nmax, 3) if quick else nmax
        for sec in ("11", "22", "12", "33"):
            for n in range(1, nmax + 1):
                try:
                    S_c = entropy_from_counts(m, n, sec).S
                except ValueError:
                    continue                      # empty sector
                H, g = ground_state(m, n, sec)
                S_d = entropy_from_state(H, g).S
                worst = max(worst, float(abs(S_c - S_d)))
                n_done += 1
    ok = worst < 1e-12
    return CheckResult("8 entropy method agreement", ok, f"{n_done} points, max |dS| = {worst:.2e}")


def closed_constants(quick=False) -> CheckResult:
    s21 = schmidt_from_counts(ModelSpec.s21(), 8, "11")
    half = [e.p for e in s21.entries] == [Fraction(1, 2)] * 2
    d11 = abs(entropy_from_counts(ModelSpec.s31(1), 40, "11").S - area_law_constant())
    with mp.workdps(50):
        d22 = abs(entropy_from_counts(ModelSpec.s31(1), 40, "22").S - mp.log(2))
    ok = half and d11 < 1e-8 and d22 < 1e-40
    return CheckResult("9 closed-form constants", ok,
                       f"S21 spectrum {{1/2,1/2}}: {half}; |S11(40)-const| = {float(d11):.1e}; "
                       f"|S22(40)-ln2| = {float(d22):.1e}")


LOG_TARGET_LITERAL = 0.8166


def _log_fits():
    return {sec: entropy_scan_and_fit(ModelSpec.s31(0), sec, (200, 500, 1000)) for sec in ("11", "12", "21", "22")}


def log_law(quick=False) -> CheckResult:
    """Literal target 0.8166 +- 0.03 for the extrapolated constant."""
    fits = _log_fits()
    cs = {s: f.constant for s, f in fits.items()}
    spread = max(cs.values()) - min(cs.values())
    ok = abs(cs["11"] - LOG_TARGET_LITERAL) <= 0.03 and spread <= 0.03
    return CheckResult("10 log law (literal 0.8166)", ok,
                       f"constant {cs['11']:.4f} vs {LOG_TARGET_LITERAL} +- 0.03; sector spread {spread:.4f}")


def log_law_corrected(quick=False) -> CheckResult:
    """Same extrapolation against the evaluated constant 1/2 ln(2 pi/3) + gamma - 1/2."""
    fits = _log_fits()
    target = float(log_law_constant())
    cs = {s: f.constant for s, f in fits.items()}
    spread = max(cs.values()) - min(cs.values())
    ok = all(abs(c - target) <= 0.03 for c in cs.values()) and spread <= 0.03
    return CheckResult("10 log law (corrected constant)", ok,
                       f"constants {', '.join(f'{s}:{c:.4f}' for s, c in cs.items())} vs {target:.4f} +- 0.03")


def sqrt_law(quick=False) -> CheckResult:
    m = ModelSpec.s32(2)
    fit = entropy_scan_and_fit(m, "11", (200, 500, 1000))
    target = float(leading_sqrt_coefficient())
    rel = abs(fit.leading - target) / target
    full = abs(float(asymptotic_entropy(m, 1000)) - fit.S[-1])
    ok = rel <= 0.10 and full <= 0.1
    return CheckResult("11 square-root law", ok,
                       f"leading {fit.leading:.5f} vs {target:.5f} ({100 * rel:.2f}%); "
                       f"|S(1000) - prediction| = {full:.4f}")


def large_order(quick=False) -> CheckResult:
    r31 = float(asymptotic_ratio_scan(ModelSpec.s31(0), "11", [1000])[0][3])
    r32 = float(asymptotic_ratio_scan(ModelSpec.s32(2), "11", [500])[0][3])
    ok = 0.95 <= r31 <= 1.05 and 0.9 <= r32 <= 1.1
    return CheckResult("12 large-order asymptotics", ok, f"S31 ratio {r31:.5f} at n=1000; S32 ratio {r32:.5f} at n=500")


def phase_structure(quick=False) -> CheckResult:
    notes, ok = [], True
    # lambda axis: GSD 3 (area law) at lambda > 0, GSD 5 (log law) at lambda = 0
    g_pos = kernel_dimension(build_hamiltonian(ModelSpec.s31(1), 6), "exact").dim
    g_zero = kernel_dimension(build_hamiltonian(ModelSpec.s31(0), 6), "exact").dim
    ok &= (g_pos, g_zero) == (3, 5)
    notes.append(f"GSD lambda>0 {g_pos}, lambda=0 {g_zero}")
    # phase II: growing GSD
    g2 = [kernel_dimension(build_hamiltonian(ModelSpec.s31_phase(0, 0), n), "exact").dim for n in range(4, 8)]
    ok &= all(x < y for x, y in zip(g2, g2[1:]))
    notes.append(f"phase II GSD {g2}")
    # entropy regimes
    ns = (50, 100) if quick else (200, 500, 1000)
    area = entropy_scan_and_fit(ModelSpec.s31(1), "11", (10, 20, 40))
    ok &= abs(area.residuals[-1]) < 1e-8
    lg = entropy_scan_and_fit(ModelSpec.s31(0), "11", ns)
    ok &= abs(lg.constant - float(log_law_constant())) < 0.03
    mu0 = entropy_scan_and_fit(ModelSpec.s32(2, mu=0), "11", ns)
    ok &= abs(mu0.constant - float(log_law_constant())) < 0.03
    sq = entropy_scan_and_fit(ModelSpec.s32(2), "11", ns)
    ok &= abs(sq.leading - float(leading_sqrt_coefficient())) / float(leading_sqrt_coefficient()) < 0.1
    notes.append(f"area {area.S[-1]:.5f}, log const {lg.constant:.4f}, mu=0 const {mu0.constant:.4f}, "
                 f"sqrt lead {sq.leading:.4f}")
    # mu = 0 class growth
    top = 7 if quick else 8
    counts = [sum(g.survives for g in smw_classes(ModelSpec.s32(2, mu=0), n)) for n in range(4, top + 1)]
    ratios = [y / x for x, y in zip(counts, counts[1:])]
    ok &= all(2 < r < 4.83 for r in ratios)
    notes.append("mu=0 growth " + ", ".join(f"{r:.3f}" for r in ratios))
    return CheckResult("13 phase structure", bool(ok), "; ".join(notes))


def _height_targets(corrected: bool):
    s31, bal, s21 = ModelSpec.s31(0), ModelSpec.s31(1), ModelSpec.s21()
    for n in range(1, 11):
        yield "s31", n, max_height(s31, n), (n - 2) // 3 + 2
        yield "s31-bal", n, max_height(bal, n), min(n, 2) if corrected else 2
        yield "s21", n, max_height(s21, n), 1


def height_bound(quick=False) -> CheckResult:
    """Literal targets: floor((n-2)/3)+2, 2 and 1 for n = 1..10."""
    bad = [f"{k} n={n}: {got} != {want}" for k, n, got, want in _height_targets(False) if got != want]
    return CheckResult("14 height bound (literal)", not bad, "; ".join(bad) if bad else "n = 1..10")


def height_bound_corrected(quick=False) -> CheckResult:
    """A single step cannot climb twice: the lambda > 0 bound is min(n, 2)."""
    bad = [f"{k} n={n}: {got} != {want}" for k, n, got, want in _height_targets(True) if got != want]
    return CheckResult("14 height bound (min(n, 2) at lambda > 0)", not bad, "; ".join(bad) if bad else "n = 1..10")


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "1": count_triple, "2": count_spot_values, "3": dyck_identity, "4": composition_laws,
    "5": gsd_table, "6": frustration_free, "7": addendum, "8": entropy_methods,
    "9": closed_constants, "10": log_law, "10c": log_law_corrected, "11": sqrt_law,
    "12": large_order, "13": phase_structure, "14": height_bound, "14c": height_bound_corrected,
}

# the smoke suite skips the two literal targets that are known to be off
SUITES = {
    "smoke": ["1", "2", "3", "4", "5", "6", "7", "8", "9", "12", "14c"],
    "full": list(CHECKS),
}


def run_check(key: str, quick: bool = False) -> CheckResult:
    t = time.perf_counter()
    try:
        res = CHECKS[key](quick=quick)
    except Exception as exc:   # a crash is a failure with its message as counterexample
        res = CheckResult(CHECKS[key].__name__, False, f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t
    return res
