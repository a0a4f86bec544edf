"""Ground spaces: kernel dimension and move-closure equivalence classes.

Since ``H = sum_t w_t v_t v_t^T / |v_t|^2`` with positive weights, the
kernel of ``H`` is the common orthogonal complement of all vectors
``v_t (x) |rest>``.  The exact kernel is therefore computed from the
constraint rows directly:

* two-entry rows ``|s> - |s'>`` identify basis states (union-find);
* one-entry rows kill their state and its whole component;
* remaining rows are rewritten on surviving components and their rank is
  taken by Fraction elimination.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import eigsh

from .hamiltonian import DENSE_RATIONAL_LIMIT, SparseOperator, build_hamiltonian
from .models import Boundary, ModelSpec, ResourceError, Topology
from .walks import height_zero_codes

__all__ = ["kernel_dimension", "KernelResult", "GroundClass", "ground_classes",
           "verify_zero_energy", "class_state", "addendum_regression", "phase_scan",
           "ADDENDUM_PATHS", "SpectralGapError", "rank_exact", "smw_classes", "OpenClassError"]


class SpectralGapError(RuntimeError):
    """Float kernel count is ambiguous: a Ritz value sits in the rejection band."""


@dataclass(frozen=True)
class KernelResult:
    dim: int
    mode: str
    gap: float | None = None        # smallest eigenvalue above the threshold (float mode)

    def __int__(self):
        return self.dim


def _constraints(H: SparseOperator):
    """Equality edges, killed positions and generic rows."""
    eq_a, eq_b, dead = [], [], []
    generic = []
    for t in H.active_terms:
        for coeffs, mat in H.vector_rows(t):
            m = len(coeffs)
            if m == 1:
                p = mat[:, 0]
                dead.append(p[p >= 0])
            elif m == 2 and coeffs[0] == -coeffs[1]:
                ok = (mat[:, 0] >= 0) & (mat[:, 1] >= 0)
                eq_a.append(mat[ok, 0])
                eq_b.append(mat[ok, 1])
                # a row whose partner leaves the basis pins the state to zero
                for c in (0, 1):
                    lone = (mat[:, c] >= 0) & (mat[:, 1 - c] < 0)
                    dead.append(mat[lone, c])
            else:
                generic.append((coeffs, mat))
    cat = lambda xs: np.concatenate(xs) if xs else np.empty(0, np.int64)
    return cat(eq_a), cat(eq_b), cat(dead), generic


def rank_exact(rows) -> int:
    """Rank of sparse rows ``{col: Fraction}`` by Gaussian elimination."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v}
        while r:
            col = min(r)
            if col in pivots:
                prow = pivots[col]
                f = r[col]
                for k, v in prow.items():
                    nv = r.get(k, 0) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
            else:
                inv = 1 / r[col]
                pivots[col] = {k: v * inv for k, v in r.items()}
                rank += 1
                break
    return rank


def _components(H: SparseOperator, a, b):
    N = H.dim
    g = sp.coo_matrix((np.ones(a.size, np.int8), (a, b)), shape=(N, N))
    return connected_components(g, directed=False)


def kernel_exact(H: SparseOperator) -> int:
    a, b, dead, generic = _constraints(H)
    ncomp, lab = _components(H, a, b)
    alive = np.ones(ncomp, bool)
    alive[lab[dead]] = False
    rows = set()
    for coeffs, mat in generic:
        valid = mat >= 0
        comp = np.where(valid, lab[np.maximum(mat, 0)], -1)
        for crow, vrow in zip(comp, valid):
            acc: dict = {}
            for c, ok, co in zip(crow, vrow, coeffs):
                if ok and alive[c]:
                    acc[int(c)] = acc.get(int(c), 0) + int(co)
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                g = np.gcd.reduce(np.abs(list(acc.values())))
                sgn = 1 if acc[min(acc)] > 0 else -1
                rows.add(tuple(sorted((k, sgn * v // g) for k, v in acc.items())))
    r = rank_exact(dict(row) for row in sorted(rows))
    return int(alive.sum()) - r


def kernel_float(H: SparseOperator, k: int = 12, tol: float = 1e-10, band: float = 1e-6):
    """Count eigenvalues below ``tol`` with shift-invert Lanczos."""
    M = H.to_scipy()
    N = H.dim
    if N <= 600:
        ev = np.linalg.eigvalsh(M.toarray())
    else:
        while True:
            kk = min(k, N - 2)
            ev = eigsh(M, k=kk, sigma=-1e-3, which="LM", return_eigenvectors=False)
            ev = np.sort(ev)
            if (ev < tol).sum() < kk or kk == N - 2:
                break
            k *= 2
    zero = int((ev < tol).sum())
    above = ev[ev >= tol]
    gap = float(above.min()) if above.size else None
    if gap is not None and gap < band:
        raise SpectralGapError(f"eigenvalue {gap:.3e} inside the rejection band")
    return zero, gap


def kernel_dimension(H: SparseOperator, mode: str = "auto") -> KernelResult:
    """Dimension of ``ker H``.

    ``mode='exact'`` uses the constraint elimination above, ``'float'`` a
    shift-invert eigensolver; ``'auto'`` picks exact up to the rational
    dimension limit.
    """
    if mode == "auto":
        mode = "exact" if H.dim <= DENSE_RATIONAL_LIMIT else "float"
    if mode == "exact":
        return KernelResult(kernel_exact(H), "exact")
    if mode == "float":
        z, gap = kernel_float(H)
        return KernelResult(z, "float", gap)
    raise ValueError(mode)


# ----------------------------------------------------------------------------
# move classes

@dataclass
class GroundClass:
    members: np.ndarray          # basis positions, sorted
    survives: bool
    label: str
    penalized: bool
    annihilated: bool

    def __len__(self):
        return int(self.members.size)


class OpenClassError(RuntimeError):
    """A class reaches states outside a restricted basis."""


def _move_graph(H: SparseOperator):
    """Pairwise moves from every multi-entry vector, plus penalized positions
    and positions with a move leaving the basis."""
    ra, rb, pen, esc = [], [], [], []
    for t in H.active_terms:
        for coeffs, mat in H.vector_rows(t):
            m = len(coeffs)
            if m == 1:
                p = mat[:, 0]
                pen.append(p[p >= 0])
                continue
            for i in range(m):
                for j in range(i + 1, m):
                    ok = (mat[:, i] >= 0) & (mat[:, j] >= 0)
                    ra.append(mat[ok, i])
                    rb.append(mat[ok, j])
                    for x, y in ((i, j), (j, i)):
                        esc.append(mat[(mat[:, x] >= 0) & (mat[:, y] < 0), x])
    cat = lambda xs: np.concatenate(xs) if xs else np.empty(0, np.int64)
    return cat(ra), cat(rb), cat(pen), cat(esc)


def _annihilation_by_component(H: SparseOperator, lab: np.ndarray, ncomp: int) -> np.ndarray:
    """For every component, whether its uniform superposition is killed by all rows."""
    ok = np.ones(ncomp, bool)
    for t in H.active_terms:
        for coeffs, mat in H.vector_rows(t):
            R, m = mat.shape
            if R == 0:
                continue
            rid = np.repeat(np.arange(R, dtype=np.int64), m)
            flat = mat.ravel()
            cf = np.tile(coeffs, R)
            keep = flat >= 0
            comp = lab[flat[keep]]
            key = rid[keep] * ncomp + comp
            uk, inv = np.unique(key, return_inverse=True)
            sums = np.zeros(uk.size, np.int64)
            np.add.at(sums, inv, cf[keep])
            ok[(uk[sums != 0] % ncomp)] = False
    return ok


def annihilates(H: SparseOperator, members: np.ndarray) -> bool:
    """Every term row kills the uniform superposition over ``members`` (integer arithmetic)."""
    ind = np.zeros(H.dim + 1, np.int64)
    ind[members] = 1                      # index -1 maps to the trailing zero
    for t in H.active_terms:
        for coeffs, mat in H.vector_rows(t):
            if mat.shape[0] == 0:
                continue
            vals = ind[np.where(mat >= 0, mat, H.dim)]
            if np.any(vals @ coeffs):
                return False
    return True


def _seed_codes(H: SparseOperator):
    """Basis codes of all valid height-zero walks of the model."""
    return height_zero_codes(H.model, H.n, H.d, link=H.representation == "link")


def _label(H: SparseOperator, pos: int) -> str:
    dg = H.digits(H.basis[[pos]])[0]
    sp_ = H.space
    if H.model.topology is Topology.RING:
        return "ring"
    if H.representation == "reduced":
        return f"{sp_.index_of(int(dg[0]))[0]}{sp_.index_of(int(dg[-1]))[0]}"
    return f"{sp_.index_of(int(dg[0]))[0]}{sp_.index_of(int(dg[-1]))[1]}"


def ground_classes(H: SparseOperator, scope: str = "smw", extra_seeds=()) -> list[GroundClass]:
    """Equivalence classes under the local moves.

    ``scope='smw'`` returns the classes containing a valid walk (and any
    ``extra_seeds`` codes); ``scope='all'`` returns every class of the basis.
    """
    a, b, pen, esc = _move_graph(H)
    ncomp, lab = _components(H, a, b)
    bad = np.zeros(ncomp, bool)
    bad[lab[pen]] = True
    leaky = np.zeros(ncomp, bool)
    leaky[lab[esc]] = True
    if scope == "all":
        chosen = np.arange(ncomp)
    else:
        if H.model.topology is Topology.RING:
            seeds = H.basis  # ring: every state in the sector is a candidate
        else:
            seeds = _seed_codes(H)
        seeds = np.concatenate([seeds, np.asarray(list(extra_seeds), np.int64)])
        pos = H.positions(seeds)
        chosen = np.unique(lab[pos[pos >= 0]])
    order = np.argsort(lab, kind="stable")
    starts = np.searchsorted(lab[order], np.arange(ncomp + 1))
    killed = _annihilation_by_component(H, lab, ncomp)
    out = []
    for c in chosen:
        if leaky[c] and not bad[c]:
            raise OpenClassError("a class leaves the restricted basis")
        members = np.sort(order[starts[c]:starts[c + 1]])
        penalized = bool(bad[c])
        ann = bool(killed[c])
        out.append(GroundClass(members, ann and not penalized, _label(H, int(members[0])),
                               penalized, ann))
    if scope != "all" and H.model.topology is Topology.RING:
        out = [g for g in out if g.survives]
    out.sort(key=lambda g: (not g.survives, g.label, int(g.members[0])))
    return out


def smw_classes(model: ModelSpec, n: int, representation: str = "reduced") -> list[GroundClass]:
    """Classes of valid walks computed on the valid-walk set alone.

    Penalized classes may leak out of the set (that only confirms they
    are lifted); a surviving class that leaks raises ``OpenClassError``.
    """
    return ground_classes(walk_basis_operator(model, n, representation), scope="all")


def walk_basis_operator(model: ModelSpec, n: int, representation: str = "reduced") -> SparseOperator:
    """The Hamiltonian restricted to the span of valid height-zero walks."""
    probe = build_hamiltonian(model, n, representation, basis_codes=[0])
    return build_hamiltonian(model, n, representation, basis_codes=_seed_codes(probe))


def class_state(g: GroundClass) -> dict:
    return {int(p): Fraction(1) for p in g.members}


def verify_zero_energy(H: SparseOperator, g: GroundClass) -> bool:
    """``H psi == 0`` exactly for the uniform superposition over the class."""
    return not H.apply_exact(class_state(g))


# ----------------------------------------------------------------------------
# reports

# walk index sequences exhibited as spurious ground states of the original boundaries
ADDENDUM_PATHS = ((1, 3, 2, 1, 2, 3, 1), (1, 3, 2, 1, 3, 2, 1), (2, 3, 1, 2, 3, 1))


def _code(seq, d=3):
    return sum((a - 1) * d ** j for j, a in enumerate(seq))


def addendum_regression(n: int = 6) -> dict:
    """Original versus corrected boundaries for S31 at lambda = 0."""
    if n < 5:
        raise ValueError("n must be at least 5")
    rep = {"n": n}
    for bnd in (Boundary.ORIGINAL, Boundary.CORRECTED):
        out = {}
        for m in sorted({n, 5}):
            H = build_hamiltonian(ModelSpec.s31(0, boundary=bnd), m)
            classes = ground_classes(H, scope="all")
            live = [g for g in classes if g.survives]
            smw = {int(p) for p in H.positions(_seed_codes(H)) if p >= 0}
            residual = [g.label for g in live if not smw.intersection(g.members.tolist())]
            paths = {}
            for seq in ADDENDUM_PATHS:
                if len(seq) - 1 != m:
                    continue
                pos = int(H.positions(np.array([_code(seq)]))[0])
                g = next(g for g in classes if pos in set(g.members.tolist()))
                paths["".join(map(str, seq))] = g.survives
            out[m] = {"gsd": int(kernel_dimension(H, "exact")), "classes": len(live),
                      "non_smw_classes": residual, "exhibit_zero_energy": paths}
        rep[bnd.value] = out
    return rep


def phase_scan(points, ns) -> list[dict]:
    """GSD and class counts over a parameter grid.

    ``points`` are ModelSpecs and ``ns`` chain lengths.  ``classes`` counts
    surviving classes of valid walks; ``gsd`` is the exact kernel dimension
    of the full operator, or None when that operator exceeds the budget.
    ``ratio`` is the class-count growth between consecutive lengths.
    """
    rows = []
    for m in points:
        prev = None
        for n in ns:
            live = sum(g.survives for g in smw_classes(m, n))
            try:
                gsd = kernel_dimension(build_hamiltonian(m, n), "exact").dim
            except ResourceError:
                gsd = None
            rows.append({"model": m.key(), "n": n, "gsd": gsd, "classes": live,
                         "ratio": None if prev is None else live / prev})
            prev = live
    return rows
