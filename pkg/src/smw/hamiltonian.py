"""Frustration-free Hamiltonians for SMW spin chains.

Every local term is a weighted sum of rank-one projectors
``v v^T / |v|^2`` onto integer vectors ``v`` supported on a window of
consecutive sites.  Two representations are built:

``reduced``
    one site per walk vertex (n + 1 sites); the site label is the
    semigroup index, and for S32 also the color of the incoming link.
``link``
    one site per step (n sites) carrying the semigroup element itself;
    disconnected neighbours are penalized.

Basis states are integer codes ``sum_j label_j d^j`` (site 0 least
significant).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .models import Boundary, Family, ModelSpec, ResourceError, Topology

__all__ = ["ProjectorTerm", "LocalSpace", "local_space", "hamiltonian_terms",
           "SparseOperator", "build_hamiltonian", "boundary_perturbation",
           "BUDGET", "DENSE_RATIONAL_LIMIT"]

BUDGET = {("reduced", 3): 3 ** 13, ("reduced", 2): 3 ** 13, ("reduced", 6): 6 ** 8,
          ("link", 9): 9 ** 6, ("link", 4): 9 ** 6, ("link", 18): 18 ** 4}
DENSE_RATIONAL_LIMIT = 20_000


@dataclass(frozen=True)
class ProjectorTerm:
    """``weight * sum_v v v^T/|v|^2`` on ``sites``; vectors have disjoint supports."""

    name: str
    sites: tuple[int, ...]
    gram: tuple[tuple[tuple[tuple[int, ...], int], ...], ...]
    weight: Fraction = Fraction(1)

    def local_matrix(self, d: int):
        """Dense rational matrix of the unweighted block on ``d^len(sites)`` configs."""
        w = len(self.sites)
        D = d ** w
        M = [[Fraction(0)] * D for _ in range(D)]
        for vec in self.gram:
            nrm = sum(c * c for _, c in vec)
            for ci, a in vec:
                for cj, b in vec:
                    M[_lcode(ci, d)][_lcode(cj, d)] += Fraction(a * b, nrm)
        return M


def _lcode(cfg, d):
    return sum(l * d ** i for i, l in enumerate(cfg))


def _term(name, sites, vecs, weight=1):
    gram = tuple(tuple(sorted(v.items())) for v in vecs)
    return ProjectorTerm(name, tuple(sites), gram, Fraction(weight))


# ----------------------------------------------------------------------------
# local spaces

@dataclass(frozen=True)
class LocalSpace:
    """Label conventions of one site."""

    representation: str
    family: Family
    d: int

    def reduced(self, a, s=1):
        if self.family in (Family.S32_CASE1, Family.S32_CASE2):
            return (a - 1) + 3 * (s - 1)
        return a - 1

    def link(self, a, b, s=1):
        k = 2 if self.family is Family.S21 else 3
        base = k * (a - 1) + (b - 1)
        return base + 9 * (s - 1) if self.d == 18 else base

    def index_of(self, label):
        """(index, color) for reduced labels; (a, b, color) for link labels."""
        colored = self.family in (Family.S32_CASE1, Family.S32_CASE2)
        if self.representation == "reduced":
            return (label % 3 + 1, label // 3 + 1) if colored else (label + 1, None)
        k = 2 if self.family is Family.S21 else 3
        s = label // 9 + 1 if colored else None
        base = label % 9 if colored else label
        return (base // k + 1, base % k + 1, s)

    def render(self, label):
        t = self.index_of(label)
        if self.representation == "reduced":
            a, s = t
            return f"{a}" if s is None else f"{a}^{s}"
        a, b, s = t
        return f"x[{a},{b}]" if s is None else f"x^{s}[{a},{b}]"


def local_space(model: ModelSpec, representation: str) -> LocalSpace:
    k = model.k
    if representation == "reduced":
        d = 6 if model.colored else k
    elif representation == "link":
        d = 18 if model.colored else k * k
    else:
        raise ValueError(f"unknown representation {representation!r}")
    return LocalSpace(representation, model.family, d)


# ----------------------------------------------------------------------------
# reduced-site terms

def _reduced_bulk_uncolored(model, S, R):
    fam = model.family
    if fam is Family.S21:
        return [_term("U", S, [{(R(1), R(2), R(2)): 1, (R(1), R(1), R(2)): -1}]),
                _term("D", S, [{(R(2), R(1), R(1)): 1, (R(2), R(2), R(1)): -1}]),
                _term("F", S, [{(R(1), R(1), R(1)): 1, (R(1), R(2), R(1)): -1}])]
    ups = [{(R(a), R(b), R(b)): 1, (R(a), R(a), R(b)): -1}
           for a in range(1, 4) for b in range(1, 4) if a < b]
    downs = [{(R(a), R(b), R(b)): 1, (R(a), R(a), R(b)): -1}
             for a in range(1, 4) for b in range(1, 4) if a > b]
    return [
        _term("U", S, ups),
        _term("D", S, downs),
        _term("F", S, [{(R(1), R(1), R(1)): 2, (R(1), R(2), R(1)): -1, (R(1), R(3), R(1)): -1},
                       {(R(2), R(2), R(2)): 1, (R(2), R(3), R(2)): -1}]),
        _term("W", S, [{(R(1), R(2), R(1)): 1, (R(1), R(3), R(1)): -1}]),
        _term("W2", S, [{(R(3), R(1), R(3)): 1, (R(3), R(2), R(3)): -1}], model.lambda1),
        _term("B", S, [{(R(1), R(3), R(2)): 1}, {(R(2), R(3), R(1)): 1}], model.lambda2),
    ]


def _reduced_bulk_colored(model, S, R):
    balanced = model.family is Family.S32_CASE2
    C = (1, 2)
    ups, downs = [], []
    for a, b, s, t in product(range(1, 4), range(1, 4), C, C):
        if a == b:
            continue
        v = {(R(a, s), R(b, t), R(b, t)): 1, (R(a, s), R(a, t), R(b, t)): -1}
        (ups if a < b else downs).append(v)
    F, W, W2, Rp = [], [], [], []
    for s, t, u in product(C, C, C):
        if balanced and u != t:
            pass
        else:
            F.append({(R(1, s), R(1, t), R(1, u)): 2, (R(1, s), R(2, t), R(1, u)): -1,
                      (R(1, s), R(3, t), R(1, u)): -1})
            F.append({(R(2, s), R(2, t), R(2, u)): 1, (R(2, s), R(3, t), R(2, u)): -1})
            W.append({(R(1, s), R(2, t), R(1, u)): 1, (R(1, s), R(3, t), R(1, u)): -1})
        W2.append({(R(3, s), R(1, t), R(3, u)): 1, (R(3, s), R(2, t), R(3, u)): -1})
    terms = [_term("U", S, ups), _term("D", S, downs), _term("F", S, F),
             _term("W", S, W), _term("W2", S, W2)]
    if balanced:
        for a, b, c, s in product(range(1, 4), range(1, 4), range(1, 4), C):
            if a < b and c < b:
                Rp.append({(R(a, s), R(b, 1), R(c, 2)): 1})
                Rp.append({(R(a, s), R(b, 2), R(c, 1)): 1})
        terms.append(_term("R", S, Rp))
    return terms


def _color_flip_reduced(model, S, R):
    w = model.mu if model.family is Family.S32_CASE2 else 1
    vecs = [{(R(a, s), R(a, 1)): 1, (R(a, s), R(a, 2)): -1}
            for a in range(1, 4) for s in (1, 2)]
    return _term("C", S, vecs, w)


def _colors(model, m):
    return list(product((1, 2), repeat=m)) if model.colored else [(1,) * m]


def _boundary_reduced(model, n, R):
    k = model.k
    left_pairs = [(b, a) for a in range(1, k + 1) for b in range(1, k + 1) if b > a]
    right_pairs = [(a, b) for a in range(1, k + 1) for b in range(1, k + 1) if a < b]
    cols2 = _colors(model, 2)
    terms = [
        _term("left", (0, 1), [{(R(p, s), R(q, t)): 1} for p, q in left_pairs for s, t in cols2]),
        _term("right", (n - 1, n), [{(R(p, s), R(q, t)): 1} for p, q in right_pairs for s, t in cols2]),
    ]
    if model.boundary is Boundary.CORRECTED and k == 3 and n >= 3:
        cols4 = _colors(model, 4)
        terms.append(_term("left4", (0, 1, 2, 3),
                           [{tuple(R(a, s) for a, s in zip((1, 3, 2, 1), c)): 1} for c in cols4]))
        terms.append(_term("right4", (n - 3, n - 2, n - 1, n),
                           [{tuple(R(a, s) for a, s in zip((1, 2, 3, 1), c)): 1} for c in cols4]))
    return terms


def _reduced_terms(model: ModelSpec, n: int, sp_: LocalSpace):
    R = sp_.reduced
    ring = model.topology is Topology.RING
    nsites = n if ring else n + 1
    if ring:
        windows = [((i - 1) % n, i, (i + 1) % n) for i in range(n)]
        pairs = [((i - 1) % n, i) for i in range(n)]
    else:
        windows = [(i - 1, i, i + 1) for i in range(1, n)]
        pairs = [(i - 1, i) for i in range(1, n + 1)]
    terms = []
    for S in windows:
        terms += (_reduced_bulk_colored(model, S, R) if model.colored
                  else _reduced_bulk_uncolored(model, S, R))
    if model.colored:
        terms += [_color_flip_reduced(model, S, R) for S in pairs]
    if not ring:
        terms += _boundary_reduced(model, n, R)
    return nsites, terms


# ----------------------------------------------------------------------------
# link terms

def _link_terms(model: ModelSpec, n: int, sp_: LocalSpace):
    if model.topology is not Topology.OPEN:
        raise ValueError("the link representation is built for open chains")
    L = sp_.link
    k = model.k
    C = (1, 2) if model.colored else (1,)
    balanced = model.family is Family.S32_CASE2
    terms = []
    for j in range(n - 1):
        S = (j, j + 1)
        ups, downs = [], []
        for a, b, t in product(range(1, k + 1), range(1, k + 1), C):
            if a != b:
                v = {(L(a, b, t), L(b, b, t)): 1, (L(a, a, t), L(a, b, t)): -1}
                (ups if a < b else downs).append(v)
        terms += [_term("U", S, ups), _term("D", S, downs)]
        if k == 2:
            terms.append(_term("F", S, [{(L(1, 1), L(1, 1)): 1, (L(1, 2), L(2, 1)): -1}]))
        else:
            F, W, W2 = [], [], []
            for t, u in product(C, C):
                if not (balanced and u != t):
                    F.append({(L(1, 1, t), L(1, 1, u)): 2, (L(1, 2, t), L(2, 1, u)): -1,
                              (L(1, 3, t), L(3, 1, u)): -1})
                    F.append({(L(2, 2, t), L(2, 2, u)): 1, (L(2, 3, t), L(3, 2, u)): -1})
                    W.append({(L(1, 2, t), L(2, 1, u)): 1, (L(1, 3, t), L(3, 1, u)): -1})
                W2.append({(L(3, 1, t), L(1, 3, u)): 1, (L(3, 2, t), L(2, 3, u)): -1})
            w2 = model.lambda1 if model.family is Family.S31 else 1
            terms += [_term("F", S, F), _term("W", S, W), _term("W2", S, W2, w2)]
            if model.family is Family.S31:
                terms.append(_term("B", S, [{(L(1, 3), L(3, 2)): 1}, {(L(2, 3), L(3, 1)): 1}],
                                   model.lambda2))
            if balanced:
                Rp = [{(L(a, b, s), L(b, c, t)): 1}
                      for a, b, c, s, t in product(range(1, 4), range(1, 4), range(1, 4), C, C)
                      if a < b and c < b and s != t]
                terms.append(_term("R", S, Rp))
        disc = [{(L(a, b, s), L(c, e, t)): 1}
                for a, b, c, e in product(range(1, k + 1), repeat=4) if b != c
                for s, t in product(C, C)]
        terms.append(_term("disc", S, disc))
    if model.colored:
        w = model.mu if balanced else 1
        for j in range(n):
            terms.append(_term("C", (j,), [{(L(a, a, 1),): 1, (L(a, a, 2),): -1}
                                           for a in range(1, 4)], w))
    terms.append(_term("left", (0,), [{(L(b, a, s),): 1} for a in range(1, k + 1)
                                      for b in range(1, k + 1) if b > a for s in C]))
    terms.append(_term("right", (n - 1,), [{(L(a, b, s),): 1} for a in range(1, k + 1)
                                           for b in range(1, k + 1) if a < b for s in C]))
    if model.boundary is Boundary.CORRECTED and k == 3 and n >= 3:
        cols = list(product(C, repeat=3))
        terms.append(_term("left4", (0, 1, 2),
                           [{(L(1, 3, s), L(3, 2, t), L(2, 1, u)): 1} for s, t, u in cols]))
        terms.append(_term("right4", (n - 3, n - 2, n - 1),
                           [{(L(1, 2, s), L(2, 3, t), L(3, 1, u)): 1} for s, t, u in cols]))
    return n, terms


def hamiltonian_terms(model: ModelSpec, n: int, representation: str = "reduced"):
    """``(n_sites, LocalSpace, [ProjectorTerm])`` for the model."""
    sp_ = local_space(model, representation)
    if representation == "reduced":
        nsites, terms = _reduced_terms(model, n, sp_)
    else:
        nsites, terms = _link_terms(model, n, sp_)
    return nsites, sp_, terms


def boundary_perturbation(model: ModelSpec, index: int = 1) -> ProjectorTerm:
    """Projector onto reduced site 0 carrying semigroup index ``index``."""
    sp_ = local_space(model, "reduced")
    cols = (1, 2) if model.colored else (1,)
    return _term(f"P{index}_0", (0,), [{(sp_.reduced(index, s),): 1} for s in cols])


# ----------------------------------------------------------------------------
# operator

@dataclass
class SparseOperator:
    """A Hamiltonian on an explicit list of basis codes.

    ``basis`` is sorted; it spans an invariant subspace of the full product
    space (open chain, endpoint-identified states, a winding sector of the
    ring, or the site-0 color quotient of S32).
    """

    model: ModelSpec
    n: int
    representation: str
    space: LocalSpace
    n_sites: int
    terms: list
    basis: np.ndarray
    sector: str = ""
    _float: object = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return int(self.basis.size)

    @property
    def d(self) -> int:
        return self.space.d

    @cached_property
    def active_terms(self):
        return [t for t in self.terms if t.weight > 0]

    def digits(self, codes=None):
        codes = self.basis if codes is None else codes
        d = self.d
        out = np.empty((codes.size, self.n_sites), dtype=np.int64)
        c = codes.copy()
        for j in range(self.n_sites):
            out[:, j] = c % d
            c //= d
        return out

    @cached_property
    def _digits(self):
        return self.digits()

    def window_codes(self, sites, digits=None):
        dg = self._digits if digits is None else digits
        d = self.d
        w = np.zeros(dg.shape[0], dtype=np.int64)
        for i, s in enumerate(sites):
            w += dg[:, s] * d ** i
        return w

    def _window_index(self, sites):
        cache = self.__dict__.setdefault("_wcache", {})
        if sites not in cache:
            wc = self.window_codes(sites)
            order = np.argsort(wc, kind="stable")
            cache[sites] = (order, wc[order])
        return cache[sites]

    def offset(self, sites, cfg):
        d = self.d
        return sum(int(l) * d ** s for l, s in zip(cfg, sites))

    def positions(self, codes):
        """Positions of ``codes`` in the basis, -1 where absent."""
        pos = np.searchsorted(self.basis, codes)
        pos = np.minimum(pos, self.basis.size - 1)
        return np.where(self.basis[pos] == codes, pos, -1)

    def vector_rows(self, term: ProjectorTerm):
        """For each vector of the term yield (coefficients, position matrix).

        The matrix has one row per instance ``v (x) |rest>`` in the basis and
        one column per support entry; -1 marks entries outside the basis.
        """
        order, swc = self._window_index(term.sites)
        for vec in term.gram:
            cfgs = [c for c, _ in vec]
            coeffs = np.array([c for _, c in vec], dtype=np.int64)
            offs = [self.offset(term.sites, c) for c in cfgs]
            lcodes = [_lcode(c, self.d) for c in cfgs]
            rests = []
            for lc, off in zip(lcodes, offs):
                lo, hi = np.searchsorted(swc, [lc, lc + 1])
                rests.append(self.basis[order[lo:hi]] - off)
            rest = np.unique(np.concatenate(rests)) if rests else np.empty(0, np.int64)
            mat = np.stack([self.positions(rest + off) for off in offs], axis=1) if rest.size else \
                np.empty((0, len(offs)), np.int64)
            yield coeffs, mat

    # assembly ------------------------------------------------------------
    def to_scipy(self) -> sp.csr_matrix:
        if self._float is None:
            rows, cols, vals = [], [], []
            for t in self.active_terms:
                w = float(t.weight)
                for coeffs, mat in self.vector_rows(t):
                    nrm = float((coeffs ** 2).sum())
                    for i in range(len(coeffs)):
                        for j in range(len(coeffs)):
                            ok = (mat[:, i] >= 0) & (mat[:, j] >= 0)
                            rows.append(mat[ok, i])
                            cols.append(mat[ok, j])
                            vals.append(np.full(ok.sum(), w * coeffs[i] * coeffs[j] / nrm))
            r = np.concatenate(rows) if rows else np.empty(0, np.int64)
            c = np.concatenate(cols) if cols else np.empty(0, np.int64)
            v = np.concatenate(vals) if vals else np.empty(0)
            self._float = sp.csr_matrix((v, (r, c)), shape=(self.dim, self.dim))
        return self._float

    def rational_entries(self) -> dict:
        """``{(row, col): Fraction}`` for small operators."""
        if self.dim > DENSE_RATIONAL_LIMIT:
            raise ResourceError(f"rational assembly limited to dimension {DENSE_RATIONAL_LIMIT}")
        out: dict = {}
        for t in self.active_terms:
            for coeffs, mat in self.vector_rows(t):
                nrm = int((coeffs ** 2).sum())
                for row in mat:
                    for i, p in enumerate(row):
                        if p < 0:
                            continue
                        for j, q in enumerate(row):
                            if q < 0:
                                continue
                            key = (int(p), int(q))
                            out[key] = out.get(key, 0) + t.weight * Fraction(int(coeffs[i] * coeffs[j]), nrm)
        return {k: v for k, v in out.items() if v != 0}

    def apply_exact(self, psi: dict) -> dict:
        """``H psi`` for a sparse rational vector ``{position: value}``."""
        res: dict = {}
        for t in self.active_terms:
            for coeffs, mat in self.vector_rows(t):
                nrm = int((coeffs ** 2).sum())
                for row in mat:
                    inner = sum(int(c) * psi.get(int(p), 0) for c, p in zip(coeffs, row) if p >= 0)
                    if inner == 0:
                        continue
                    for c, p in zip(coeffs, row):
                        if p >= 0:
                            res[int(p)] = res.get(int(p), 0) + t.weight * Fraction(int(c) * inner, nrm)
        return {k: v for k, v in res.items() if v != 0}

    # export --------------------------------------------------------------
    def render_state(self, pos: int) -> str:
        dg = self.digits(self.basis[[pos]])[0]
        return " ".join(self.space.render(int(l)) for l in dg)

    def export_coo(self, exact: bool = True) -> Iterable[str]:
        if exact:
            for (i, j), v in sorted(self.rational_entries().items()):
                yield f"{i} {j} {v.numerator}/{v.denominator}"
        else:
            m = self.to_scipy().tocoo()
            order = np.lexsort((m.col, m.row))
            for i, j, v in zip(m.row[order], m.col[order], m.data[order]):
                yield f"{i} {j} {v:.17g}"


def _winding(dg, ring_n, space):
    idx = dg % 3 + 1 if space.d == 6 else dg + 1
    nxt = np.roll(idx, -1, axis=1)
    return np.sign(nxt - idx).sum(axis=1)


def build_hamiltonian(model: ModelSpec, n: int, representation: str = "reduced", *,
                      extra_terms=(), winding: int = 0, budget: int | None = None,
                      basis_codes=None) -> SparseOperator:
    """Assemble the Hamiltonian of an n-step chain.

    For the ring topology only the winding-number sector ``winding`` is
    kept (bulk moves conserve the net height change around the ring).
    ``basis_codes`` replaces the basis by an explicit code list; such an
    operator is only meaningful for move-closure computations.
    """
    if n < 2:
        raise ValueError("chains need at least two steps")
    nsites, space, terms = hamiltonian_terms(model, n, representation)
    terms = list(terms) + list(extra_terms)
    full = space.d ** nsites
    if basis_codes is not None:
        basis = np.unique(np.asarray(basis_codes, dtype=np.int64))
        return SparseOperator(model, n, representation, space, nsites, terms, basis, "restricted")
    cap = BUDGET[(representation, space.d)] if budget is None else budget
    if full > cap:
        raise ResourceError(f"dimension {full} exceeds the budget {cap}")
    basis = np.arange(full, dtype=np.int64)
    sector = ""
    op = SparseOperator(model, n, representation, space, nsites, terms, basis)
    if representation == "reduced":
        dg = op.digits(basis)
        keep = np.ones(full, bool)
        if model.colored and model.topology is not Topology.RING:
            keep &= dg[:, 0] < 3          # site-0 color is surplus; fix it to 1
            sector = "site0-color=1"
        if model.topology is Topology.IDENTIFIED:
            ix = dg % 3 if model.colored else dg
            keep &= ix[:, 0] == ix[:, n]
            sector = (sector + " c0=cn").strip()
        if model.topology is Topology.RING:
            keep &= _winding(dg, n, space) == winding
            sector = f"winding={winding}"
        basis = basis[keep]
    op = SparseOperator(model, n, representation, space, nsites, terms, basis, sector)
    return op
