"""Graded pieces of homogeneous ideals by dense linear algebra.

The degree-``n`` piece ``I_n`` is tracked one degree at a time, either by a
row basis of ``I_n`` ("primal") or by a basis of its annihilator in the dual
space ``S_n^*`` ("dual", Macaulay's inverse system). The dual step uses that
``phi`` annihilates ``I_{n+1}`` iff every contraction ``x_i . phi`` annihilates
``I_n`` and ``phi`` kills the new generators; its unknowns are the
contractions, so its cost scales with ``HF(n)`` instead of ``dim I_n``. Each
step picks the cheaper representation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from ..errors import NotStabilized
from ..linalg import backend_for
from ..poly import monomials_of_degree
from .ideal import HilbertData, Ideal


@lru_cache(maxsize=256)
def degree_index(nvars: int, n: int, order: str = "grevlex"):
    monos = monomials_of_degree(nvars, n, order)
    return monos, {m: i for i, m in enumerate(monos)}


@lru_cache(maxsize=256)
def shift_table(nvars: int, n: int, order: str = "grevlex"):
    """``T[i, j]`` = index in degree ``n+1`` of ``x_i`` times monomial ``j`` of degree ``n``."""
    monos, _ = degree_index(nvars, n, order)
    _, idx1 = degree_index(nvars, n + 1, order)
    T = np.empty((nvars, len(monos)), dtype=np.int64)
    for j, m in enumerate(monos):
        e = list(m)
        for i in range(nvars):
            e[i] += 1
            T[i, j] = idx1[tuple(e)]
            e[i] -= 1
    T.setflags(write=False)
    return T


def dense_rows(polys, n, backend, order="grevlex", nvars=None):
    """Coefficient vectors of degree-``n`` polynomials in the monomial basis."""
    if nvars is None:
        nvars = polys[0].nvars
    monos, idx = degree_index(nvars, n, order)
    A = backend.zeros((len(polys), len(monos)))
    for r, f in enumerate(polys):
        for e, c in f.terms.items():
            A[r, idx[e]] = backend.scalar(c)
    return A


class GradedIdeal:
    """Degree-by-degree linear algebra for a homogeneous ideal over a field."""

    def __init__(self, I: Ideal, backend=None):
        self.I = I
        self.nvars = I.nvars
        self.order = I.ambient.order
        self.backend = backend or backend_for(I.ring)
        self._gens = {}
        for g in I.gens:
            self._gens.setdefault(g.degree(), []).append(g)
        self._maxgen = max(self._gens, default=0)
        self._hf = {}
        self._state = {}  # n -> (kind, matrix, pivots); kind in {"primal", "dual", "empty"}
        # primal rows are sparse and object arithmetic skips zeros, so favour it there
        self.dual_penalty = 1 if self.backend.dtype is np.int64 else 1000

    @classmethod
    def from_dense(cls, nvars, gens_by_degree, backend, order="grevlex"):
        """Build from dense generator matrices ``{degree: rows}`` (no Polynomial objects)."""
        self = cls.__new__(cls)
        self.I = None
        self.nvars = nvars
        self.order = order
        self.backend = backend
        self._gens = {d: A for d, A in gens_by_degree.items() if A.shape[0]}
        self._maxgen = max(self._gens, default=0)
        self._hf = {}
        self._state = {}
        self.dual_penalty = 1 if backend.dtype is np.int64 else 1000
        return self

    def size(self, n: int) -> int:
        return comb(n + self.nvars - 1, self.nvars - 1) if n >= 0 else 0

    def gens_matrix(self, n):
        gs = self._gens.get(n)
        if gs is None or len(gs) == 0:
            return self.backend.zeros((0, self.size(n)))
        if isinstance(gs, np.ndarray):
            return gs
        return dense_rows(gs, n, self.backend, self.order, self.nvars)

    # -- degree steps -----------------------------------------------------

    def _compute(self, n):
        b = self.backend
        if n == 0:
            G = self.gens_matrix(0)
            R, piv = b.rref(G) if G.shape[0] else (G, [])
            self._set(0, "primal", R, piv)
            return
        kind, A, piv = self._state[n - 1]
        if kind == "empty" and not self._has_gens(n):
            # no generator in degree <= n: I_n = 0
            self._state[n] = ("empty", None, [])
            self._hf[n] = self.size(n)
            return
        if kind == "empty":
            G = self.gens_matrix(n)
            R, p2 = b.rref(G)
            self._set(n, "primal", R, p2)
            return
        M = self.size(n - 1)
        h = self._hf[n - 1]
        r = M - h
        nv = self.nvars
        cost_primal = min(nv * r, self.size(n)) * nv * r * self.size(n)
        cost_dual = nv * h * nv * M * nv * h
        if cost_primal <= cost_dual * self.dual_penalty:
            if kind == "dual":
                A, piv = self._convert(A, M)
            self._primal_step(n, A)
        else:
            if kind == "primal":
                A, piv = self._convert(A, M)
            self._dual_step(n, A)

    def _has_gens(self, n):
        gs = self._gens.get(n)
        return gs is not None and len(gs) > 0

    def _set(self, n, kind, A, piv):
        M = self.size(n)
        if kind == "primal" and not piv and not len(A):
            kind = "empty" if not any(self._has_gens(k) for k in range(n + 1)) else kind
        self._state[n] = (kind, A, piv)
        self._hf[n] = M - len(piv) if kind in ("primal", "empty") else len(piv)

    def _convert(self, A, M):
        b = self.backend
        K = b.nullspace(A, M) if A.shape[0] else b.eye(M)
        if K.shape[0] == 0:
            return K.reshape(0, M), []
        return b.rref(K)

    def _primal_step(self, n, B):
        b = self.backend
        T = shift_table(self.nvars, n - 1, self.order)
        M1 = self.size(n)
        r = B.shape[0]
        blocks = []
        for i in range(self.nvars):
            Z = b.zeros((r, M1))
            if r:
                Z[:, T[i]] = B
            blocks.append(Z)
        G = self.gens_matrix(n)
        if G.shape[0]:
            blocks.append(G)
        A = np.vstack(blocks) if blocks else b.zeros((0, M1))
        R, piv = b.rref(A) if A.shape[0] else (A, [])
        self._set(n, "primal", R, piv)

    def _dual_step(self, n, D):
        """``D``: RREF basis of the annihilator of ``I_{n-1}``."""
        b = self.backend
        nv = self.nvars
        h, M = D.shape
        M1 = self.size(n)
        if h == 0:
            self._state[n] = ("dual", b.zeros((0, M1)), [])
            self._hf[n] = 0
            return
        T = shift_table(nv, n - 1, self.order)
        occ_i = np.repeat(np.arange(nv), M)
        occ_j = np.tile(np.arange(M), nv)
        occ_mu = T.reshape(-1)
        order = np.argsort(occ_mu, kind="stable")
        occ_i, occ_j, occ_mu = occ_i[order], occ_j[order], occ_mu[order]
        first = np.ones(len(occ_mu), dtype=bool)
        first[1:] = occ_mu[1:] != occ_mu[:-1]
        ref_pos = np.maximum.accumulate(np.where(first, np.arange(len(occ_mu)), 0))
        ref_i = occ_i[first]  # indexed by mu (every mu occurs)
        ref_j = occ_j[first]
        extra = np.nonzero(~first)[0]
        neq = len(extra)
        ncols = nv * h
        E = b.zeros((neq, ncols))
        ar = np.arange(h)
        if neq:
            rows = np.arange(neq)[:, None]
            cols = (occ_i[extra] * h)[:, None] + ar[None, :]
            E[rows, cols] = D[:, occ_j[extra]].T
            rcols = (occ_i[ref_pos[extra]] * h)[:, None] + ar[None, :]
            E[rows, rcols] = b.neg(D[:, occ_j[ref_pos[extra]]].T)
        G = self.gens_matrix(n)
        if G.shape[0]:
            GE = b.zeros((G.shape[0], ncols))
            for i in range(nv):
                mask = ref_i == i
                if mask.any():
                    GE[:, i * h : (i + 1) * h] = b.matmul(G[:, mask], D[:, ref_j[mask]].T)
            E = np.vstack([E, GE])
        K = b.nullspace(E, ncols) if E.shape[0] else b.eye(ncols)
        if K.shape[0] == 0:
            self._state[n] = ("dual", b.zeros((0, M1)), [])
            self._hf[n] = 0
            return
        Phi = b.zeros((K.shape[0], M1))
        for i in range(nv):
            mask = ref_i == i
            if mask.any():
                Phi[:, mask] = b.matmul(K[:, i * h : (i + 1) * h], D[:, ref_j[mask]])
        R, piv = b.rref(Phi)
        self._state[n] = ("dual", R, piv)
        self._hf[n] = len(piv)

    def _ensure(self, n):
        start = max(self._state, default=-1) + 1
        for k in range(start, n + 1):
            self._compute(k)

    # -- queries ----------------------------------------------------------

    def hilbert(self, n: int) -> int:
        if n < 0:
            return 0
        self._ensure(n)
        return self._hf[n]

    def rank(self, n: int) -> int:
        return self.size(n) - self.hilbert(n)

    def primal_basis(self, n):
        """RREF rows spanning ``I_n``."""
        self._ensure(n)
        kind, A, piv = self._state[n]
        if kind == "primal":
            return A, piv
        if kind == "empty":
            return self.backend.zeros((0, self.size(n))), []
        return self._convert(A, self.size(n))

    def dual_basis(self, n):
        """RREF rows spanning the annihilator of ``I_n`` in ``S_n^*``."""
        self._ensure(n)
        kind, A, piv = self._state[n]
        if kind == "dual":
            return A, piv
        if kind == "empty":
            M = self.size(n)
            return self.backend.eye(M), list(range(M))
        return self._convert(A, self.size(n))


def graded_piece_rank(I: Ideal, n: int, backend=None) -> int:
    """Dimension of ``I_n``, the span of all ``m * g`` of degree ``n``."""
    return GradedIdeal(I, backend).rank(n)


def hilbert_function(I: Ideal, n: int, backend=None) -> int:
    return GradedIdeal(I, backend).hilbert(n)


def hilbert_values(I: Ideal, lo: int, hi: int, graded: GradedIdeal | None = None):
    g = graded or GradedIdeal(I)
    return {n: g.hilbert(n) for n in range(lo, hi + 1)}


def _interpolate(points):
    """Coefficients (low to high) of the polynomial through ``(x, y)`` pairs."""
    k = len(points)
    coeffs = [Fraction(0)] * k
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t in range(k):
            coeffs[t] += yi * basis[t] / denom
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _peval(coeffs, x):
    return sum(c * x**i for i, c in enumerate(coeffs))


def fit_hilbert_polynomial(values: dict, cap: int = 3):
    """Least-degree fit predicting every later value in the window.

    For ``e = 0..cap`` and each start degree ``s``, interpolate the values at
    ``s..s+e`` and accept the first fit that predicts all remaining values in
    the window (at least two of them). A run of zeros is the empty scheme.
    Returns ``(coeffs, stable_from)`` or raises :class:`NotStabilized`.
    """
    ns = sorted(values)
    if ns != list(range(ns[0], ns[-1] + 1)):
        raise ValueError("Hilbert values must cover a contiguous window")
    zeros = [n for n in ns if values[n] == 0]
    if zeros:
        z = zeros[0]
        if any(values[n] for n in ns if n > z):
            raise NotStabilized("Hilbert function vanished and then grew again")
        return [], z
    for e in range(cap + 1):
        for s_i in range(len(ns)):
            tail = ns[s_i:]
            if len(tail) < e + 3:
                break
            pts = [(Fraction(n), Fraction(values[n])) for n in tail[: e + 1]]
            coeffs = _interpolate(pts)
            if len(coeffs) - 1 != e and not (e == 0 and coeffs):
                continue
            if all(_peval(coeffs, n) == values[n] for n in tail[e + 1 :]):
                return coeffs, tail[0]
    raise NotStabilized(f"no polynomial of degree <= {cap} fits the window {ns[0]}..{ns[-1]}: {values}")


def default_window(I: Ideal, cap: int = 3):
    return 0, max(I.max_degree(), 1) + cap + 3


def hilbert_polynomial(I: Ideal, window=None, cap: int = 3, expected=None, graded: GradedIdeal | None = None):
    """Fit the Hilbert polynomial on a degree window; returns :class:`HilbertData`.

    ``expected`` (coefficients, lowest first) only raises the degree cap so
    that the expected polynomial can be found; it never forces the answer.
    """
    if expected is not None:
        cap = max(cap, len(expected) - 1)
    lo, hi = window if window is not None else default_window(I, cap)
    hi = max(hi, lo + cap + 2)
    g = graded or GradedIdeal(I)
    values = {n: g.hilbert(n) for n in range(lo, hi + 1)}
    try:
        coeffs, start = fit_hilbert_polynomial(values, cap)
    except NotStabilized as exc:
        exc.data = HilbertData(values, None, None)
        raise
    return HilbertData(values, coeffs, start)
