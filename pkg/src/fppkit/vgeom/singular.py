"""Singular loci and the nonreduced-curve test for hyperplane sections.

``is_nonreduced_curve(S, l)`` decides whether the curve ``C = S ∩ {l = 0}`` has
a one-dimensional singular locus. Two routes:

* exact: build ``C`` in coordinates on the hyperplane, add all ``c x c``
  minors of its Jacobian (``c`` = codimension of ``C``) and read the dimension
  off the Hilbert polynomial;
* certificate (prime fields only): slice ``C`` with a random second
  hyperplane ``h``. If ``C ∩ h`` is a reduced zero-dimensional scheme then no
  component of ``C`` is multiple, because every multiple component meets
  ``h`` in a nonreduced point. Reducedness of ``C ∩ h`` is certified exactly:
  Gotzmann persistence fixes its length ``c`` from ``HF(d) = HF(d+1) = c`` with
  ``d >= c``, and the trace form of the ``c``-dimensional multiplication
  algebra is nondegenerate iff the algebra is étale.

The certificate can only answer "reduced"; whenever it fails the exact route
decides.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np

from ..errors import NotACurve, NotASurface, NotStabilized, SingularMatrix
from ..linalg import FpBackend, backend_for
from ..poly import Polynomial
from .dense import dense_diff, from_dense, jacobian_minors, restrict, to_dense
from .graded import GradedIdeal, degree_index, hilbert_polynomial, shift_table
from .ideal import Ideal


def _dense_gens(I: Ideal, backend):
    by_deg = {}
    for g in I.gens:
        by_deg.setdefault(g.degree(), []).append(g)
    return {e: to_dense(gs, e, backend, I.ambient.order) for e, gs in by_deg.items()}


def _jacobian_dense(gens_by_degree, nvars, backend, order="grevlex"):
    rows, degs = [], []
    for e in sorted(gens_by_degree):
        G = gens_by_degree[e]
        if e == 0 or G.shape[0] == 0:
            continue
        D = dense_diff(G, nvars, e, backend, order)
        for r in range(G.shape[0]):
            rows.append([D[k][r] for k in range(nvars)])
            degs.append(e - 1)
    return rows, degs


def singular_locus_dense(gens_by_degree, nvars, c, backend, order="grevlex"):
    """Generators (by degree) of the ideal plus all ``c x c`` Jacobian minors."""
    J, degs = _jacobian_dense(gens_by_degree, nvars, backend, order)
    minors = jacobian_minors(J, degs, c, nvars, backend, order) if J or c == 0 else {}
    out = {e: G for e, G in gens_by_degree.items()}
    for e, M in minors.items():
        if backend.dtype is np.int64:
            nz = M.any(axis=1)
        else:
            nz = np.array([any(backend.nonzero(x) for x in row) for row in M], dtype=bool)
        M = M[nz]
        if M.shape[0] == 0:
            continue
        out[e] = np.vstack([out[e], M]) if e in out else M
    return out


def singular_locus(I: Ideal, c: int) -> Ideal:
    """``I`` plus all ``c x c`` minors of the Jacobian matrix of its generators."""
    if c < 1:
        raise ValueError("expected codimension must be at least 1")
    b = backend_for(I.ring)
    gens = _dense_gens(I, b)
    J, degs = _jacobian_dense(gens, I.nvars, b, I.ambient.order)
    minors = jacobian_minors(J, degs, c, I.nvars, b, I.ambient.order)
    extra = []
    seen = set()
    for e, M in sorted(minors.items()):
        for row in M:
            f = from_dense(row, e, I.ambient, b)
            if f and f not in seen:
                seen.add(f)
                extra.append(f)
    return Ideal(I.gens + extra, I.ambient)


def hyperplane_basis(coeffs, backend):
    """``(S, pivot)``: columns of ``S`` span ``{l = 0}``; ``x = S y``."""
    n = len(coeffs)
    k0 = next((i for i, c in enumerate(coeffs) if backend.nonzero(c)), None)
    if k0 is None:
        raise ValueError("the zero form does not define a hyperplane")
    lead = coeffs[k0]
    S = backend.zeros((n, n - 1))
    col = 0
    for j in range(n):
        if j == k0:
            continue
        S[j, col] = backend.scalar(1)
        S[k0, col] = backend.neg(backend.asarray([[coeffs[j]]]))[0, 0]
        if backend.dtype is np.int64:
            S[k0, col] = (S[k0, col] * pow(int(lead), -1, backend.p)) % backend.p
        else:
            S[k0, col] = S[k0, col] / lead
        col += 1
    return S, k0


class SliceCertifier:
    """Reducedness certificates for ``D ∩ {l = 0}``, ``D = S ∩ {h = 0}`` fixed.

    The graded pieces of ``A = k[y]/I_D`` are computed once, together with
    the multiplication maps ``x_i: A_{k-1} -> A_k``. For a cut ``l`` the
    section ``Z = D ∩ {l = 0}`` has ``HF_Z(k) = dim A_k - rank(l: A_{k-1} -> A_k)``,
    so each cut only costs two small eliminations. If ``HF_Z(d) = HF_Z(d+1) = c``
    with ``c <= d`` then (Gotzmann persistence) the quotient ``Q_d`` of ``A_d``
    is the coordinate ring of ``Z``; ``Z`` is reduced iff the trace form of
    that ``c``-dimensional algebra is nondegenerate.

    If ``Z`` is reduced then every point of ``C = S ∩ {l = 0}`` on ``h`` has a
    principal maximal ideal in a one-dimensional local ring, hence is a
    regular point; since every component of ``C`` meets ``h``, ``Sing(C)``
    contains no component and is finite.
    """

    def __init__(self, gens_by_degree, n, backend, h, d, rng):
        self.backend = b = backend
        self.p = b.p
        self.n = n
        self.d = d
        self.rng = rng
        self.S, _ = hyperplane_basis(h, b)
        m = self.m = n - 1
        D = {e: restrict(G, self.S, e, b) for e, G in gens_by_degree.items()}
        g = GradedIdeal.from_dense(m, D, b)
        self.std, self.nf = {}, {}
        for k in (d - 1, d, d + 1):
            R, piv = g.primal_basis(k)
            M = g.size(k)
            pivset = set(piv)
            std = np.array([j for j in range(M) if j not in pivset], dtype=np.int64)
            nf = b.zeros((M, len(std)))
            nf[std, np.arange(len(std))] = 1
            if len(piv):
                nf[np.array(piv, dtype=np.int64)] = b.neg(R[:, std])
            self.std[k], self.nf[k] = std, nf
        # N[k][i]: multiplication by y_i from A_{k-1} to A_k in standard-monomial coordinates
        self.N = {}
        for k in (d, d + 1):
            T = shift_table(m, k - 1)
            self.N[k] = np.stack([self.nf[k][T[i][self.std[k - 1]]] for i in range(m)])
        monos, _ = degree_index(m, d)
        self.exps = [monos[j] for j in self.std[d]]

    def _mult(self, lam, k):
        return np.tensordot(lam, self.N[k], axes=1) % self.p

    def certify(self, coeffs) -> bool:
        b, p, d = self.backend, self.p, self.d
        lam = b.matmul(np.asarray([coeffs], dtype=np.int64), self.S)[0]
        if not lam.any():
            return False
        R0, piv0 = b.rref(self._mult(lam, d))
        c = len(self.std[d]) - len(piv0)
        if c < 1 or c > d:
            return False
        R1, piv1 = b.rref(self._mult(lam, d + 1))
        if len(self.std[d + 1]) - len(piv1) != c:
            return False
        q0 = np.array([j for j in range(len(self.std[d])) if j not in set(piv0)], dtype=np.int64)
        q1 = np.array([j for j in range(len(self.std[d + 1])) if j not in set(piv1)], dtype=np.int64)
        piv1 = np.array(piv1, dtype=np.int64)

        def reduce1(V):
            if len(piv1):
                V = (V - b.matmul(V[:, piv1], R1)) % p
            return V[:, q1]

        Y = [reduce1(self.N[d + 1][i][q0]) for i in range(self.m)]
        for _ in range(10):
            a = [self.rng.randrange(p) for _ in range(self.m)]
            try:
                Y0inv = b.inv(sum(ai * Yi for ai, Yi in zip(a, Y)) % p)
                break
            except SingularMatrix:
                continue
        else:
            return False
        Ts = np.stack([b.matmul(Yi, Y0inv) for Yi in Y])
        small = (p - 1) ** 2 * c * c < 2**62
        if small:
            prods = np.einsum("aij,bjk->abik", Ts, Ts) % p
            if not np.array_equal(prods, prods.transpose(1, 0, 2, 3)):
                return False
        # operators of the basis elements  y^alpha / l0^d  of the coordinate ring of Z
        P = []
        for k in q0:
            A = None
            for i, e in enumerate(self.exps[k]):
                for _ in range(e):
                    A = Ts[i] if A is None else b.matmul(A, Ts[i])
            P.append(b.eye(c) if A is None else A)
        P = np.stack(P)
        if small:
            gram = np.einsum("kij,lji->kl", P, P) % p
        else:
            gram = np.array([[int(sum(int(x) for x in (A * B.T).ravel())) % p for B in P] for A in P], dtype=np.int64)
        return b.rank(gram) == c


def _cut_seed(seed, coeffs):
    h = hashlib.sha256(repr((seed, tuple(int(c) for c in coeffs))).encode()).digest()
    return int.from_bytes(h[:8], "little")


class CurveTester:
    """Reusable nonreducedness test for hyperplane sections of one surface.

    Over a prime field, ``trials`` fixed random hyperplanes ``h`` are prepared
    once and each cut first tries their reducedness certificates; cuts that
    none of them certifies go through the exact singular-locus computation.
    The answer never depends on the certificates, only the running time does.
    """

    def __init__(self, surface: Ideal, *, trials: int = 4, seed: int = 0):
        self.surface = surface
        self.backend = b = backend_for(surface.ring)
        self.n = surface.nvars
        self.gens = _dense_gens(surface, b)
        try:
            hp = hilbert_polynomial(surface)
        except NotStabilized:
            raise NotASurface("the Hilbert polynomial of the surface did not stabilize") from None
        if hp.dimension != 2:
            raise NotASurface(f"expected a surface, the scheme has dimension {hp.dimension}")
        self.surface_degree = hp.degree
        self.stats = {"certified": 0, "exact": 0}
        self.certifiers = []
        if isinstance(b, FpBackend) and self.n >= 4 and trials > 0:
            rng = random.Random(_cut_seed(seed, [self.n, b.p]))
            d = max(self.surface_degree, max(self.gens), 1)
            for _ in range(trials):
                h = [rng.randrange(b.p) for _ in range(self.n)]
                if any(h):
                    self.certifiers.append(SliceCertifier(self.gens, self.n, b, h, d, rng))

    def coefficients(self, cut):
        if isinstance(cut, Polynomial):
            if not cut or not cut.is_homogeneous() or cut.degree() != 1:
                raise ValueError("the cut must be a nonzero linear form")
            out = []
            for i in range(self.n):
                e = tuple(1 if j == i else 0 for j in range(self.n))
                out.append(cut.coefficient(e))
            return [self.backend.scalar(c) for c in out]
        out = [self.backend.scalar(c) for c in cut]
        if len(out) != self.n or not any(self.backend.nonzero(c) for c in out):
            raise ValueError("the cut must be a nonzero linear form")
        return out

    def curve_gens(self, coeffs):
        S, _ = hyperplane_basis(coeffs, self.backend)
        return {e: restrict(G, S, e, self.backend) for e, G in self.gens.items()}

    def __call__(self, cut) -> bool:
        coeffs = self.coefficients(cut)
        for cert in self.certifiers:
            if cert.certify(coeffs):
                self.stats["certified"] += 1
                return False
        self.stats["exact"] += 1
        return self.exact(coeffs)

    def exact(self, coeffs) -> bool:
        """Singular-locus dimension of the section, computed in coordinates on the cut."""
        b = self.backend
        curve = self.curve_gens(self.coefficients(coeffs))
        m = self.n - 1
        try:
            hd = hilbert_polynomial(_DegreeBound(curve), graded=GradedIdeal.from_dense(m, curve, b))
        except NotStabilized as exc:
            raise NotACurve(f"Hilbert polynomial of the section did not stabilize: {exc}") from None
        if hd.dimension != 1:
            raise NotACurve(f"the section has dimension {hd.dimension}, not 1")
        sing = singular_locus_dense(curve, m, m - 2, b)
        hs = hilbert_polynomial(_DegreeBound(sing), graded=GradedIdeal.from_dense(m, sing, b))
        return hs.dimension >= 1


class _DegreeBound:
    """Just enough of :class:`Ideal` to pick the default Hilbert window."""

    def __init__(self, gens_by_degree):
        self._deg = max((e for e, G in gens_by_degree.items() if G.shape[0]), default=0)

    def max_degree(self):
        return self._deg


def is_nonreduced_curve(surface: Ideal, cut, *, trials: int = 2, seed: int = 0) -> bool:
    """True iff the singular locus of ``surface + (cut)`` is at least one-dimensional.

    Raises :class:`NotASurface` if ``surface`` is not two-dimensional and
    :class:`NotACurve` if the section is not a curve (a cut containing a
    component of the surface).
    """
    return CurveTester(surface, trials=trials, seed=seed)(cut)
