"""Points of zero-dimensional projective schemes over ``F_p``.

Let ``c`` be the constant Hilbert polynomial and ``d`` a degree with
``HF(d) = HF(d+1) = c`` (at least the largest generator degree). The
annihilators ``D_d`` of ``I_d`` and ``D_{d+1}`` of ``I_{d+1}`` both have
dimension ``c``; contraction by ``x_i`` maps the second to the first, giving
``c x c`` matrices ``X_i``. For a linear form ``l0`` with invertible ``L``, the
evaluation functional of every point ``P`` is a common left eigenvector of
``X_i L^{-1}`` with eigenvalue ``P_i / l0(P)``. Rational eigenvalues are found
with characteristic polynomials and root finding; eigenvalues outside ``F_p``
are counted as extension points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from ..errors import NotStabilized, NotZeroDimensional
from ..linalg import FpBackend, upoly_divmod, upoly_roots
from ..ring import ZMod
from .graded import GradedIdeal, hilbert_polynomial, shift_table
from .ideal import Ideal, ProjPoint


@dataclass
class ZeroDimSolution:
    points: list
    hilbert_constant: int
    degree: int
    multiplicities: list = field(default_factory=list)
    extension_count: int = 0

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _root_multiplicity(f, a, p):
    m = 0
    while len(f) > 1:
        q, r = upoly_divmod(f, [(-a) % p, 1], p)
        if r:
            break
        f = q
        m += 1
    return m


def _restrict(A, V, b):
    """Matrix of ``A`` on the invariant column space ``V`` (basis as columns)."""
    _, rows = b.rref(V.T)
    rows = list(rows)
    W = b.matmul(A, V)
    Vi = b.inv(V[rows])
    return b.matmul(Vi, W[rows])


def _kernel_cols(A, b):
    K = b.nullspace(A)
    return K.T


def _split(As, V, b, p, i=0):
    """Common eigenvectors of the commuting matrices ``As`` inside ``V``.

    Returns ``[(eigenvalues, subspace)]`` with one entry per joint eigenvalue.
    """
    if i == len(As):
        return [([], V)]
    B = _restrict(As[i], V, b)
    k = B.shape[0]
    out = []
    for mu in upoly_roots(b.charpoly(B), p):
        Y = _kernel_cols((B - mu * np.eye(k, dtype=np.int64)) % p, b)
        if Y.shape[1] == 0:
            continue
        V2 = b.matmul(V, Y)
        for mus, W in _split(As, V2, b, p, i + 1):
            out.append(([mu] + mus, W))
    return out


def solve_zero_dim(I: Ideal, *, seed: int = 0, max_extra_degree: int = 12, hilbert=None) -> ZeroDimSolution:
    """All ``F_p``-points of a zero-dimensional homogeneous ideal over ``F_p``.

    Every returned point is checked against all generators. Points over
    proper extensions of ``F_p`` are not returned; their number (with
    multiplicity) is reported in ``extension_count``.
    """
    ring = I.ring
    if not isinstance(ring, ZMod) or not ring.is_field:
        raise TypeError("solve_zero_dim works over a prime field")
    p = ring.p
    b = FpBackend(p)
    g = GradedIdeal(I, b)
    try:
        hd = hilbert or hilbert_polynomial(I, graded=g)
    except NotStabilized as exc:
        raise NotZeroDimensional(f"Hilbert polynomial did not stabilize: {exc}") from None
    if not hd.is_constant():
        raise NotZeroDimensional(f"Hilbert polynomial {hd.format()} is not constant")
    c = hd.constant()
    if c == 0:
        return ZeroDimSolution([], 0, hd.stable_from or 0)
    n = I.nvars
    d = max(I.max_degree(), hd.stable_from or 0, 1)
    limit = d + max_extra_degree
    while not (g.hilbert(d) == c and g.hilbert(d + 1) == c):
        d += 1
        if d > limit:
            raise NotZeroDimensional("Hilbert function does not settle at its constant value")
    D0, piv0 = g.dual_basis(d)
    D1, _ = g.dual_basis(d + 1)
    T = shift_table(n, d, I.ambient.order)
    piv0 = np.array(piv0, dtype=np.int64)
    X = [D1[:, T[i][piv0]] % p for i in range(n)]
    rng = random.Random(seed)
    for _ in range(50):
        a = [rng.randrange(p) for _ in range(n)]
        L = np.zeros((c, c), dtype=np.int64)
        for ai, Xi in zip(a, X):
            L = (L + ai * Xi) % p
        if b.rank(L) == c:
            break
    else:
        raise NotZeroDimensional("no linear form avoids the scheme; enlarge the field")
    Linv = b.inv(L)
    # column-vector convention: A_i = (X_i L^-1)^T
    As = [b.matmul(Xi, Linv).T.copy() for Xi in X]
    comb_coeffs = [rng.randrange(1, p) for _ in range(n)]
    A = np.zeros((c, c), dtype=np.int64)
    for r, Ai in zip(comb_coeffs, As):
        A = (A + r * Ai) % p
    chi = b.charpoly(A)
    rational = 0
    points, mults = [], []
    for lam in upoly_roots(chi, p):
        mult = _root_multiplicity(chi, lam, p)
        rational += mult
        V = _kernel_cols((A - lam * np.eye(c, dtype=np.int64)) % p, b)
        found = _split(As, V, b, p)
        for mus, _ in found:
            pt = ProjPoint([ring(m) for m in mus])
            if not I.contains_point(pt):
                raise AssertionError(f"eigen-solution {pt} does not satisfy the generators")
            points.append(pt)
            mults.append(mult if len(found) == 1 else None)
    order = sorted(range(len(points)), key=lambda i: points[i].values())
    return ZeroDimSolution(
        [points[i] for i in order],
        c,
        d,
        [mults[i] for i in order],
        c - rational,
    )
