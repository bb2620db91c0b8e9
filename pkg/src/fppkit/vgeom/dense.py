"""Dense homogeneous forms as coefficient vectors in the degree-``e`` monomial basis.

Used where many small forms are built per call (restrictions to linear
subspaces, Jacobian minors) and ``Polynomial`` objects would dominate the cost.
All routines take a backend from :mod:`fppkit.linalg`.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from ..poly import Polynomial
from .graded import degree_index, shift_table


@lru_cache(maxsize=256)
def product_index(nvars: int, a: int, b: int, order: str = "grevlex"):
    """``P[i, j]`` = index of ``mono_a[i] * mono_b[j]`` among degree ``a + b`` monomials."""
    ma, _ = degree_index(nvars, a, order)
    mb, _ = degree_index(nvars, b, order)
    _, idx = degree_index(nvars, a + b, order)
    P = np.empty((len(ma), len(mb)), dtype=np.int64)
    for i, x in enumerate(ma):
        for j, y in enumerate(mb):
            P[i, j] = idx[tuple(u + v for u, v in zip(x, y))]
    P.setflags(write=False)
    return P


@lru_cache(maxsize=256)
def parent_table(nvars: int, e: int, order: str = "grevlex"):
    """For each degree-``e`` monomial: (first variable k dividing it, index of m / x_k)."""
    monos, _ = degree_index(nvars, e, order)
    _, idx = degree_index(nvars, e - 1, order)
    ks = np.empty(len(monos), dtype=np.int64)
    par = np.empty(len(monos), dtype=np.int64)
    for j, m in enumerate(monos):
        k = next(i for i, x in enumerate(m) if x)
        q = list(m)
        q[k] -= 1
        ks[j] = k
        par[j] = idx[tuple(q)]
    return ks, par


def to_dense(polys, e, backend, order="grevlex"):
    from .graded import dense_rows

    return dense_rows(list(polys), e, backend, order, polys[0].nvars)


def from_dense(row, e, ambient, backend):
    monos, _ = degree_index(ambient.nvars, e, ambient.order)
    terms = {m: backend.to_ring(c) for m, c in zip(monos, row) if backend.nonzero(c)}
    return Polynomial(ambient, terms)


def dense_mul(A, B, nvars, a, b, backend, order="grevlex"):
    """Row-wise products of degree-``a`` rows ``A`` and degree-``b`` rows ``B``."""
    K = A.shape[0]
    P = product_index(nvars, a, b, order)
    Mab = len(degree_index(nvars, a + b, order)[0])
    out = backend.zeros((K, Mab))
    if K == 0:
        return out
    if backend.dtype is np.int64:
        p = backend.p
        for j in range(P.shape[1]):
            col = B[:, j]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            prod = (A[nz] * col[nz, None]) % p
            out[np.ix_(nz, P[:, j])] = (out[np.ix_(nz, P[:, j])] + prod) % p
        return out
    for j in range(P.shape[1]):
        col = B[:, j]
        out[:, P[:, j]] = out[:, P[:, j]] + A * col[:, None]
    return out


def substitution_matrix(S, e, nvars_from, backend, order="grevlex"):
    """Matrix taking degree-``e`` forms in ``x`` to forms in ``z`` under ``x = S z``.

    ``S`` has shape ``(nvars_from, nvars_to)``; row ``k`` is the linear form
    replacing ``x_k``.
    """
    S = np.asarray(S)
    n, m = S.shape
    assert n == nvars_from
    if e == 0:
        out = backend.zeros((1, 1))
        out[0, 0] = backend.scalar(1)
        return out
    # degree-1 monomials are ordered x_0 > x_1 > ... in every supported order
    cur = np.array(S, dtype=backend.dtype, copy=True)
    for a in range(1, e):
        ks, par = parent_table(n, a + 1, order)
        T = shift_table(m, a, order)
        Ma1 = len(degree_index(m, a + 1, order)[0])
        nxt = backend.zeros((len(ks), Ma1))
        base = cur[par]
        for i in range(m):
            coeff = S[ks, i]
            if backend.dtype is np.int64:
                nxt[:, T[i]] = (nxt[:, T[i]] + base * coeff[:, None]) % backend.p
            else:
                nxt[:, T[i]] = nxt[:, T[i]] + base * coeff[:, None]
        cur = nxt
    return cur


def restrict(G, S, e, backend, order="grevlex"):
    """Dense degree-``e`` forms ``G`` (rows) pulled back along ``x = S z``."""
    if G.shape[0] == 0:
        m = np.asarray(S).shape[1]
        return backend.zeros((0, len(degree_index(m, e, order)[0])))
    Sub = substitution_matrix(S, e, np.asarray(S).shape[0], backend, order)
    return backend.matmul(G, Sub)


@lru_cache(maxsize=256)
def _diff_maps(nvars, e, order="grevlex"):
    """For each variable k: (target indices, source indices, multipliers) of d/dx_k."""
    monos, _ = degree_index(nvars, e, order)
    _, idx = degree_index(nvars, e - 1, order)
    out = []
    for k in range(nvars):
        src, dst, mult = [], [], []
        for j, m in enumerate(monos):
            if m[k]:
                q = list(m)
                q[k] -= 1
                src.append(j)
                dst.append(idx[tuple(q)])
                mult.append(m[k])
        out.append((np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64), np.array(mult, dtype=np.int64)))
    return out


def dense_diff(G, nvars, e, backend, order="grevlex"):
    """List over variables ``k`` of the partial derivatives of the rows of ``G``."""
    Me1 = len(degree_index(nvars, e - 1, order)[0])
    out = []
    for src, dst, mult in _diff_maps(nvars, e, order):
        D = backend.zeros((G.shape[0], Me1))
        if src.size:
            if backend.dtype is np.int64:
                D[:, dst] = (G[:, src] * mult[None, :]) % backend.p
            else:
                D[:, dst] = G[:, src] * mult[None, :]
        out.append(D)
    return out


def jacobian_minors(J, degs, c, nvars, backend, order="grevlex"):
    """All ``c x c`` minors of a matrix of dense forms.

    ``J[r][s]`` is a dense row vector of degree ``degs[r]`` (all entries of a
    row share a degree). Returns ``{degree: matrix of minors}``. Minors of
    size ``k`` are expanded along their first row into minors of size
    ``k - 1``, one batch per size and leading degree.
    """
    nrows = len(J)
    ncols = len(J[0]) if nrows else 0
    if c == 0:
        one = backend.zeros((1, 1))
        one[0, 0] = backend.scalar(1)
        return {0: one}
    if c > min(nrows, ncols):
        return {}
    prev = {}
    for k in range(1, c + 1):
        cur = {}
        # a k-row minor is only needed as the tail of a c-row set
        row_sets = [R for R in itertools.combinations(range(nrows), k) if R[0] >= c - k]
        col_sets = list(itertools.combinations(range(ncols), k))
        if k == 1:
            for R in row_sets:
                for C in col_sets:
                    cur[(R, C)] = (degs[R[0]], J[R[0]][C[0]])
            prev = cur
            continue
        groups = {}
        for R in row_sets:
            dR = sum(degs[r] for r in R)
            for C in col_sets:
                groups.setdefault((degs[R[0]], dR), []).append((R, C))
        for (dlead, dR), items in groups.items():
            L, Rr, tg, sg = [], [], [], []
            for t, (R, C) in enumerate(items):
                for j, cj in enumerate(C):
                    L.append(J[R[0]][cj])
                    Rr.append(prev[(R[1:], C[:j] + C[j + 1 :])][1])
                    tg.append(t)
                    sg.append(j % 2)
            prods = dense_mul(np.vstack(L), np.vstack(Rr), nvars, dlead, dR - dlead, backend, order)
            sg = np.array(sg, dtype=bool)
            prods[sg] = backend.neg(prods[sg])
            acc = backend.zeros((len(items), prods.shape[1]))
            np.add.at(acc, np.array(tg, dtype=np.int64), prods)
            if backend.dtype is np.int64:
                acc %= backend.p
            for t, (R, C) in enumerate(items):
                cur[(R, C)] = (dR, acc[t])
        prev = cur
    out = {}
    for (R, C), (dR, v) in prev.items():
        out.setdefault(dR, []).append(v)
    return {d: np.vstack(vs) for d, vs in out.items()}
