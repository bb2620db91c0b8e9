"""Forms of a given degree vanishing (to a given order) on a point set."""

from __future__ import annotations

import itertools
from math import comb

from ..linalg import backend_for
from ..poly import PolyRing, Polynomial, monomials_of_degree, weight_component_basis
from .ideal import ProjPoint


def _coords(pt):
    return pt.coords if isinstance(pt, ProjPoint) else tuple(pt)


def _ring_of(points, ambient):
    if ambient is not None:
        return ambient.ring
    from ..ring import QQ, QuadElem, QuadraticField, ZModElem

    x = _coords(points[0])[0]
    if isinstance(x, ZModElem):
        from ..ring import ZMod

        return ZMod(x.modulus.p, x.modulus.k)
    if isinstance(x, QuadElem):
        return QuadraticField(x.d)
    return QQ


def derivative_multi_indices(nvars: int, order: int):
    """All exponent vectors ``alpha`` with ``|alpha| < order``."""
    out = []
    for k in range(order):
        out.extend(monomials_of_degree(nvars, k))
    return out


def condition_matrix(points, monos, order: int, backend):
    """Rows: Hasse derivatives ``D^alpha`` (``|alpha| < order``) at each point;
    columns: the monomials ``monos``."""
    if not monos:
        return backend.zeros((0, 0))
    n = len(monos[0])
    alphas = derivative_multi_indices(n, order)
    rows = []
    for pt in points:
        x = [backend.scalar(c) for c in _coords(pt)]
        if len(x) != n:
            raise ValueError("point and monomials disagree on the number of variables")
        for alpha in alphas:
            row = []
            for m in monos:
                if any(a > e for a, e in zip(alpha, m)):
                    row.append(0)
                    continue
                v = 1
                for a, e, xi in zip(alpha, m, x):
                    v = v * comb(e, a) * xi ** (e - a)
                row.append(v)
            rows.append(row)
    return backend.asarray(rows) if rows else backend.zeros((0, len(monos)))


def vanishing_forms(points, degree: int, weight_filter=None, order: int = 1, ambient: PolyRing | None = None):
    """Basis of the degree-``degree`` forms vanishing to ``order`` at every point.

    ``weight_filter`` is an optional ``(CyclicAction, w)``: only monomials of
    weight ``w`` are used. The basis is returned in reduced echelon form with
    respect to the monomial order, so the output is canonical.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    points = list(points)
    if ambient is None:
        if not points:
            raise ValueError("give an ambient ring when there are no points")
        n = len(_coords(points[0]))
        ambient = PolyRing([f"x{i}" for i in range(n)], _ring_of(points, None))
    ring = ambient.ring
    backend = backend_for(ring)
    if weight_filter is not None:
        act, w = weight_filter
        monos = weight_component_basis(degree, w, act, ambient)
    else:
        monos = list(ambient.monomials(degree))
    if not monos:
        return []
    C = condition_matrix(points, monos, order, backend)
    K = backend.nullspace(C, len(monos)) if C.shape[0] else backend.eye(len(monos))
    if K.shape[0] == 0:
        return []
    R, _ = backend.rref(K)
    out = []
    for row in R:
        terms = {m: backend.to_ring(c) for m, c in zip(monos, row) if backend.nonzero(c)}
        out.append(Polynomial(ambient, terms))
    return out


def vanishing_forms_by_weight(points, degree, act, order=1, ambient=None):
    """``{w: forms}`` over all weights of the action (a partition of the space)."""
    return {w: vanishing_forms(points, degree, (act, w), order, ambient) for w in range(act.order)}


def check_vanishing(forms, points, order: int = 1) -> bool:
    """Independent re-check: all Hasse derivatives below ``order`` vanish."""
    for f in forms:
        n = f.nvars
        for alpha in itertools.chain.from_iterable(monomials_of_degree(n, k) for k in range(order)):
            h = f.hasse(alpha)
            for pt in points:
                if h.evaluate(_coords(pt)):
                    return False
    return True


def evaluation_rank(points, degree, ambient):
    backend = backend_for(ambient.ring)
    C = condition_matrix(points, list(ambient.monomials(degree)), 1, backend)
    return backend.rank(C) if C.shape[0] else 0

