"""Random points on projective varieties over ``F_p`` by linear slicing."""

from __future__ import annotations

import random

from ..errors import NotStabilized, NotZeroDimensional, SamplingExhausted
from ..ring import ZMod
from .graded import hilbert_polynomial
from .ideal import Ideal, ProjPoint
from .zerodim import solve_zero_dim


def random_linear_form(ambient, rng):
    p = ambient.ring.p
    while True:
        coeffs = [rng.randrange(p) for _ in range(ambient.nvars)]
        if any(coeffs):
            return ambient.linear_form(coeffs)


def sample_points(I: Ideal, count: int, seed: int = 0, *, budget: int = 200, dimension: int | None = None,
                  allow_extension: bool = False, partial: bool = False):
    """``count`` distinct ``F_p``-points of ``V(I)``.

    Each attempt adds ``dim V(I)`` random linear forms and solves the
    resulting zero-dimensional system; attempts whose slice is not
    zero-dimensional are skipped. Raises :class:`SamplingExhausted` when
    ``budget`` slices do not produce enough points. Points over extension
    fields are never returned; with ``allow_extension=False`` (the default)
    they are silently dropped, otherwise their count is attached to the
    result as ``extension_seen``. With ``partial`` the points found so far
    are returned instead of raising.
    """
    ring = I.ring
    if not isinstance(ring, ZMod) or not ring.is_field:
        raise TypeError("sampling works over a prime field")
    rng = random.Random(seed)
    if dimension is None:
        hd = hilbert_polynomial(I)
        dimension = hd.dimension
    if dimension < 0:
        raise SamplingExhausted("the variety is empty")
    found = []
    seen = set()
    extension_seen = 0
    for _ in range(budget):
        cuts = [random_linear_form(I.ambient, rng) for _ in range(dimension)]
        J = I + cuts
        try:
            sol = solve_zero_dim(J, seed=rng.randrange(2**31))
        except (NotZeroDimensional, NotStabilized):
            continue
        extension_seen += sol.extension_count
        for pt in sol.points:
            if pt not in seen:
                seen.add(pt)
                found.append(pt)
                if len(found) == count:
                    return _Sample(found, extension_seen)
    if partial:
        return _Sample(found, extension_seen)
    raise SamplingExhausted(f"found {len(found)} of {count} points after {budget} slices")


class _Sample(list):
    """List of points with the number of extension-field points met on the way."""

    def __init__(self, points, extension_seen=0):
        super().__init__(points)
        self.extension_seen = extension_seen


def enumerate_points(I: Ideal):
    """All ``F_p``-points by exhaustive search (small ``p`` and few variables only)."""
    import itertools

    ring = I.ring
    p = ring.p
    n = I.nvars
    out = []
    for pivot in range(n):
        for tail in itertools.product(range(p), repeat=n - pivot - 1):
            coords = [ring(0)] * pivot + [ring(1)] + [ring(t) for t in tail]
            if I.contains_point(coords):
                out.append(ProjPoint(coords))
    return out
