"""Local power-series parameterizations (jets) and vanishing-order conditions.

A jet of order ``k`` at a smooth point ``P`` of a ``dim``-dimensional scheme
is a vector of power series ``x(t_1..t_dim)`` truncated at total order ``k``,
with ``x(0) = P`` in the affine chart where the pivot coordinate of ``P`` is
1, such that every generator composed with ``x`` has no term of order ``<= k``.
The order-1 part is a basis of the tangent space; higher parts are solved
order by order from ``J * c = -r`` (``J`` the Jacobian at ``P``), with free
variables set to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import Inconsistent, NoLift, SingularPoint
from ..linalg import nullspace, rank, rref, solve
from ..poly import Polynomial, jacobian, monomials_of_degree
from .ideal import Ideal, ProjPoint


class TruncatedSeries:
    """Power series in ``nparams`` variables, truncated after total order ``order``."""

    __slots__ = ("terms", "order", "nparams", "ring")

    def __init__(self, terms, order, nparams, ring):
        self.terms = {e: c for e, c in terms.items() if c and sum(e) <= order}
        self.order = order
        self.nparams = nparams
        self.ring = ring

    @classmethod
    def constant(cls, c, order, nparams, ring):
        return cls({(0,) * nparams: ring(c)}, order, nparams, ring)

    def _other(self, o):
        if isinstance(o, TruncatedSeries):
            return o
        return TruncatedSeries.constant(o, self.order, self.nparams, self.ring)

    def __add__(self, o):
        o = self._other(o)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, self.ring.zero) + c
        return TruncatedSeries(out, min(self.order, o.order), self.nparams, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries({e: -c for e, c in self.terms.items()}, self.order, self.nparams, self.ring)

    def __sub__(self, o):
        return self + (-self._other(o))

    def __mul__(self, o):
        if not isinstance(o, TruncatedSeries):
            c = self.ring(o)
            return TruncatedSeries({e: v * c for e, v in self.terms.items()}, self.order, self.nparams, self.ring)
        order = min(self.order, o.order)
        out = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in o.terms.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, self.ring.zero) + c1 * c2
        return TruncatedSeries(out, order, self.nparams, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TruncatedSeries.constant(1, self.order, self.nparams, self.ring)
        for _ in range(k):
            out = out * self
        return out

    def coefficient(self, e):
        return self.terms.get(tuple(e), self.ring.zero)

    def low_order_terms(self, below: int):
        """Terms of total order ``< below`` (nonzero ones only)."""
        return {e: c for e, c in self.terms.items() if sum(e) < below}

    def valuation(self):
        """Lowest total order of a nonzero term (``None`` for zero up to ``order``)."""
        return min((sum(e) for e in self.terms), default=None)

    def __repr__(self):
        return f"TruncatedSeries({self.terms!r}, order={self.order})"


def compose(f: Polynomial, series, order=None) -> TruncatedSeries:
    """``f(x_0(t), ..., x_{n-1}(t))`` truncated at ``order``."""
    s0 = series[0]
    order = s0.order if order is None else order
    ring, npar = s0.ring, s0.nparams
    powers = [[TruncatedSeries.constant(1, order, npar, ring)] for _ in series]
    total = TruncatedSeries({}, order, npar, ring)
    for e, c in f.terms.items():
        t = TruncatedSeries.constant(c, order, npar, ring)
        for i, k in enumerate(e):
            if k:
                pw = powers[i]
                while len(pw) <= k:
                    pw.append(pw[-1] * series[i])
                t = t * pw[k]
        total = total + t
    return total


@dataclass
class Jet:
    """Truncated parameterization ``x(t)`` of a scheme near a point."""

    point: ProjPoint
    chart: int
    order: int
    series: list
    tangent: list

    @property
    def dimension(self) -> int:
        return self.series[0].nparams

    def compose(self, f: Polynomial, order=None) -> TruncatedSeries:
        return compose(f, self.series, self.order if order is None else order)

    def residual_order(self, I) -> int:
        """Smallest order of a nonzero term over all generators (``order + 1`` if none)."""
        gens = I.gens if isinstance(I, Ideal) else I
        v = [self.compose(g).valuation() for g in gens]
        v = [x for x in v if x is not None]
        return min(v, default=self.order + 1)


def jets_at_point(I: Ideal, pt, order: int, dim: int = 2) -> Jet:
    """Order-``order`` jet of the ``dim``-dimensional scheme ``V(I)`` at ``pt``.

    Raises :class:`SingularPoint` if the tangent space at ``pt`` does not have
    dimension ``dim`` and :class:`NoLift` if some order cannot be solved.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if not isinstance(pt, ProjPoint):
        pt = ProjPoint([I.ring(c) for c in pt])
    ring = I.ring
    if not I.contains_point(pt):
        raise ValueError(f"{pt} is not on the scheme")
    n = I.nvars
    chart = pt.pivot
    free = [j for j in range(n) if j != chart]
    J = [[row[j] for j in free] for row in jacobian(I.gens, pt)]
    if not J:
        J = [[ring.zero] * len(free)]
    K = nullspace(J, ring, ncols=len(free))
    if len(K) != dim:
        raise SingularPoint(f"tangent space at {pt} has dimension {len(K)}, expected {dim}")
    # canonical tangent frame: the kernel basis in reduced echelon form
    K, _ = rref(K, ring)
    coords = [dict() for _ in range(n)]
    zero_e = (0,) * dim
    for j in range(n):
        coords[j][zero_e] = pt.coords[j]
    for a, v in enumerate(K):
        e = tuple(1 if b == a else 0 for b in range(dim))
        for jj, j in enumerate(free):
            if v[jj]:
                coords[j][e] = v[jj]
    for m in range(2, order + 1):
        series = [TruncatedSeries(c, m, dim, ring) for c in coords]
        comps = [compose(g, series, m) for g in I.gens]
        for e in monomials_of_degree(dim, m):
            rhs = [-s.coefficient(e) for s in comps]
            if not any(rhs):
                continue
            try:
                c = solve(J, rhs, ring)
            except Inconsistent:
                raise NoLift(f"order {m} term {e} of the jet at {pt} has no solution") from None
            for jj, j in enumerate(free):
                if c[jj]:
                    coords[j][e] = c[jj]
    series = [TruncatedSeries(c, order, dim, ring) for c in coords]
    return Jet(pt, chart, order, series, [list(v) for v in K])


@dataclass
class LinearConditions:
    """Rows of linear conditions on the coefficients ``e_1..e_r`` of an ansatz."""

    matrix: list
    labels: list
    ring: object
    nparams: int

    def rank(self) -> int:
        return rank(self.matrix, self.ring) if self.matrix else 0

    def solution_basis(self):
        """Basis of the coefficient vectors satisfying all conditions."""
        if not self.matrix:
            return [[self.ring.one if i == j else self.ring.zero for i in range(self.nparams)] for j in range(self.nparams)]
        K = nullspace(self.matrix, self.ring, ncols=self.nparams)
        return rref(K, self.ring)[0] if K else []

    def __len__(self):
        return len(self.matrix)


def _family(ansatz):
    return list(getattr(ansatz, "basis", ansatz))


def vanish_to_order_conditions(ansatz, jet: Jet, order: int) -> LinearConditions:
    """Conditions for ``sum e_i f_i`` to vanish to ``order`` along ``jet``.

    ``ansatz`` is a list of polynomials ``f_i`` (or an object with a
    ``basis`` attribute). One row per monomial ``t^alpha`` with
    ``|alpha| < order`` whose coefficient is not identically zero.
    """
    if jet.order < order - 1:
        raise ValueError(f"a jet of order {jet.order} cannot impose vanishing to order {order}")
    fam = _family(ansatz)
    ring = jet.series[0].ring
    comps = [jet.compose(f, max(order - 1, 0)) for f in fam]
    rows, labels = [], []
    for k in range(order):
        for e in monomials_of_degree(jet.dimension, k):
            row = [s.coefficient(e) for s in comps]
            if any(row):
                rows.append(row)
                labels.append(e)
    return LinearConditions(rows, labels, ring, len(fam))


def vanishing_order(f: Polynomial, jet: Jet):
    """Order of vanishing of ``f`` along the jet (``None`` if beyond the jet order)."""
    return jet.compose(f).valuation()


__all__ = [
    "Jet",
    "LinearConditions",
    "TruncatedSeries",
    "compose",
    "jets_at_point",
    "vanish_to_order_conditions",
    "vanishing_order",
]
