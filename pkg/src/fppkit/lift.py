"""Hensel/Newton lifting of points and constrained parameter vectors.

Everything is reduced to one Newton iteration on an integer system
``F(u) = 0`` over ``Z/p^K``: the Jacobian modulo ``p`` fixes, once and for
all, a set of independent pivot equations and pivot unknowns (reduced echelon
form, lexicographically first). Each round solves the square pivot system for
a correction of the pivot unknowns; all other unknowns keep their value (the
"free variables are zero" rule), and every equation, pivot or not, is
re-checked at the new precision.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction

import numpy as np

from .errors import Inconsistent, SingularJacobian, UnderDeterminedWarning
from .linalg import rref_mod_p
from .poly import PolyRing, Polynomial
from .ring import Modulus, QuadElem, QuadraticField, ZMod, ZModElem, reduce_quad, sqrt_mod
from .vgeom.ideal import Ideal, ProjPoint

SCHEDULES = ("double", "step")


def lift_root(d: int, s, p: int, k: int) -> ZModElem:
    """The square root of ``d`` modulo ``p**k`` that reduces to ``s`` modulo ``p``."""
    return _lift_root(int(d), int(s.value if isinstance(s, ZModElem) else s) % p, int(p), int(k))


@lru_cache(maxsize=64)
def _lift_root(d, s0, p, k):
    r = sqrt_mod(d, p, k)
    if r.value % p != s0:
        r = -r
    if r.value % p != s0:
        raise ValueError(f"{s0} is not a square root of {d} mod {p}")
    return r


def _coefficient_to_int(c, p, K, root):
    N = p**K
    if isinstance(c, ZModElem):
        if c.modulus.p != p or c.modulus.k < K:
            raise ValueError(f"coefficient known only mod {c.modulus}, need {p}^{K}")
        return c.value % N
    if isinstance(c, QuadElem):
        if c.b == 0:
            return ZModElem(c.rational_part, Modulus(p, K)).value
        if root is None:
            raise ValueError("a residue of the square root is needed to reduce quadratic coefficients")
        return reduce_quad(c, Modulus(p, K), lift_root(c.d, root, p, K)).value
    return ZModElem(Fraction(c), Modulus(p, K)).value


class IntegerSystem:
    """Polynomial equations compiled to integer coefficients modulo ``p**K``."""

    def __init__(self, polys, p: int, K: int, root=None):
        self.p, self.K = p, K
        self.nvars = polys[0].nvars if polys else 0
        self.eqs = [self._compile(f, root) for f in polys]
        self.jac = [[self._compile(f.diff(j), root) for j in range(self.nvars)] for f in polys]

    def _compile(self, f, root):
        return [(_coefficient_to_int(c, self.p, self.K, root), [(i, k) for i, k in enumerate(e) if k]) for e, c in f.terms.items()]

    @staticmethod
    def _eval(terms, u, N):
        total = 0
        for c, mono in terms:
            t = c
            for i, k in mono:
                t = t * pow(u[i], k, N) % N
            total += t
        return total % N

    def values(self, u, N):
        return [self._eval(t, u, N) for t in self.eqs]

    def jacobian(self, u, N):
        return [[self._eval(t, u, N) if t else 0 for t in row] for row in self.jac]


def _pivots_mod_p(J, p, cols):
    """Independent rows and pivot columns (restricted to ``cols``) of ``J`` mod ``p``."""
    if not J or not cols:
        return [], []
    if p >= 2**31:
        raise ValueError("lifting requires p < 2**31")
    A = np.array([[J[i][j] % p for j in cols] for i in range(len(J))], dtype=np.int64)
    _, rows = rref_mod_p(A.T, p)
    _, pc = rref_mod_p(A[rows], p)
    return list(rows), [cols[j] for j in pc]


def _solve_unit(A, b, N, p):
    """Solve the square system ``A x = b`` mod ``N`` (``A`` invertible mod ``p``)."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] % p), None)
        if piv is None:
            raise SingularJacobian("pivot system became singular")
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], -1, N)
        M[c] = [x * inv % N for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] % N:
                f = M[r][c]
                M[r] = [(x - f * y) % N for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


@dataclass
class NewtonReport:
    rounds: int = 0
    precisions: list = field(default_factory=list)
    free: list = field(default_factory=list)
    pivot_equations: list = field(default_factory=list)


def newton_lift(system: IntegerSystem, u, k0: int, K: int, fixed=(), schedule: str = "double",
                expected_rank: int | None = None, names=None, pivot_order=None, balanced_free: bool = True) -> tuple:
    """Lift ``u`` (integers, a solution mod ``p**k0``) to a solution mod ``p**K``.

    ``fixed`` indexes unknowns that are never corrected. Pivot unknowns are
    chosen greedily in ``pivot_order`` (default: index order), so unknowns
    listed late are the first to be left free. Free unknowns keep their
    value; with ``balanced_free`` a free unknown known only mod ``p`` is
    first replaced by its balanced representative, so that it stays a small
    integer. Returns ``(u, report)``.
    """
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}")
    p = system.p
    if K > system.K:
        raise ValueError(f"system compiled to precision {system.K} < {K}")
    u = [int(x) % p**k0 for x in u]
    bad = [i for i, v in enumerate(system.values(u, p**k0)) if v]
    if bad:
        raise Inconsistent(f"equations {bad} do not vanish mod {p}^{k0} at the starting point")
    fixed = set(fixed)
    order = list(range(system.nvars)) if pivot_order is None else list(pivot_order)
    if sorted(order) != list(range(system.nvars)):
        raise ValueError("pivot_order must be a permutation of the unknowns")
    cols = [j for j in order if j not in fixed]
    rows, piv = _pivots_mod_p(system.jacobian(u, p), p, cols)
    if expected_rank is not None and len(rows) != expected_rank:
        raise SingularJacobian(f"Jacobian has rank {len(rows)} mod {p}, expected {expected_rank}")
    report = NewtonReport(pivot_equations=rows)
    report.free = sorted(j for j in cols if j not in set(piv))
    if balanced_free and k0 == 1:
        for j in report.free:
            if u[j] > p // 2:
                u[j] -= p
    if report.free and k0 < K:
        labels = [names[j] for j in report.free] if names else report.free
        warnings.warn(f"corrections have free unknowns {labels}; they are kept fixed", UnderDeterminedWarning, stacklevel=3)
    k = k0
    while k < K:
        k1 = min(2 * k if schedule == "double" else k + 1, K)
        N1 = p**k1
        e = k1 - k
        Ne = p**e
        F = system.values(u, N1)
        J = system.jacobian(u, Ne)
        A = [[J[r][c] for c in piv] for r in rows]
        b = [(-(F[r] // p**k)) % Ne for r in rows]
        delta = _solve_unit(A, b, Ne, p) if rows else []
        for c, dv in zip(piv, delta):
            u[c] = (u[c] + p**k * dv) % N1
        bad = [i for i, v in enumerate(system.values(u, N1)) if v]
        if bad:
            raise Inconsistent(f"equations {bad} fail mod {p}^{k1} after the correction step")
        k = k1
        report.rounds += 1
        report.precisions.append(k)
    return u, report


# -- points ----------------------------------------------------------------


def _precision_of(pt):
    c = pt.coords[0]
    if not isinstance(c, ZModElem):
        raise TypeError("the point must have residue coordinates")
    return c.modulus.p, c.modulus.k


def lift_point(I: Ideal, pt: ProjPoint, k: int, *, root=None, schedule: str = "double", dim: int | None = None,
               report: bool = False):
    """Lift a point of ``V(I)`` mod ``p`` (or ``p**j``) to a point mod ``p**k``.

    ``I`` has rational, quadratic (with ``root`` a residue of the square
    root mod ``p``) or ``Z/p^K`` coefficients. The pivot coordinate stays 1.
    ``dim`` is the expected dimension of ``V(I)`` at the point; by default it
    is read off the Hilbert polynomial of ``I`` mod ``p``. Raises
    :class:`SingularJacobian` if the Jacobian rank differs from the
    codimension.
    """
    if not isinstance(pt, ProjPoint):
        pt = ProjPoint(pt)
    p, k0 = _precision_of(pt)
    if k < k0:
        raise ValueError(f"target precision {k} below the input precision {k0}")
    n = I.nvars
    if dim is None:
        dim = _dimension_mod_p(I, p, root)
    system = IntegerSystem(I.gens, p, k, root)
    u0 = [c.value for c in pt.coords]
    u, rep = newton_lift(system, u0, k0, k, fixed=[pt.pivot], schedule=schedule, expected_rank=n - 1 - dim)
    m = Modulus(p, k)
    out = ProjPoint([ZModElem(v, m) for v in u])
    return (out, rep) if report else out


def _dimension_mod_p(I: Ideal, p: int, root=None) -> int:
    from .ring import CoefficientMap
    from .vgeom.graded import hilbert_polynomial

    F = ZMod(p)
    ring = I.ring
    if isinstance(ring, ZMod):
        Ip = I.reduce(F, lambda c: F(c.value))
    elif isinstance(ring, QuadraticField):
        cm = CoefficientMap(ring, F, root)
        Ip = I.reduce(F, cm)
    else:
        Ip = I.reduce(F)
    return hilbert_polynomial(Ip).dimension


# -- constrained lifting --------------------------------------------------


@dataclass
class LiftState:
    """Points, tangent frames and parameters known modulo ``p**k``.

    Unknowns are flattened in the order of :meth:`variable_names`:
    ``P{i}_{j}`` point coordinates, ``T{i}_{a}_{j}`` tangent entries, ``A{j}``
    parameters. ``pinned`` names unknowns that are never corrected
    (projective normalizations).
    """

    modulus: Modulus
    points: list = field(default_factory=list)
    tangents: list = field(default_factory=list)
    params: list = field(default_factory=list)
    pinned: frozenset = frozenset()
    constraint_hash: str | None = None

    @property
    def p(self):
        return self.modulus.p

    @property
    def k(self):
        return self.modulus.k

    @classmethod
    def create(cls, points=(), tangents=(), params=(), *, pin_params: bool = True, modulus=None):
        """State with the standard pins.

        Point pivots are 1; each tangent frame is put in reduced echelon
        form and its pivot entries (plus the point's pivot entry, which is 0)
        are pinned; with ``pin_params`` the first unit parameter is scaled to 1.
        """
        points = [p if isinstance(p, ProjPoint) else ProjPoint(p) for p in points]
        tangents = [list(map(list, fr)) for fr in tangents] or [[] for _ in points]
        params = list(params)
        sample = (points[0].coords[0] if points else params[0])
        m = modulus or sample.modulus
        pins = set()
        frames = []
        for i, (pt, fr) in enumerate(zip(points, tangents)):
            pins.add(f"P{i}_{pt.pivot}")
            if any(int(v[pt.pivot]) % m.N for v in fr):
                raise ValueError(f"tangent vectors at point {i} must vanish in the chart coordinate {pt.pivot}")
            if fr:
                fr = _echelon_frame(fr, pt.pivot, m)
                for a, v in enumerate(fr):
                    lead = next(j for j, x in enumerate(v) if x.value % m.p)
                    for b2 in range(len(fr)):
                        pins.add(f"T{i}_{b2}_{lead}")
                    pins.add(f"T{i}_{a}_{pt.pivot}")
            frames.append(fr)
        if params and pin_params:
            j0 = next((j for j, x in enumerate(params) if x.value % m.p), None)
            if j0 is None:
                raise ValueError("all parameters vanish mod p")
            inv = params[j0].inv()
            params = [x * inv for x in params]
            pins.add(f"A{j0}")
        return cls(m, points, frames, params, frozenset(pins))

    def variable_names(self):
        names = []
        for i, pt in enumerate(self.points):
            names += [f"P{i}_{j}" for j in range(len(pt))]
        for i, fr in enumerate(self.tangents):
            for a, v in enumerate(fr):
                names += [f"T{i}_{a}_{j}" for j in range(len(v))]
        names += [f"A{j}" for j in range(len(self.params))]
        return names

    def values(self):
        out = []
        for pt in self.points:
            out += [c.value for c in pt.coords]
        for fr in self.tangents:
            for v in fr:
                out += [c.value for c in v]
        out += [c.value for c in self.params]
        return out

    def with_values(self, u, k):
        m = Modulus(self.p, k)
        it = iter(u)
        points = [ProjPoint([ZModElem(next(it), m) for _ in pt.coords], normalize=False) for pt in self.points]
        tangents = [[[ZModElem(next(it), m) for _ in v] for v in fr] for fr in self.tangents]
        params = [ZModElem(next(it), m) for _ in self.params]
        return LiftState(m, points, tangents, params, self.pinned, self.constraint_hash)

    def reduce(self, j: int) -> "LiftState":
        """The state modulo ``p**j``."""
        if j > self.k:
            raise ValueError("cannot raise precision by reduction")
        N = self.p**j
        return self.with_values([v % N for v in self.values()], j)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "modulus": str(self.modulus.N),
            "points": [[str(c.value) for c in pt.coords] for pt in self.points],
            "tangents": [[[str(c.value) for c in v] for v in fr] for fr in self.tangents],
            "params": [str(c.value) for c in self.params],
            "pinned": sorted(self.pinned),
            "constraint_hash": self.constraint_hash,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data) -> "LiftState":
        if isinstance(data, str):
            data = json.loads(data)
        m = Modulus(int(data["p"]), int(data["k"]))
        if int(data.get("modulus", m.N)) != m.N:
            raise ValueError("modulus field disagrees with p and k")
        points = [ProjPoint([ZModElem(int(x), m) for x in pt], normalize=False) for pt in data["points"]]
        tangents = [[[ZModElem(int(x), m) for x in v] for v in fr] for fr in data["tangents"]]
        params = [ZModElem(int(x), m) for x in data["params"]]
        return cls(m, points, tangents, params, frozenset(data.get("pinned", [])), data.get("constraint_hash"))


def _echelon_frame(frame, pivot, m):
    """Tangent frame mod ``p**k`` in reduced echelon form (unit pivots)."""
    N, p = m.N, m.p
    R = [[int(x.value if isinstance(x, ZModElem) else x) % N for x in v] for v in frame]
    r = 0
    n = len(R[0])
    for c in range(n):
        if r == len(R):
            break
        piv = next((i for i in range(r, len(R)) if R[i][c] % p), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = pow(R[r][c], -1, N)
        R[r] = [x * inv % N for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [(x - f * y) % N for x, y in zip(R[i], R[r])]
        r += 1
    if r < len(R):
        raise ValueError("tangent vectors are dependent mod p")
    return [[ZModElem(x, m) for x in v] for v in R]


@dataclass
class ConstraintSystem:
    """Equations in the unknowns of a :class:`LiftState` (same variable names)."""

    ambient: PolyRing
    equations: list
    root: object = None
    labels: list = field(default_factory=list)

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.ambient.names, self.ambient.ring.tag)).encode())
        for f in self.equations:
            h.update(str(f).encode() + b"\n")
        return h.hexdigest()

    def __add__(self, other: "ConstraintSystem") -> "ConstraintSystem":
        if other.ambient.names != self.ambient.names:
            raise ValueError("constraint systems over different unknowns")
        return ConstraintSystem(self.ambient, self.equations + other.equations, self.root or other.root,
                                self.labels + other.labels)


def state_ring(state: LiftState, ring) -> PolyRing:
    return PolyRing(state.variable_names(), ring)


def _point_vars(R, state, i):
    return [R.gen(f"P{i}_{j}") for j in range(len(state.points[i]))]


def point_constraints(I: Ideal, state: LiftState, root=None) -> ConstraintSystem:
    """Every generator vanishes at every point."""
    R = state_ring(state, I.ring)
    eqs, labels = [], []
    for i in range(len(state.points)):
        X = _point_vars(R, state, i)
        for g_i, g in enumerate(I.gens):
            eqs.append(g.substitute(X))
            labels.append(f"gen{g_i}(P{i})")
    return ConstraintSystem(R, eqs, root, labels)


def tangent_constraints(I: Ideal, state: LiftState, root=None) -> ConstraintSystem:
    """Every tangent vector is orthogonal to every generator gradient at its point."""
    R = state_ring(state, I.ring)
    eqs, labels = [], []
    grads = [[g.diff(j) for j in range(I.nvars)] for g in I.gens]
    for i, fr in enumerate(state.tangents):
        X = _point_vars(R, state, i)
        for a in range(len(fr)):
            T = [R.gen(f"T{i}_{a}_{j}") for j in range(I.nvars)]
            for g_i, gr in enumerate(grads):
                eqs.append(sum((d.substitute(X) * t for d, t in zip(gr, T)), R.zero()))
                labels.append(f"grad{g_i}(P{i}).T{i}_{a}")
    return ConstraintSystem(R, eqs, root, labels)


def cut_constraints(state: LiftState, ring, *, tangents: bool = True, root=None) -> ConstraintSystem:
    """The linear form with coefficients ``A`` vanishes at the points (and on their tangents)."""
    R = state_ring(state, ring)
    A = [R.gen(f"A{j}") for j in range(len(state.params))]
    eqs, labels = [], []
    for i in range(len(state.points)):
        X = _point_vars(R, state, i)
        eqs.append(sum((a * x for a, x in zip(A, X)), R.zero()))
        labels.append(f"cut(P{i})")
        if tangents:
            for a_i in range(len(state.tangents[i])):
                T = [R.gen(f"T{i}_{a_i}_{j}") for j in range(len(X))]
                eqs.append(sum((a * t for a, t in zip(A, T)), R.zero()))
                labels.append(f"cut(T{i}_{a_i})")
    return ConstraintSystem(R, eqs, root, labels)


def check_state(state: LiftState, constraints: ConstraintSystem) -> list:
    """Indices of constraints that do not vanish modulo ``p**k``."""
    system = IntegerSystem(constraints.equations, state.p, state.k, constraints.root)
    return [i for i, v in enumerate(system.values(state.values(), state.modulus.N)) if v]


def lift_constrained(state: LiftState, constraints: ConstraintSystem, target_k: int | None = None, *,
                     schedule: str = "double", report: bool = False, pivot_order=None):
    """Raise the precision of ``state`` so that all constraints hold mod ``p**target_k``.

    Without ``target_k`` one round is made (``k -> 2k`` or ``k -> k+1``).
    Corrections are multiples of ``p**k``; pinned unknowns never move and
    unknowns outside the pivot set keep their value, with an
    :class:`UnderDeterminedWarning`.
    """
    if constraints.ambient.names != tuple(state.variable_names()):
        raise ValueError("constraint unknowns do not match the state")
    k0 = state.k
    if target_k is None:
        target_k = 2 * k0 if schedule == "double" else k0 + 1
    if target_k < k0:
        raise ValueError("target precision below the current one")
    names = state.variable_names()
    fixed = [i for i, nm in enumerate(names) if nm in state.pinned]
    if pivot_order is not None:
        index = {nm: i for i, nm in enumerate(names)}
        pivot_order = [index[x] if isinstance(x, str) else int(x) for x in pivot_order]
    system = IntegerSystem(constraints.equations, state.p, target_k, constraints.root)
    u, rep = newton_lift(system, state.values(), k0, target_k, fixed=fixed, schedule=schedule, names=names,
                         pivot_order=pivot_order)
    out = state.with_values(u, target_k)
    out.constraint_hash = constraints.digest()
    if out.reduce(k0).values() != state.values():
        raise AssertionError("lift does not reduce to the input state")
    return (out, rep) if report else out


__all__ = [
    "ConstraintSystem",
    "IntegerSystem",
    "LiftState",
    "NewtonReport",
    "check_state",
    "cut_constraints",
    "lift_constrained",
    "lift_point",
    "lift_root",
    "newton_lift",
    "point_constraints",
    "state_ring",
    "tangent_constraints",
]
