"""Solving zero-dimensional systems over ``Q(sqrt d)`` through one prime.

The system is reduced mod ``p``. Linear cuts are added until the constant
Hilbert polynomial drops to 1; each resulting single point is lifted to
``p^K`` on the original system and its coordinates are recognized by lattice
reduction. Recognized vectors are accepted only after every generator of the
original system vanishes on them exactly.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from ..errors import (
    HilbertNotConstant,
    LiftFailed,
    NotFound,
    NotStabilized,
    PrecisionTooLow,
    RecognitionFailed,
    SingularJacobian,
)
from ..lift import lift_point, lift_root
from ..poly import evaluate
from ..recog import recognize_vector
from ..ring import QQ, CoefficientMap, QuadraticField, ZMod, sqrt_mod
from ..vgeom.graded import hilbert_polynomial
from ..vgeom.ideal import Ideal
from ..vgeom.zerodim import solve_zero_dim


class GuidedSolution(list):
    """Recognized solution vectors, plus what was tried on the way.

    ``failures`` lists ``{"point": residues mod p, "reason": ...}`` for
    points that did not lead to a verified vector; ``cuts`` records the
    accepted cuts as ``(path, coefficients, Hilbert constant)``.
    """

    def __init__(self, vectors=(), *, hilbert_constant=0, failures=None, cuts=None, points=None):
        super().__init__(vectors)
        self.hilbert_constant = hilbert_constant
        self.failures = failures or []
        self.cuts = cuts or []
        self.points = points or []


@dataclass
class _Node:
    cuts: list
    constant: int
    path: tuple = field(default=())


def _hilbert_constant(I: Ideal) -> int:
    try:
        hd = hilbert_polynomial(I)
    except NotStabilized as exc:
        raise HilbertNotConstant(f"Hilbert polynomial did not stabilize: {exc}") from None
    if not hd.is_constant():
        raise HilbertNotConstant(f"Hilbert polynomial {hd.format()} is not constant")
    return hd.constant()


def reduce_system(system: Ideal, p: int, root=None):
    """``(system mod p, residue of sqrt(d) or None)``."""
    F = ZMod(p)
    ring = system.ring
    if isinstance(ring, QuadraticField):
        cm = CoefficientMap(ring, F, root if root is not None else sqrt_mod(ring.d, p))
        return system.reduce(F, cm), cm.root
    if ring is QQ:
        return system.reduce(F), None
    raise TypeError("the system must have rational or quadratic coefficients")


def verify_solution(system: Ideal, vector) -> bool:
    """Every generator vanishes exactly at ``vector``."""
    return all(not evaluate(g, vector) for g in system.gens)


def hilbert_guided_solve(system: Ideal, p: int, K: int = 200, H: int | None = None, *, seed: int = 0,
                         root=None, max_pencils: int = 8) -> GuidedSolution:
    """Solution vectors of a zero-dimensional system over ``Q(sqrt d)`` (or ``Q``).

    Cuts are members ``l1 + a*l2`` of seeded random pencils of linear forms
    mod ``p``. A member is accepted when the Hilbert constant of the cut
    scheme is positive and smaller than before; accepted members are
    explored breadth first. Each single-point scheme is solved mod ``p``,
    lifted to ``p^K`` on the original system and recognized with height
    bound ``H`` (``None``: the largest the precision supports).

    Raises :class:`HilbertNotConstant` if the reduction is not zero
    dimensional, :class:`LiftFailed` if a point does not lift and
    :class:`RecognitionFailed` if no point gives a verified vector.
    """
    Ip, s = reduce_system(system, p, root)
    c = _hilbert_constant(Ip)
    out = GuidedSolution(hilbert_constant=c)
    if c == 0:
        return out
    F = Ip.ring
    n = Ip.nvars
    amb = Ip.ambient
    rng = random.Random(seed)
    queue = deque([_Node([], c)])
    leaves = []
    while queue:
        node = queue.popleft()
        base = Ideal(Ip.gens + node.cuts, amb, check=False)
        if node.constant == 1:
            leaves.append((node, base))
            continue
        children = []
        for _ in range(max_pencils):
            l1 = amb.linear_form([F(rng.randrange(p)) for _ in range(n)])
            l2 = amb.linear_form([F(rng.randrange(p)) for _ in range(n)])
            members = [l2] + [l1 + l2 * F(a) for a in range(p)]
            children = []
            total = 0
            for m in members:
                if not m:
                    continue
                cc = _hilbert_constant(Ideal(base.gens + [m], amb, check=False))
                if 0 < cc < node.constant:
                    children.append((m, cc))
                    total += cc
            if children:
                break
        if not children:
            out.failures.append({"point": None, "reason": f"no cut splits a scheme of length {node.constant}"})
            continue
        for k, (m, cc) in enumerate(children):
            path = node.path + (k,)
            out.cuts.append((path, [int(m.coefficient(tuple(int(i == j) for j in range(n)))) for i in range(n)], cc))
            queue.append(_Node(node.cuts + [m], cc, path))
    seen = set()
    sK = lift_root(system.ring.d, s, p, K) if s is not None else None
    for node, base in leaves:
        sol = solve_zero_dim(base, seed=seed)
        for pt in sol.points:
            key = tuple(pt.values())
            if key in seen:
                continue
            seen.add(key)
            out.points.append(pt)
            try:
                lifted = lift_point(system, pt, K, root=s, dim=0)
            except SingularJacobian as exc:
                raise LiftFailed(f"point {key} does not lift: {exc}") from None
            try:
                vec = recognize_vector(list(lifted.coords), sK, H)
            except (NotFound, PrecisionTooLow) as exc:
                out.failures.append({"point": list(key), "reason": f"not recognized: {exc}"})
                continue
            if not verify_solution(system, vec):
                out.failures.append({"point": list(key), "reason": "recognized vector is not an exact solution"})
                continue
            out.append(vec)
    if not out and out.failures:
        raise RecognitionFailed("; ".join(str(f["reason"]) for f in out.failures))
    return out


__all__ = ["GuidedSolution", "hilbert_guided_solve", "reduce_system", "verify_solution"]
