"""End-to-end search for a nonreduced hyperplane section of a surface over a number field.

Stages: reduce mod ``p`` and search all cuts of a pattern; pick a hit and
sample points of its section; lift points, tangent frames and cut
coefficients together to ``p^K``; recognize the coefficients; re-check the
recognized cut exactly; optionally move it to a target form by an
equivariant coordinate change.
"""

from __future__ import annotations

import random
import time
import warnings
from fractions import Fraction

from .errors import FppError, NotFound, PrecisionTooLow, StageError, UnderDeterminedWarning
from .lift import ConstraintSystem, LiftState, cut_constraints, lift_constrained, lift_root, point_constraints
from .lift import state_ring, tangent_constraints
from .linalg import nullspace
from .poly import jacobian
from .recog import recognize_vector
from .ring import QuadElem, format_quad
from .search.coordchange import check_coordinate_change, equivariant_coordinate_change
from .search.cuts import InvariantCutPattern, search_nonreduced_cuts
from .search.guided import reduce_system
from .vgeom.ideal import Ideal
from .vgeom.sampling import sample_points
from .vgeom.singular import CurveTester


class _Stage:
    def __init__(self, name, timings):
        self.name, self.timings = name, timings

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, et, ev, tb):
        self.timings[self.name] = round(time.perf_counter() - self.t0, 3)
        if ev is not None and isinstance(ev, Exception) and not isinstance(ev, StageError):
            raise StageError(self.name, ev) from ev
        return False


def _tangent_frame(I: Ideal, pt):
    """Basis of the tangent space at ``pt`` with zero chart coordinate, or ``None`` if singular."""
    F = I.ring
    n = I.nvars
    J = jacobian(I.gens, pt)
    rows = [list(r) for r in J] + [[F.one if j == pt.pivot else F.zero for j in range(n)]]
    K = nullspace(rows, F, ncols=n)
    return K if len(K) == 2 else None


def _pattern_constraints(state, ring, pattern: InvariantCutPattern, root):
    """Cut coefficients equal within a group and zero outside the groups."""
    R = state_ring(state, ring)
    eqs, labels = [], []
    grouped = set()
    for g in pattern.groups:
        grouped.update(g)
        for a, b in zip(g, g[1:]):
            eqs.append(R.gen(f"A{a}") - R.gen(f"A{b}"))
            labels.append(f"A{a}=A{b}")
    for i in range(pattern.nvars):
        if i not in grouped:
            eqs.append(R.gen(f"A{i}"))
            labels.append(f"A{i}=0")
    return ConstraintSystem(R, eqs, root, labels)


def _pivot_orders(names, nparams, seed, extra=3):
    base = [x for x in names if not x.startswith("A")]
    A = [f"A{j}" for j in range(nparams)]
    orders = [base + A[::-1], list(names)]
    rng = random.Random(seed)
    for _ in range(extra):
        perm = A[:]
        rng.shuffle(perm)
        orders.append(base + perm)
    return orders


def _projectively_equal(u, v, p):
    u = [int(x) % p for x in u]
    v = [int(x) % p for x in v]
    return all((a * y - b * x) % p == 0 for a, b in zip(u, v) for x, y in zip(u, v))


def run_torsion_pipeline(surface: Ideal, p: int, *, pattern: InvariantCutPattern | None = None, K: int = 40,
                         H: int | None = None, select="densest", npoints: int | None = None, seed: int = 0,
                         action=None, target=None, jobs: int = 1, trials: int = 8, root=None) -> dict:
    """Run every stage and return a JSON-ready report.

    ``surface`` has rational or quadratic coefficients. ``select`` picks the
    hit to lift: an index into the hits in scan order, ``"first"``, or
    ``"densest"`` (most nonzero coefficients, first in scan order among
    ties). Failures are raised
    as :class:`StageError` naming the stage. An empty hit set is a normal
    outcome (``status`` is ``"no nonreduced cut"``).
    """
    timings = {}
    report = {"p": p, "K": K, "seed": seed, "timings": timings}
    with _Stage("reduce", timings):
        Ip, s = reduce_system(surface, p, root)
    n = surface.nvars
    pattern = pattern or InvariantCutPattern.all_free(n)
    with _Stage("search", timings):
        rep = search_nonreduced_cuts(Ip, pattern, seed=seed, jobs=jobs, trials=trials)
    report["search"] = rep.to_json()
    report["hits"] = len(rep.hits)
    if not rep.hits:
        report["status"] = "no nonreduced cut"
        return report
    if select == "first":
        select = 0
    elif select == "densest":
        select = max(range(len(rep.hits)), key=lambda i: (sum(1 for c in rep.hits[i] if c), -i))
    hit = rep.hits[select]
    cut_p = pattern.cut(hit)
    report["selected"] = {"index": select, "pattern_coefficients": list(hit), "cut_mod_p": cut_p}
    F = Ip.ring
    with _Stage("sample", timings):
        form = Ip.ambient.linear_form([F(c) for c in cut_p])
        want = npoints or n + 2
        pts = sample_points(Ip + [form], want, seed=seed, dimension=1, partial=True)
        pts_frames = [(pt, fr) for pt in pts for fr in [_tangent_frame(Ip, pt)] if fr is not None]
        if not pts_frames:
            raise StageError("sample", FppError("no smooth F_p-points on the section"))
    report["points"] = [pt.values() for pt, _ in pts_frames]
    ring = surface.ring
    d = getattr(ring, "d", None)
    with _Stage("lift", timings):
        state = LiftState.create([pt for pt, _ in pts_frames], [fr for _, fr in pts_frames], [F(c) for c in cut_p])
        cs = (point_constraints(surface, state, s) + tangent_constraints(surface, state, s)
              + cut_constraints(state, ring, root=s) + _pattern_constraints(state, ring, pattern, s))
        sK = lift_root(d, s, p, K) if s is not None else None
        attempts = []
        cut_exact = None
        tester = CurveTester(surface, trials=0, seed=seed)
        for order in _pivot_orders(state.variable_names(), n, seed):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UnderDeterminedWarning)
                lifted, lrep = lift_constrained(state, cs, K, report=True, pivot_order=order)
            names = state.variable_names()
            info = {"free": [names[j] for j in lrep.free], "rounds": lrep.rounds}
            try:
                cand = recognize_vector(lifted.params, sK, H)
                if s is None:
                    cand = [Fraction(c.a, c.c) for c in cand]
            except (NotFound, PrecisionTooLow) as exc:
                info["result"] = f"not recognized: {exc}"
                attempts.append(info)
                continue
            if not _projectively_equal([_reduce(c, p, s) for c in cand], cut_p, p):
                info["result"] = "recognized cut does not reduce to the selected hit"
                attempts.append(info)
                continue
            if not tester.exact(tester.coefficients(cand)):
                info["result"] = "recognized cut has a reduced section"
                attempts.append(info)
                continue
            info["result"] = "verified"
            attempts.append(info)
            cut_exact = cand
            break
    report["lift_attempts"] = attempts
    if cut_exact is None:
        raise StageError("recognize", FppError("no pivot choice gave a verified exact cut"))
    report["cut"] = [format_quad(c) if isinstance(c, QuadElem) else str(c) for c in cut_exact]
    report["cut_mod_p_recomputed"] = [_reduce(c, p, s) for c in cut_exact]
    report["verified"] = True
    report["status"] = "found"
    if action is not None and target is not None:
        with _Stage("coordchange", timings):
            src = surface.ambient.linear_form(list(cut_exact))
            M = equivariant_coordinate_change(action, src, target)
            if not check_coordinate_change(action, M, src, target):
                raise StageError("coordchange", FppError("coordinate change fails its re-check"))
        report["coordinate_change"] = [[str(x) for x in row] for row in M]
    else:
        report["coordinate_change"] = None
    return report


def _reduce(c, p, s):
    from .ring import ZModElem, reduce_quad

    if isinstance(c, QuadElem) and c.b:
        return reduce_quad(c, p, s).value
    q = Fraction(c.a, c.c) if isinstance(c, QuadElem) else Fraction(c)
    return ZModElem(q, p).value


__all__ = ["run_torsion_pipeline"]
