"""Exhaustive search for hyperplane cuts whose section of a surface is nonreduced."""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..errors import NotACurve
from ..ring import ZMod
from ..vgeom.ideal import Ideal
from ..vgeom.singular import CurveTester


@dataclass(frozen=True)
class InvariantCutPattern:
    """Linear forms with one unknown coefficient per group of variables.

    ``groups`` are disjoint tuples of variable indices (variables outside
    every group get coefficient 0). ``pin`` is the index of the group whose
    coefficient is fixed to 1; with ``pin=None`` every nonzero tuple is
    scanned up to scaling (first nonzero entry 1).
    """

    groups: tuple
    nvars: int
    pin: int | None = 0

    def __post_init__(self):
        groups = tuple(tuple(int(i) for i in g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        flat = [i for g in groups for i in g]
        if any(not g for g in groups) or not groups:
            raise ValueError("groups must be nonempty")
        if len(set(flat)) != len(flat) or any(not 0 <= i < self.nvars for i in flat):
            raise ValueError("groups must be disjoint sets of variable indices")
        if self.pin is not None and not 0 <= self.pin < len(groups):
            raise ValueError(f"pin {self.pin} is not a group index")

    @classmethod
    def all_free(cls, nvars: int) -> "InvariantCutPattern":
        """Every variable its own group, scanned projectively."""
        return cls(tuple((i,) for i in range(nvars)), nvars, None)

    @classmethod
    def from_action(cls, act, pin: int | None = 0, skip=()) -> "InvariantCutPattern":
        """Groups = orbits of the permutation part of ``act`` (minus ``skip`` orbits)."""
        orbits = [o for k, o in enumerate(act.orbits()) if k not in set(skip)]
        return cls(tuple(orbits), act.nvars, pin)

    @property
    def nfree(self) -> int:
        return len(self.groups) - (self.pin is not None)

    def count(self, p: int) -> int:
        k = len(self.groups)
        return p ** (k - 1) if self.pin is not None else (p**k - 1) // (p - 1)

    def tuples(self, p: int, first=None):
        """Coefficient tuples (one entry per group) in lexicographic scan order.

        ``first`` restricts the first scanned coordinate to the given values
        (used to split the scan into stripes).
        """
        k = len(self.groups)
        if self.pin is not None:
            free = [j for j in range(k) if j != self.pin]
            for rest in itertools.product(range(p), repeat=k - 1):
                if first is not None and rest and rest[0] not in first:
                    continue
                t = [0] * k
                t[self.pin] = 1
                for j, v in zip(free, rest):
                    t[j] = v
                yield tuple(t)
            return
        # projective: the leading nonzero entry is 1
        for lead in range(k):
            if first is not None and lead not in first:
                continue
            for rest in itertools.product(range(p), repeat=k - lead - 1):
                yield (0,) * lead + (1,) + rest

    def stripe_keys(self, p: int):
        """Values of the first scanned coordinate, for splitting the scan."""
        k = len(self.groups)
        if self.pin is None:
            return list(range(k))
        return list(range(p)) if k > 1 else [None]

    def cut(self, coeffs, scalars=None):
        """Coefficient vector of the linear form on all variables.

        ``scalars`` optionally gives a per-variable multiplier (for
        permutations with scalars); by default every group member gets the
        group coefficient.
        """
        if len(coeffs) != len(self.groups):
            raise ValueError(f"expected {len(self.groups)} coefficients")
        out = [0] * self.nvars
        for g, c in zip(self.groups, coeffs):
            for i in g:
                out[i] = c if scalars is None else c * scalars[i]
        return out

    def to_json(self):
        return {"groups": [list(g) for g in self.groups], "nvars": self.nvars, "pin": self.pin}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(tuple(g) for g in data["groups"]), data["nvars"], data.get("pin", 0))


@dataclass
class SearchReport:
    p: int
    pattern: InvariantCutPattern
    candidates_scanned: int
    hits: list
    seed: int
    timing: float
    degenerate: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def cuts(self):
        """Full coefficient vectors of the hits."""
        return [self.pattern.cut(h) for h in self.hits]

    def to_json(self):
        return {
            "p": self.p,
            "pattern": self.pattern.to_json(),
            "candidates_scanned": self.candidates_scanned,
            "hits": [list(h) for h in self.hits],
            "degenerate": [list(h) for h in self.degenerate],
            "seed": self.seed,
            "timing": round(self.timing, 3),
            "stats": dict(self.stats),
        }


def _prime_of(surface: Ideal) -> int:
    ring = surface.ring
    if not isinstance(ring, ZMod) or not ring.is_field:
        raise TypeError("the cut search runs over a prime field F_p")
    return ring.p


def _scan(surface, pattern, first, seed, trials):
    p = _prime_of(surface)
    tester = CurveTester(surface, trials=trials, seed=seed)
    hits, degenerate, scanned = [], [], 0
    for t in pattern.tuples(p, first):
        scanned += 1
        try:
            if tester(pattern.cut(t)):
                hits.append(t)
        except NotACurve:
            degenerate.append(t)
    return scanned, hits, degenerate, dict(tester.stats)


def search_nonreduced_cuts(surface: Ideal, pattern: InvariantCutPattern, *, seed: int = 0, jobs: int = 1,
                           trials: int = 8, verify: bool = True) -> SearchReport:
    """Test every cut of ``pattern`` over ``F_p`` and report those with a nonreduced section.

    Cuts whose section is not a curve (it contains a component of the
    surface) are listed under ``degenerate``. With ``verify`` every hit is
    re-checked by the exact singular-locus computation alone. ``jobs > 1``
    splits the scan by the first scanned coordinate; hits are merged in scan
    order, so the report does not depend on ``jobs``.
    """
    p = _prime_of(surface)
    if pattern.nvars != surface.nvars:
        raise ValueError("pattern and surface disagree on the number of variables")
    t0 = time.perf_counter()
    # building the tester validates the surface up front (NotASurface)
    CurveTester(surface, trials=0, seed=seed)
    keys = pattern.stripe_keys(p)
    if jobs > 1 and len(keys) > 1:
        stripes = [[k] for k in keys]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_scan, *zip(*[(surface, pattern, s, seed, trials) for s in stripes])))
    else:
        parts = [_scan(surface, pattern, None, seed, trials)]
    scanned = sum(x[0] for x in parts)
    hits = [h for x in parts for h in x[1]]
    degenerate = [h for x in parts for h in x[2]]
    stats = {"certified": sum(x[3]["certified"] for x in parts), "exact": sum(x[3]["exact"] for x in parts)}
    order = {t: i for i, t in enumerate(pattern.tuples(p))} if jobs > 1 else None
    if order is not None:
        hits.sort(key=order.__getitem__)
        degenerate.sort(key=order.__getitem__)
    if verify and hits:
        exact = CurveTester(surface, trials=0, seed=seed)
        bad = [h for h in hits if not exact.exact(exact.coefficients(pattern.cut(h)))]
        if bad:
            raise AssertionError(f"hits {bad} fail the exact re-check")
        stats["reverified"] = len(hits)
    return SearchReport(p, pattern, scanned, hits, seed, time.perf_counter() - t0, degenerate, stats)


__all__ = ["InvariantCutPattern", "SearchReport", "search_nonreduced_cuts"]
