"""Bundled example varieties with known answers.

Each loader returns exact data over ``Q`` or ``Q(sqrt(-7))``; pass ``p`` to
get the reduction modulo a prime instead. The files live in ``fppkit/data``
and are regenerated by ``tools/make_datasets.py``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .poly import CyclicAction
from .ring import QQ, QuadraticField, parse_quad
from .search.guided import reduce_system
from .vgeom.ideal import Ideal, ProjPoint

NAMES = ("veronese", "twisted_cubic", "planted3", "cube_roots")


def data_path(name: str):
    """Path-like handle of a bundled file (``name`` with or without suffix)."""
    if "." not in name:
        name += ".poly"
    return resources.files("fppkit").joinpath("data", name)


def load(name: str, p: int | None = None, root=None) -> Ideal:
    """Bundled ideal ``name``, reduced modulo ``p`` if given."""
    if name not in NAMES:
        raise KeyError(f"unknown dataset {name!r}; choose from {', '.join(NAMES)}")
    I = Ideal.from_text(data_path(name).read_text())
    if p is None:
        return I
    return reduce_system(I, p, root)[0]


def veronese(p: int | None = None) -> Ideal:
    """Veronese surface in P^5 (six 2x2 minors); Hilbert polynomial 2n^2 + 3n + 1."""
    return load("veronese", p)


def twisted_cubic(p: int | None = None) -> Ideal:
    """Twisted cubic in P^3; Hilbert polynomial 3n + 1."""
    return load("twisted_cubic", p)


def cube_root_system(p: int | None = None) -> Ideal:
    """``z = 0, y^3 = c^3 x^3`` over ``Q(sqrt(-7))``: one rational solution and two that are not."""
    return load("cube_roots", p)


@dataclass
class PlantedSystem:
    ideal: Ideal
    solutions: list
    d: int


def planted_three_solutions(p: int | None = None) -> PlantedSystem:
    """Quadrics in P^4 through three planted points over ``Q(sqrt(-7))``.

    ``solutions`` holds the exact points normalized so the first coordinate
    is 1; the Hilbert polynomial is the constant 3.
    """
    meta = json.loads(data_path("planted3.json").read_text())
    d = meta["d"]
    K = QuadraticField(d)
    sols = [[parse_quad(t, d) for t in v] for v in meta["solutions"]]
    return PlantedSystem(load("planted3", p), [[K(x) for x in v] for v in sols], d)


@dataclass
class JetExample:
    surface: Ideal
    action: CyclicAction
    degree: int
    weight: int
    point: ProjPoint
    order: int
    nparams: int
    remaining: int


def planted_jet_example() -> JetExample:
    """Weight-0 quadrics on the Veronese surface vanishing to order 3 at ``(1:0:0:0:0:0)``.

    The action is the one induced by ``diag(w, 1, 1)`` on the plane with
    ``w`` of order 3, so the coordinates ``a..f`` carry weights
    ``(2, 1, 1, 0, 0, 0)``. The 8-parameter family of invariant quadrics
    keeps 6 parameters after the order-3 conditions.
    """
    I = veronese()
    act = CyclicAction(3, (2, 1, 1, 0, 0, 0))
    pt = ProjPoint([QQ(1), QQ(0), QQ(0), QQ(0), QQ(0), QQ(0)])
    return JetExample(I, act, 2, 0, pt, 3, 8, 6)


def resolve_input(arg: str, ring_override=None) -> tuple:
    """``(Ideal, text)`` for a file path or a bundled dataset name."""
    from pathlib import Path

    path = Path(arg)
    if path.exists():
        text = path.read_text()
    elif arg in NAMES:
        text = data_path(arg).read_text()
    else:
        raise FileNotFoundError(f"{arg}: no such file or bundled dataset")
    return Ideal.from_text(text, ring_override), text


__all__ = [
    "JetExample",
    "NAMES",
    "PlantedSystem",
    "cube_root_system",
    "data_path",
    "load",
    "planted_jet_example",
    "planted_three_solutions",
    "resolve_input",
    "twisted_cubic",
    "veronese",
]
