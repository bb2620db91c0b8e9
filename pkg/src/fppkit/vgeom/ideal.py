"""Homogeneous ideals, projective points and Hilbert data."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from ..errors import ArityMismatch
from ..poly import PolyRing, Polynomial, evaluate, read_poly_file, read_poly_text
from ..ring import ZModElem


class Ideal:
    """Generators of a homogeneous ideal in a fixed ambient projective space."""

    def __init__(self, gens, ambient: PolyRing | None = None, check: bool = True):
        gens = list(gens)
        if ambient is None:
            if not gens:
                raise ValueError("an empty ideal needs an explicit ambient ring")
            ambient = gens[0].parent
        out = []
        for g in gens:
            if not isinstance(g, Polynomial):
                g = ambient(g)
            if g.parent.names != ambient.names:
                raise ArityMismatch("generator from a different ambient space")
            if g.parent != ambient:
                g = ambient(g)
            if check and not g.is_homogeneous():
                raise ValueError(f"generator is not homogeneous: {g}")
            if g:
                out.append(g)
        self.ambient = ambient
        self.gens = out

    @property
    def ring(self):
        return self.ambient.ring

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    @property
    def names(self):
        return self.ambient.names

    def degrees(self):
        return [g.degree() for g in self.gens]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __add__(self, other):
        more = other.gens if isinstance(other, Ideal) else list(other)
        return Ideal(self.gens + list(more), self.ambient)

    def __repr__(self):
        return f"Ideal({len(self.gens)} generators in {self.ambient!r})"

    def map_coefficients(self, fn, ring) -> "Ideal":
        amb = self.ambient.with_ring(ring)
        return Ideal([g.map_coefficients(fn, amb) for g in self.gens], amb, check=False)

    def reduce(self, ring, cmap=None) -> "Ideal":
        """Image under a coefficient map (default: plain coercion into ``ring``)."""
        fn = cmap if cmap is not None else ring
        return self.map_coefficients(fn, ring)

    def contains_point(self, pt) -> bool:
        coords = pt.coords if isinstance(pt, ProjPoint) else pt
        return all(not evaluate(g, coords) for g in self.gens)

    def residuals(self, pt):
        coords = pt.coords if isinstance(pt, ProjPoint) else pt
        return [evaluate(g, coords) for g in self.gens]

    def to_text(self, comments=()):
        from ..poly import format_poly_file

        return format_poly_file(self.ambient, self.gens, comments)

    @classmethod
    def from_text(cls, text, ring_override=None) -> "Ideal":
        amb, polys = read_poly_text(text, ring_override)
        return cls(polys, amb)

    @classmethod
    def from_file(cls, path, ring_override=None) -> "Ideal":
        amb, polys = read_poly_file(path, ring_override)
        return cls(polys, amb)


def _is_unit(x) -> bool:
    if isinstance(x, ZModElem):
        return x.is_unit()
    return bool(x)


class ProjPoint:
    """A projective point; the first unit coordinate (``pivot``) is scaled to 1."""

    __slots__ = ("coords", "pivot")

    def __init__(self, coords, normalize: bool = True):
        coords = tuple(coords)
        pivot = next((i for i, c in enumerate(coords) if _is_unit(c)), None)
        if pivot is None:
            raise ValueError("a projective point needs a unit coordinate")
        if normalize and coords[pivot] != 1:
            c = coords[pivot]
            inv = c.inv() if isinstance(c, ZModElem) else 1 / c
            coords = tuple(x * inv for x in coords)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "pivot", pivot)

    def __setattr__(self, name, value):
        raise AttributeError("ProjPoint is immutable")

    def __reduce__(self):
        return (ProjPoint, (self.coords, False))

    @classmethod
    def from_ints(cls, values, ring) -> "ProjPoint":
        return cls([ring(v) for v in values])

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if isinstance(other, (tuple, list)):
            try:
                other = ProjPoint([self.coords[0] * 0 + x for x in other])
            except (ValueError, TypeError):
                return False
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def in_chart(self, i: int):
        """Coordinates rescaled so that coordinate ``i`` is 1 (it must be a unit)."""
        c = self.coords[i]
        if not _is_unit(c):
            raise ValueError(f"coordinate {i} is not a unit")
        inv = c.inv() if isinstance(c, ZModElem) else 1 / c
        return tuple(x * inv for x in self.coords)

    def __hash__(self):
        return hash(self.coords)

    def reduce(self, k: int = 1) -> "ProjPoint":
        """Image modulo ``p**k`` (coordinates must be residues)."""
        return ProjPoint([c.reduce(k) for c in self.coords])

    def values(self):
        return [int(c) if isinstance(c, ZModElem) else c for c in self.coords]

    def to_json(self):
        return [str(c) for c in self.coords]

    def __repr__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


@dataclass
class HilbertData:
    """Hilbert function values on a window plus the fitted polynomial.

    ``fitted`` holds rational coefficients, lowest degree first, of the
    polynomial in ``n`` that agrees with ``values`` from ``stable_from`` on.
    """

    values: dict = field(default_factory=dict)
    fitted: list | None = None
    stable_from: int | None = None

    def __call__(self, n):
        if self.fitted is None:
            raise ValueError("no fitted polynomial")
        return sum(c * n**i for i, c in enumerate(self.fitted))

    @property
    def dimension(self) -> int:
        """Degree of the Hilbert polynomial (-1 for the empty scheme)."""
        if self.fitted is None:
            raise ValueError("no fitted polynomial")
        return len(self.fitted) - 1

    @property
    def degree(self) -> int:
        """Leading coefficient times ``dimension!`` (0 for the empty scheme)."""
        if not self.fitted:
            return 0
        return int(self.fitted[-1] * factorial(self.dimension))

    def is_constant(self) -> bool:
        return self.fitted is not None and len(self.fitted) <= 1

    def constant(self) -> int:
        if not self.is_constant():
            raise ValueError("Hilbert polynomial is not constant")
        return int(self.fitted[0]) if self.fitted else 0

    def matches(self, coeffs) -> bool:
        """Compare with coefficients (lowest degree first)."""
        a = [Fraction(c) for c in coeffs]
        while a and a[-1] == 0:
            a.pop()
        return self.fitted is not None and a == list(self.fitted)

    def format(self, var="n") -> str:
        if self.fitted is None:
            return "?"
        return format_upoly(self.fitted, var)

    def to_json(self):
        return {
            "values": {str(k): v for k, v in sorted(self.values.items())},
            "fitted": None if self.fitted is None else [str(c) for c in self.fitted],
            "stable_from": self.stable_from,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj) -> "HilbertData":
        if isinstance(obj, str):
            obj = json.loads(obj)
        fitted = obj.get("fitted")
        return cls(
            {int(k): int(v) for k, v in obj["values"].items()},
            None if fitted is None else [Fraction(c) for c in fitted],
            obj.get("stable_from"),
        )


def format_upoly(coeffs, var="n") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[i])
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            s = mono
        elif mono:
            s = f"{abs(c)}*{mono}"
        else:
            s = f"{abs(c)}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, s))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, s in terms[1:]:
        out += f" {sign} {s}"
    return out


def parse_upoly(text: str, var="n"):
    """Parse a univariate rational polynomial such as ``3*n + 1``; lowest degree first."""
    from ..ring import QQ

    amb = PolyRing([var], QQ)
    f = amb.parse(text)
    deg = f.degree()
    return [f.coefficient((i,)) for i in range(deg + 1)] if deg >= 0 else []

