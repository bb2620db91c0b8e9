"""Sparse multivariate polynomials over the coefficient rings of :mod:`fppkit.ring`.

A :class:`PolyRing` fixes the variable names, the coefficient ring and the
monomial order; :class:`Polynomial` stores a ``{exponent tuple: coefficient}``
map with no zero entries. Printing is canonical (terms in decreasing monomial
order) and ``parse(str(f)) == f``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from pathlib import Path

from ._parse import parse_expression
from .errors import ArityMismatch, CoefficientNotInRing, PolySyntaxError, SingularMatrix, UnknownVariable
from .ring import QuadElem, ring_from_tag


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex_key(e):
    return e


def _deglex_key(e):
    return (sum(e), e)


ORDER_KEYS = {"grevlex": _grevlex_key, "lex": _lex_key, "deglex": _deglex_key}


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, degree: int, order: str = "grevlex") -> tuple:
    """All exponent tuples of the given total degree, largest first."""
    if degree < 0:
        return ()
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=ORDER_KEYS[order], reverse=True)
    return tuple(out)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """Variable names + coefficient ring + monomial order."""

    def __init__(self, names, ring, order: str = "grevlex"):
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if order not in ORDER_KEYS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.ring = ring
        self.order = order
        self.key = ORDER_KEYS[order]
        self._index = {n: i for i, n in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def gen(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.ring.one}, _clean=True)

    @property
    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _clean=True)

    def one(self) -> "Polynomial":
        return self.constant(self.ring.one)

    def constant(self, c) -> "Polynomial":
        c = self.ring(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {}, _clean=True)

    def monomial(self, exps, coeff=None) -> "Polynomial":
        c = self.ring.one if coeff is None else self.ring(coeff)
        return Polynomial(self, {tuple(exps): c})

    def linear_form(self, coeffs) -> "Polynomial":
        if len(coeffs) != self.nvars:
            raise ArityMismatch(f"{len(coeffs)} coefficients for {self.nvars} variables")
        terms = {}
        for i, c in enumerate(coeffs):
            c = self.ring(c)
            if c:
                e = [0] * self.nvars
                e[i] = 1
                terms[tuple(e)] = c
        return Polynomial(self, terms, _clean=True)

    def monomials(self, degree: int):
        return monomials_of_degree(self.nvars, degree, self.order)

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.parent == self:
                return x
            if x.parent.names == self.names:
                return x.map_coefficients(self.ring, self)
            raise ArityMismatch("polynomial from a different ambient space")
        if isinstance(x, str):
            return self.parse(x)
        return self.constant(x)

    def parse(self, text: str, line0: int = 1) -> "Polynomial":
        gens = {}

        def lookup(name):
            if name in self._index:
                if name not in gens:
                    gens[name] = self.gen(name)
                return gens[name]
            return None

        value = parse_expression(text, self.ring, lookup, line0)
        return self(value) if not isinstance(value, Polynomial) else value

    def with_ring(self, ring) -> "PolyRing":
        return PolyRing(self.names, ring, self.order)

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.names, self.ring, order)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.ring == other.ring
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.ring, self.order))

    def __repr__(self):
        return f"PolyRing({' '.join(self.names)!r}, {self.ring.tag}, {self.order!r})"


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: PolyRing, terms: dict, _clean: bool = False):
        if not _clean:
            ring = parent.ring
            n = parent.nvars
            clean = {}
            for e, c in terms.items():
                if len(e) != n:
                    raise ArityMismatch(f"exponent {e} for {n} variables")
                c = ring(c)
                if c:
                    clean[tuple(e)] = c
            terms = clean
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.parent, self.terms, True))

    @property
    def ring(self):
        return self.parent.ring

    @property
    def nvars(self):
        return self.parent.nvars

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.parent is self.parent or other.parent == self.parent:
                return other
            raise ArityMismatch("polynomials from different rings")
        try:
            return self.parent.constant(other)
        except CoefficientNotInRing:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Polynomial(self.parent, terms, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.parent, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o + (-self)

    def scale(self, c) -> "Polynomial":
        c = self.ring(c)
        if not c:
            return self.parent.zero()
        terms = {}
        for e, v in self.terms.items():
            w = v * c
            if w:
                terms[e] = w
        return Polynomial(self.parent, terms, _clean=True)

    def mul_term(self, mono, c) -> "Polynomial":
        terms = {}
        for e, v in self.terms.items():
            w = v * c
            if w:
                terms[mono_mul(e, mono)] = w
        return Polynomial(self.parent, terms, _clean=True)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if len(o.terms) == 1 and next(iter(o.terms)) == (0,) * self.nvars:
            return self.scale(next(iter(o.terms.values())))
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial(self.parent, {e: c for e, c in terms.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if other.degree() > 0 or not other.terms:
                raise TypeError("can only divide by a nonzero constant")
            other = next(iter(other.terms.values()))
        c = self.ring(other)
        return self.scale(self.ring.one / c)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result, base = self.parent.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.parent.names == other.parent.names and self.terms == other.terms
        o = self._lift(other)
        return o is not None and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # -- structure --------------------------------------------------------

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self):
        """Common total degree of all monomials, or ``None`` if mixed (0 for zero)."""
        degs = {sum(e) for e in self.terms}
        if not degs:
            return 0
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return self.homogeneous_degree() is not None

    def sorted_terms(self, order: str | None = None):
        key = ORDER_KEYS[order] if order else self.parent.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self, order=None):
        key = ORDER_KEYS[order] if order else self.parent.key
        return max(self.terms, key=key)

    def leading_coefficient(self, order=None):
        return self.terms[self.leading_monomial(order)]

    def monomials(self):
        return [e for e, _ in self.sorted_terms()]

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), self.ring.zero)

    def __len__(self):
        return len(self.terms)

    def map_coefficients(self, fn, parent: PolyRing | None = None) -> "Polynomial":
        parent = parent or self.parent
        terms = {}
        for e, c in self.terms.items():
            v = parent.ring(fn(c))
            if v:
                terms[e] = v
        return Polynomial(parent, terms, _clean=True)

    def monic(self, order=None) -> "Polynomial":
        return self.scale(self.ring.one / self.leading_coefficient(order))

    # -- calculus and evaluation ------------------------------------------

    def diff(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.parent.index(i)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                v = c * e[i]
                if v:
                    f = list(e)
                    f[i] -= 1
                    terms[tuple(f)] = v
        return Polynomial(self.parent, terms, _clean=True)

    def hasse(self, alpha) -> "Polynomial":
        """Hasse derivative: ``x^e -> prod binom(e_i, alpha_i) x^(e - alpha)``."""
        terms = {}
        for e, c in self.terms.items():
            if all(a <= x for a, x in zip(alpha, e)):
                m = 1
                for a, x in zip(alpha, e):
                    m *= comb(x, a)
                v = c * m
                if v:
                    terms[tuple(x - a for a, x in zip(alpha, e))] = v
        return Polynomial(self.parent, terms, _clean=True)

    def evaluate(self, pt):
        return evaluate(self, pt)

    def __call__(self, *pt):
        if len(pt) == 1 and isinstance(pt[0], (list, tuple)):
            pt = pt[0]
        return evaluate(self, pt)

    def substitute(self, images) -> "Polynomial":
        """Replace variable ``i`` by ``images[i]`` (polynomials of any common ring)."""
        if len(images) != self.nvars:
            raise ArityMismatch(f"{len(images)} images for {self.nvars} variables")
        if not self.terms:
            target = images[0].parent if images and isinstance(images[0], Polynomial) else self.parent
            return target.zero()
        powers = [dict() for _ in images]
        result = None
        for e, c in self.terms.items():
            t = None
            for i, k in enumerate(e):
                if k:
                    pw = powers[i].get(k)
                    if pw is None:
                        pw = images[i] ** k
                        powers[i][k] = pw
                    t = pw if t is None else t * pw
            if t is None:
                term = c
            else:
                term = t * c
            result = term if result is None else result + term
        if not isinstance(result, Polynomial):
            target = next((im.parent for im in images if isinstance(im, Polynomial)), self.parent)
            result = target.constant(result)
        return result

    # -- printing ---------------------------------------------------------

    def _mono_str(self, e):
        parts = []
        for name, k in zip(self.parent.names, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.ring
        pieces = []
        for e, c in self.sorted_terms():
            m = self._mono_str(e)
            cs = ring.format(c)
            if not m:
                s = cs
            elif cs == "1":
                s = m
            elif cs == "-1":
                s = "-" + m
            else:
                s = f"{cs}*{m}"
            pieces.append(s)
        out = pieces[0]
        for s in pieces[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {self.parent.ring.tag})"


def parse_poly(text: str, ambient, ring=None) -> Polynomial:
    """Parse ``text`` in the ambient ``PolyRing`` (or variable list plus ring)."""
    if not isinstance(ambient, PolyRing):
        ambient = PolyRing(ambient, ring)
    return ambient.parse(text)


def evaluate(f: Polynomial, pt):
    """Exact value of ``f`` at the coordinate vector ``pt``."""
    if len(pt) != f.nvars:
        raise ArityMismatch(f"point has {len(pt)} coordinates, ring has {f.nvars} variables")
    if hasattr(pt, "coords"):
        pt = pt.coords
    powers = [[None] for _ in pt]
    total = None
    for e, c in f.terms.items():
        t = c
        for i, k in enumerate(e):
            if k:
                pw = powers[i]
                while len(pw) <= k:
                    pw.append(pt[i] if len(pw) == 1 else pw[-1] * pt[i])
                t = t * pw[k]
        total = t if total is None else total + t
    if total is None:
        return f.ring.zero
    return total


def jacobian(gens, pt):
    """Matrix of partial derivatives ``[d g_i / d x_j](pt)`` (rows = generators)."""
    gens = list(gens)
    if not gens:
        return []
    n = gens[0].nvars
    if any(g.nvars != n for g in gens):
        raise ArityMismatch("generators from different ambient spaces")
    coords = pt.coords if hasattr(pt, "coords") else pt
    return [[evaluate(g.diff(j), coords) for j in range(n)] for g in gens]


def jacobian_polys(gens):
    return [[g.diff(j) for j in range(g.nvars)] for g in gens]


def substitute_linear(f: Polynomial, M) -> Polynomial:
    """Apply the linear change of variables given by ``M``.

    ``M`` is the matrix of the substitution on the space of linear forms with
    basis ``x_0..x_{n-1}`` (column ``j`` is the image of ``x_j``): the variable
    ``x_j`` becomes ``sum_i M[i][j] x_i``, i.e. the result is ``f(M^T x)``.
    With this convention the substitutions compose as matrices:
    ``substitute_linear(f, A @ B) ==
    substitute_linear(substitute_linear(f, B), A)``.
    """
    from .linalg import is_invertible

    n = f.nvars
    if len(M) != n or any(len(row) != n for row in M):
        raise ArityMismatch(f"matrix must be {n} x {n}")
    ring = f.ring
    Mr = [[ring(x) for x in row] for row in M]
    if not is_invertible(Mr, ring):
        raise SingularMatrix("coordinate change is not invertible")
    P = f.parent
    images = [P.linear_form([Mr[i][j] for i in range(n)]) for j in range(n)]
    return f.substitute(images)


# -- group actions ---------------------------------------------------------


@dataclass(frozen=True)
class CyclicAction:
    """Diagonal ``C_n`` action by per-variable weights, plus an optional
    variable permutation ``x_i -> c_i x_{perm[i]}`` of its own order.
    """

    order: int
    weights: tuple
    perm: tuple | None = None
    perm_scalars: tuple | None = None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        object.__setattr__(self, "weights", tuple(int(w) % self.order for w in self.weights))
        if self.perm is not None:
            perm = tuple(int(i) for i in self.perm)
            if sorted(perm) != list(range(len(self.weights))):
                raise ValueError("perm must be a permutation of the variable indices")
            object.__setattr__(self, "perm", perm)
            if self.perm_scalars is not None and len(self.perm_scalars) != len(perm):
                raise ValueError("one scalar per variable")

    @classmethod
    def trivial(cls, nvars: int) -> "CyclicAction":
        return cls(1, (0,) * nvars)

    @classmethod
    def from_cycles(cls, order, weights, cycles, scalars=None) -> "CyclicAction":
        perm = list(range(len(weights)))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                perm[a] = b
        return cls(order, tuple(weights), tuple(perm), None if scalars is None else tuple(scalars))

    @property
    def nvars(self):
        return len(self.weights)

    @property
    def perm_order(self) -> int:
        if self.perm is None:
            return 1
        from math import lcm

        seen, m = set(), 1
        for i in range(len(self.perm)):
            if i in seen:
                continue
            j, n = i, 0
            while j not in seen:
                seen.add(j)
                j = self.perm[j]
                n += 1
            m = lcm(m, n)
        return m

    def orbits(self):
        """Orbits of the permutation part (singletons when absent)."""
        if self.perm is None:
            return [(i,) for i in range(self.nvars)]
        seen, out = set(), []
        for i in range(self.nvars):
            if i in seen:
                continue
            orb, j = [], i
            while j not in seen:
                seen.add(j)
                orb.append(j)
                j = self.perm[j]
            out.append(tuple(orb))
        return out

    def weight(self, mono) -> int:
        return monomial_weight(mono, self)

    def permute_monomial(self, mono, ring):
        """Image of ``x^mono`` under the permutation: ``(new exponents, scalar)``."""
        if self.perm is None:
            return tuple(mono), ring.one
        out = [0] * len(mono)
        scalar = ring.one
        for i, k in enumerate(mono):
            if k:
                out[self.perm[i]] += k
                if self.perm_scalars is not None:
                    scalar = scalar * ring(self.perm_scalars[i]) ** k
        return tuple(out), scalar

    def apply(self, f: Polynomial) -> Polynomial:
        terms = {}
        ring = f.ring
        for e, c in f.terms.items():
            e2, s = self.permute_monomial(e, ring)
            terms[e2] = terms.get(e2, ring.zero) + c * s
        return Polynomial(f.parent, terms)

    def permutation_matrix(self, ring):
        """Matrix ``A`` of the permutation part, so that
        ``self.apply(f) == substitute_linear(f, A)``: ``A[perm[j]][j] = c_j``."""
        n = self.nvars
        A = [[ring.zero] * n for _ in range(n)]
        for j in range(n):
            i = j if self.perm is None else self.perm[j]
            A[i][j] = ring.one if self.perm_scalars is None else ring(self.perm_scalars[j])
        return A

    def diagonal_matrix(self, ring, zeta):
        """Matrix of the diagonal generator ``x_i -> zeta^weights[i] x_i``."""
        n = self.nvars
        A = [[ring.zero] * n for _ in range(n)]
        for i in range(n):
            A[i][i] = ring(zeta) ** self.weights[i]
        return A

    def preserves_weights(self, M) -> bool:
        """Whether ``M`` commutes with the diagonal part (no entries across weights)."""
        n = self.nvars
        return all(not M[i][j] or self.weights[i] == self.weights[j] for i in range(n) for j in range(n))


def monomial_weight(mono, act: CyclicAction) -> int:
    if len(mono) != len(act.weights):
        raise ArityMismatch(f"monomial has {len(mono)} exponents, action has {len(act.weights)} weights")
    return sum(w * e for w, e in zip(act.weights, mono)) % act.order


def weight_component_basis(degree: int, w: int, act: CyclicAction, ambient) -> list:
    """Monomials of the given degree and weight, in decreasing monomial order."""
    if isinstance(ambient, PolyRing):
        n, order = ambient.nvars, ambient.order
    else:
        n, order = int(ambient), "grevlex"
    if n != act.nvars:
        raise ArityMismatch("action and ambient disagree on the number of variables")
    w %= act.order
    return [m for m in monomials_of_degree(n, degree, order) if monomial_weight(m, act) == w]


# -- polynomial files ------------------------------------------------------


def _parse_header(line, lineno):
    toks = line.split()
    if not toks or toks[0] != "ring":
        raise PolySyntaxError("expected header 'ring <TAG> vars <names...>'", lineno, 1, line)
    try:
        vi = toks.index("vars")
    except ValueError:
        raise PolySyntaxError("header is missing 'vars'", lineno, 1, line) from None
    tag = " ".join(toks[1:vi])
    rest = toks[vi + 1 :]
    order = "grevlex"
    if "order" in rest:
        oi = rest.index("order")
        order = rest[oi + 1]
        rest = rest[:oi]
    try:
        ring = ring_from_tag(tag)
    except ValueError as exc:
        raise PolySyntaxError(str(exc), lineno, line.find(tag) + 1, line) from None
    names = [n for t in rest for n in t.split(",") if n]
    if not names:
        raise PolySyntaxError("no variables declared", lineno, 1, line)
    return PolyRing(names, ring, order)


def read_poly_text(text: str, ring_override=None):
    """Parse file contents: ``(PolyRing, [Polynomial])``.

    Format: ``#`` comments, a header ``ring <TAG> vars <v1> <v2> ...`` and one
    polynomial per line (a trailing backslash continues a line).
    """
    parent = None
    polys = []
    buf, start = "", 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip() and not buf:
            continue
        if parent is None:
            parent = _parse_header(line, lineno)
            if ring_override is not None:
                parent = parent.with_ring(ring_override)
            continue
        if line.endswith("\\"):
            if not buf:
                start = lineno
            buf += line[:-1] + "\n"
            continue
        if buf:
            line, buf, first = buf + line, "", start
        else:
            first = lineno
        if line.strip():
            polys.append(parent.parse(line, line0=first))
    if parent is None:
        raise PolySyntaxError("missing header line", 1, 1)
    return parent, polys


def read_poly_file(path, ring_override=None):
    return read_poly_text(Path(path).read_text(), ring_override)


def format_poly_file(parent: PolyRing, polys, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    header = f"ring {parent.ring.tag} vars {' '.join(parent.names)}"
    if parent.order != "grevlex":
        header += f" order {parent.order}"
    lines.append(header)
    lines.extend(str(f) for f in polys)
    return "\n".join(lines) + "\n"


def write_poly_file(path, parent: PolyRing, polys, comments=()):
    Path(path).write_text(format_poly_file(parent, polys, comments))


def quad_coefficients(f: Polynomial):
    """Coefficients as ``QuadElem`` (helper for reporting)."""
    return {e: (c if isinstance(c, QuadElem) else c) for e, c in f.terms.items()}
