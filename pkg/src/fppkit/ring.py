"""Exact coefficient rings: F_p, Z/p^k, Q and the quadratic fields Q(sqrt d).

Elements are plain Python objects with operator overloading:

* ``ZModElem`` for residues modulo ``p**k``,
* ``fractions.Fraction`` for rationals,
* ``QuadElem`` for ``(a + b*sqrt(d))/c``.

The ring objects (``ZMod``, ``RationalField``, ``QuadraticField``) coerce
foreign values, parse and print coefficients, and carry the tag that
polynomials and ideals are labelled with.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy import isprime

from .errors import (
    CoefficientNotInRing,
    DenominatorNotUnit,
    DivideByZero,
    EvenPrime,
    ModulusMismatch,
    NonResidue,
    NonUnit,
)

DEFAULT_D = -7


@dataclass(frozen=True)
class Modulus:
    """The modulus ``p**k`` with ``p`` prime."""

    p: int
    k: int = 1

    def __post_init__(self):
        if self.p < 2 or not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1:
            raise ValueError(f"exponent must be positive, got {self.k}")

    @cached_property
    def N(self) -> int:
        return self.p**self.k

    def __str__(self):
        return f"{self.p}" if self.k == 1 else f"{self.p}^{self.k}"


def _as_modulus(m, k=None) -> Modulus:
    if isinstance(m, Modulus):
        return m
    return Modulus(int(m), 1 if k is None else int(k))


class ZModElem:
    """A residue class modulo ``p**k``; immutable."""

    __slots__ = ("value", "modulus")

    def __init__(self, value, modulus):
        modulus = _as_modulus(modulus)
        if isinstance(value, Fraction):
            den = value.denominator
            if den % modulus.p == 0:
                raise DenominatorNotUnit(f"denominator {den} not a unit mod {modulus.p}")
            value = value.numerator * pow(den, -1, modulus.N)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", int(value) % modulus.N)

    def __setattr__(self, name, value):
        raise AttributeError("ZModElem is immutable")

    def __reduce__(self):
        return (ZModElem, (self.value, self.modulus))

    def _coerce(self, other):
        if isinstance(other, ZModElem):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"mod {self.modulus} vs mod {other.modulus}")
            return other.value
        if isinstance(other, numbers.Integral):
            return int(other)
        if isinstance(other, Fraction):
            return ZModElem(other, self.modulus).value
        return None

    def _new(self, v):
        return ZModElem(v, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __pos__(self):
        return self

    def is_unit(self) -> bool:
        return self.value % self.modulus.p != 0

    def inv(self) -> "ZModElem":
        if not self.is_unit():
            raise NonUnit(f"{self.value} is not invertible mod {self.modulus}")
        return self._new(pow(self.value, -1, self.modulus.N))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * self._new(o).inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.inv() * o

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return self._new(pow(self.value, e, self.modulus.N))

    def __eq__(self, other):
        if isinstance(other, ZModElem):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.modulus.N == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus.p, self.modulus.k))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def reduce(self, k: int) -> "ZModElem":
        """Image in ``Z/p^k`` for ``k`` at most the current exponent."""
        if k > self.modulus.k:
            raise ValueError("cannot reduce to a finer modulus")
        return ZModElem(self.value, Modulus(self.modulus.p, k))

    def balanced(self) -> int:
        """Representative in ``(-N/2, N/2]``."""
        n = self.modulus.N
        return self.value - n if self.value > n // 2 else self.value

    def __repr__(self):
        return f"ZModElem({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


def _squarefree(d: int) -> bool:
    n = abs(d)
    if n == 0:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


class QuadElem:
    """The number ``(a + b*sqrt(d))/c`` in normalized form.

    Normalization makes ``c > 0`` and ``gcd(a, b, c) = 1`` so that equality is
    structural.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=1, d=DEFAULT_D):
        a, b, c = int(a), int(b), int(c)
        if c == 0:
            raise DivideByZero("zero denominator")
        if not _squarefree(d) or d == 1:
            raise ValueError(f"d = {d} is not a squarefree integer != 1")
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(a, b), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    def __reduce__(self):
        return (QuadElem, (self.a, self.b, self.c, self.d))

    @classmethod
    def from_parts(cls, x, y=0, d=DEFAULT_D) -> "QuadElem":
        """Build ``x + y*sqrt(d)`` from rationals."""
        x, y = Fraction(x), Fraction(y)
        c = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
        return cls(x.numerator * (c // x.denominator), y.numerator * (c // y.denominator), c, d)

    @classmethod
    def root(cls, d=DEFAULT_D) -> "QuadElem":
        return cls(0, 1, 1, d)

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.a, self.c)

    @property
    def irrational_part(self) -> Fraction:
        return Fraction(self.b, self.c)

    def height(self) -> int:
        return max(abs(self.a), abs(self.b), self.c)

    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise TypeError(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, (numbers.Integral, Fraction)):
            return QuadElem.from_parts(int(other) if isinstance(other, numbers.Integral) else other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a * o.c + o.a * self.c, self.b * o.c + o.b * self.c, self.c * o.c, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.c, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.c * o.c,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.c, self.d)

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a - self.d * self.b * self.b, self.c * self.c)

    def trace(self) -> Fraction:
        return Fraction(2 * self.a, self.c)

    def inv(self) -> "QuadElem":
        if self.a == 0 and self.b == 0:
            raise DivideByZero("inverse of zero")
        n = self.a * self.a - self.d * self.b * self.b
        return QuadElem(self.c * self.a, -self.c * self.b, n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result, base = QuadElem(1, 0, 1, self.d), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and Fraction(self.a, self.c) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QuadElem({self.a}, {self.b}, {self.c}, d={self.d})"

    def __str__(self):
        return format_quad(self)


def format_quad(x: QuadElem, root: str = "r") -> str:
    """Canonical text ``(a + b*r)/c``; rationals print as ``a`` or ``a/c``."""
    if x.b == 0:
        return f"{x.a}" if x.c == 1 else f"{x.a}/{x.c}"
    if abs(x.b) == 1:
        rpart = root
    else:
        rpart = f"{abs(x.b)}*{root}"
    if x.a == 0:
        num = rpart if x.b > 0 else f"-{rpart}"
        if x.c == 1:
            return num
        return f"({num})/{x.c}"
    num = f"{x.a} {'+' if x.b > 0 else '-'} {rpart}"
    return f"({num})" if x.c == 1 else f"({num})/{x.c}"


def parse_quad(text: str, d: int = DEFAULT_D) -> QuadElem:
    """Parse ``(a + b*r)/c``; ``sqrt(d)`` is accepted for ``r``."""
    return QuadraticField(d).parse(text)


# --- square roots -------------------------------------------------------


def _tonelli_shanks(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise NonResidue(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def sqrt_mod(a: int, m, k: int | None = None) -> ZModElem:
    """Square root of ``a`` modulo ``p**k``.

    Tonelli-Shanks modulo ``p`` followed by Newton lifting. The returned
    representative is the one in ``[0, p**k / 2]``.
    """
    m = _as_modulus(m, k)
    p, N = m.p, m.N
    if p == 2:
        raise EvenPrime("square roots modulo 2 are not supported")
    a = int(a)
    if a % N == 0:
        return ZModElem(0, m)
    if a % p == 0:
        if m.k == 1:
            return ZModElem(0, m)
        raise NonUnit(f"{a} is divisible by {p}; only unit squares lift to {m}")
    r = _tonelli_shanks(a, p)
    prec = 1
    while prec < m.k:
        prec = min(2 * prec, m.k)
        Np = p**prec
        r = (r - (r * r - a) * pow(2 * r, -1, Np)) % Np
    r = min(r, N - r)
    return ZModElem(r, m)


def reduce_quad(x, m, s) -> ZModElem:
    """Image of ``x`` in ``Z/p^k`` under ``sqrt(d) -> s``.

    ``s`` must satisfy ``s**2 == d`` modulo ``p**k``; the map is a ring
    homomorphism on elements whose denominator is prime to ``p``.
    """
    m = _as_modulus(m)
    N = m.N
    sv = s.value if isinstance(s, ZModElem) else int(s) % N
    if isinstance(x, (int, Fraction)):
        return ZModElem(Fraction(x), m)
    if not isinstance(x, QuadElem):
        raise TypeError(f"cannot reduce {x!r}")
    if (sv * sv - x.d) % N != 0:
        raise ValueError(f"{sv}^2 is not {x.d} mod {m}")
    if x.c % m.p == 0:
        raise DenominatorNotUnit(f"denominator {x.c} divisible by {m.p}")
    return ZModElem((x.a + x.b * sv) * pow(x.c, -1, N), m)


# --- ring objects ------------------------------------------------------------


class ZMod:
    """The ring ``Z/p^k`` (the field ``F_p`` when ``k == 1``)."""

    def __init__(self, p, k: int = 1):
        self.modulus = _as_modulus(p, k)

    @property
    def p(self):
        return self.modulus.p

    @property
    def k(self):
        return self.modulus.k

    @property
    def is_field(self):
        return self.modulus.k == 1

    @property
    def characteristic(self):
        return self.modulus.N

    @property
    def tag(self):
        m = self.modulus
        return f"GF({m.p})" if m.k == 1 else f"Z/{m.p}^{m.k}"

    @property
    def zero(self):
        return ZModElem(0, self.modulus)

    @property
    def one(self):
        return ZModElem(1, self.modulus)

    def __call__(self, x):
        if isinstance(x, numbers.Integral) and not isinstance(x, int):
            x = int(x)
        if isinstance(x, ZModElem):
            if x.modulus == self.modulus:
                return x
            if x.modulus.p == self.modulus.p and x.modulus.k >= self.modulus.k:
                return ZModElem(x.value, self.modulus)
            raise ModulusMismatch(f"mod {x.modulus} into mod {self.modulus}")
        if isinstance(x, QuadElem):
            if x.b != 0:
                raise CoefficientNotInRing(f"{x} has an irrational part; give a root to reduce it")
            x = Fraction(x.a, x.c)
        if isinstance(x, (int, Fraction)):
            try:
                return ZModElem(x, self.modulus)
            except DenominatorNotUnit as exc:
                raise CoefficientNotInRing(str(exc)) from None
        raise CoefficientNotInRing(f"cannot coerce {x!r} into {self.tag}")

    def root(self, d):
        raise CoefficientNotInRing(f"no formal square root in {self.tag}")

    def format(self, x) -> str:
        return str(x.value)

    def parse(self, text: str):
        from ._parse import parse_constant

        return parse_constant(text, self)

    def __eq__(self, other):
        return isinstance(other, ZMod) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("ZMod", self.modulus))

    def __repr__(self):
        return f"ZMod({self.modulus.p}, {self.modulus.k})"


class RationalField:
    """The field Q with ``Fraction`` elements."""

    is_field = True
    characteristic = 0
    tag = "QQ"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __call__(self, x):
        if isinstance(x, numbers.Integral) and not isinstance(x, int):
            x = int(x)
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, QuadElem) and x.b == 0:
            return Fraction(x.a, x.c)
        raise CoefficientNotInRing(f"cannot coerce {x!r} into QQ")

    def root(self, d):
        raise CoefficientNotInRing("no formal square root in QQ")

    def format(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        from ._parse import parse_constant

        return parse_constant(text, self)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "RationalField()"


class QuadraticField:
    """The field ``Q(sqrt d)``; ``d`` defaults to -7."""

    is_field = True
    characteristic = 0

    def __init__(self, d: int = DEFAULT_D):
        if not _squarefree(d) or d == 1:
            raise ValueError(f"d = {d} is not a squarefree integer != 1")
        self.d = d

    @property
    def tag(self):
        return f"QQ(sqrt({self.d}))"

    @property
    def zero(self):
        return QuadElem(0, 0, 1, self.d)

    @property
    def one(self):
        return QuadElem(1, 0, 1, self.d)

    def gen(self) -> QuadElem:
        return QuadElem.root(self.d)

    def root(self, d):
        if d != self.d:
            raise CoefficientNotInRing(f"sqrt({d}) is not in {self.tag}")
        return self.gen()

    def __call__(self, x):
        if isinstance(x, numbers.Integral) and not isinstance(x, int):
            x = int(x)
        if isinstance(x, QuadElem):
            if x.d != self.d:
                raise CoefficientNotInRing(f"{x!r} is not in {self.tag}")
            return x
        if isinstance(x, (int, Fraction)):
            return QuadElem.from_parts(x, 0, self.d)
        raise CoefficientNotInRing(f"cannot coerce {x!r} into {self.tag}")

    def format(self, x) -> str:
        return format_quad(x)

    def parse(self, text: str):
        from ._parse import parse_constant

        return parse_constant(text, self)

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("QQ", self.d))

    def __repr__(self):
        return f"QuadraticField({self.d})"


QQ = RationalField()


def GF(p: int) -> ZMod:
    return ZMod(p, 1)


def ring_from_tag(tag: str):
    """Inverse of ``ring.tag``: ``GF(p)``, ``Z/p^k``, ``QQ``, ``QQ(sqrt(d))``."""
    import re

    t = tag.replace(" ", "")
    if t in ("QQ", "Q", "ZZ", "Z"):
        return QQ
    mt = re.fullmatch(r"(?:GF|F)\((\d+)\)|(?:GF|F)_?(\d+)", t)
    if mt:
        return ZMod(int(mt.group(1) or mt.group(2)))
    mt = re.fullmatch(r"Z/(\d+)(?:\^(\d+))?", t)
    if mt:
        return ZMod(int(mt.group(1)), int(mt.group(2) or 1))
    mt = re.fullmatch(r"QQ?\(sqrt\((-?\d+)\)\)", t)
    if mt:
        return QuadraticField(int(mt.group(1)))
    raise ValueError(f"unknown ring tag {tag!r}")


class CoefficientMap:
    """Reduction ``Q`` or ``Q(sqrt d)`` -> ``Z/p^k`` (or identity-like coercion).

    For quadratic sources a residue ``s`` of ``sqrt(d)`` fixes the
    homomorphism; when omitted it is computed with :func:`sqrt_mod`.
    """

    def __init__(self, source, target: ZMod, root=None):
        self.source, self.target = source, target
        self.root = None
        if isinstance(source, QuadraticField):
            if root is None:
                root = sqrt_mod(source.d, target.modulus)
            r = root.value if isinstance(root, ZModElem) else int(root)
            self.root = ZModElem(r, target.modulus)
            if self.root * self.root != source.d:
                raise ValueError(f"{r}^2 != {source.d} mod {target.modulus}")

    def __call__(self, x):
        if isinstance(x, QuadElem) and x.b != 0:
            return reduce_quad(x, self.target.modulus, self.root)
        return self.target(x)
