"""Lattice reduction and recognition of rational and quadratic numbers from residues.

A residue ``x`` modulo ``N = p^k`` is recognized as ``(a + b*sqrt(d))/c`` by
finding a short vector ``(a, -b, c)`` in the lattice of relations
``a + b*s = c*x (mod N)``, spanned by ``(N, 0, 0), (s, 1, 0), (x, 0, 1)``.
Every answer is re-checked by mapping it back with :func:`reduce_quad`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DenominatorNotUnit, DependentRows, NotFound, PrecisionTooLow
from .ring import Modulus, QuadElem, ZModElem, reduce_quad

DEFAULT_DELTA = Fraction(99, 100)
DEFAULT_MARGIN = 2**16


@dataclass
class LatticeBasis:
    """Integer row basis of a lattice.

    After :func:`lll_reduce`, ``transform`` holds the unimodular matrix ``U``
    with ``rows = U * input_rows``.
    """

    rows: list
    transform: list | None = field(default=None, compare=False)

    def __post_init__(self):
        self.rows = [[int(v) for v in r] for r in self.rows]
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("rows of different lengths")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def gram_schmidt(self):
        """Exact ``(mu, |b*_i|^2)`` of the rows."""
        return _gram_schmidt(self.rows)

    def is_lll_reduced(self, delta=DEFAULT_DELTA) -> bool:
        delta = Fraction(delta)
        mu, B = self.gram_schmidt()
        n = len(self.rows)
        for i in range(n):
            for j in range(i):
                if abs(mu[i][j]) > Fraction(1, 2):
                    return False
        return all(B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1] for k in range(1, n))


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _gram_schmidt(rows):
    n = len(rows)
    star = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = []
    for i, b in enumerate(rows):
        v = [Fraction(x) for x in b]
        for j in range(i):
            if B[j] == 0:
                continue
            mu[i][j] = Fraction(_dot(b, star[j])) / B[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        B.append(_dot(v, v))
    return mu, B


def integer_det(M) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def lll_reduce(B, delta=DEFAULT_DELTA, verify: bool = True) -> LatticeBasis:
    """LLL-reduce the rows of ``B`` with all-integer Gram-Schmidt data.

    ``delta`` is a rational in ``(1/4, 1)``. The unimodular transform is kept
    in the result and, with ``verify``, checked (``U * B == result`` and
    ``det U = +-1``). Raises :class:`DependentRows` for dependent rows.
    """
    basis = B if isinstance(B, LatticeBasis) else LatticeBasis(B)
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError(f"delta = {delta} is outside (1/4, 1)")
    n = basis.dim
    b = [list(r) for r in basis.rows]
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return LatticeBasis([], [])
    # integral Gram-Schmidt data (1-based as in the textbook recurrences):
    # d[i] = det of the Gram matrix of b_1..b_i, lam[k][j] = d[j] * mu_kj
    d = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    dn, dd = delta.numerator, delta.denominator

    def vec(i):
        return b[i - 1]

    d[1] = _dot(vec(1), vec(1))
    if d[1] == 0:
        raise DependentRows("zero row")

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l]:
            q = (2 * lam[k][l] + d[l]) // (2 * d[l])
            b[k - 1] = [x - q * y for x, y in zip(b[k - 1], b[l - 1])]
            H[k - 1] = [x - q * y for x, y in zip(H[k - 1], H[l - 1])]
            lam[k][l] -= q * d[l]
            for i in range(1, l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k - 1], b[k - 2] = b[k - 2], b[k - 1]
        H[k - 1], H[k - 2] = H[k - 2], H[k - 1]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        Bv = (d[k - 2] * d[k] + lm * lm) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lm * t) // d[k - 1]
            lam[i][k - 1] = (Bv * t + lm * lam[i][k]) // d[k]
        d[k - 1] = Bv

    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(vec(k), vec(j))
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise DependentRows(f"row {k - 1} depends on the previous rows")
                    d[k] = u
        red(k, k - 1)
        # Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lam^2
        if dd * d[k] * d[k - 2] < dn * d[k - 1] ** 2 - dd * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
    out = LatticeBasis(b, H)
    if verify:
        _verify_transform(basis.rows, out)
    return out


def _verify_transform(rows, out: LatticeBasis):
    U = out.transform
    m = len(rows[0]) if rows else 0
    for i, r in enumerate(out.rows):
        if r != [sum(U[i][t] * rows[t][j] for t in range(len(rows))) for j in range(m)]:
            raise AssertionError("LLL transform does not reproduce the reduced rows")
    if abs(integer_det(U)) != 1:
        raise AssertionError("LLL transform is not unimodular")


# --- recognition ---------------------------------------------------------


def _residue(x, modulus=None):
    if isinstance(x, ZModElem):
        return x.value, x.modulus
    if modulus is None:
        raise TypeError("a plain integer residue needs a modulus")
    m = modulus if isinstance(modulus, Modulus) else Modulus(*modulus)
    return int(x) % m.N, m


def height_cap(N: int, margin=DEFAULT_MARGIN, dim: int = 3) -> int:
    """Largest ``H`` with ``N > margin * H^dim`` (0 if none)."""
    lo, hi = 0, 1
    while N > margin * hi**dim:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if N > margin * mid**dim:
            lo = mid
        else:
            hi = mid
    return lo


def _candidates(rows, d):
    for r in rows:
        a, mb, c = r
        if c:
            yield QuadElem(a, -mb, c, d)


def recognize_quad(
    x,
    s=None,
    H: int | None = None,
    *,
    d: int | None = None,
    margin=DEFAULT_MARGIN,
    weight: int = 1,
    delta=DEFAULT_DELTA,
    modulus=None,
) -> QuadElem:
    """Recover ``(a + b*sqrt(d))/c`` with ``|a|, |b|, c <= H`` from its residue ``x``.

    ``s`` is a square root of ``d`` modulo the same ``p^k`` (``d`` defaults
    to the balanced residue of ``s^2``). With ``s`` omitted only rationals
    ``a/c`` are sought. With ``H`` omitted the bound is tried at powers of 10
    up to the largest value the precision allows. ``weight`` scales the
    residue column of the lattice.

    Raises :class:`PrecisionTooLow` if ``p^k <= margin * H^3`` and
    :class:`NotFound` if no candidate within the bound re-verifies.
    """
    xv, mod = _residue(x, modulus)
    N = mod.N
    dim = 3 if s is not None else 2
    cap = height_cap(N, margin, dim)
    if H is not None:
        if H < 1:
            raise ValueError("height bound must be positive")
        if H > cap:
            raise PrecisionTooLow(f"{mod} is too small for height {H} (needs p^k > {margin} * H^{dim})")
        bounds = [H]
    else:
        if cap < 1:
            raise PrecisionTooLow(f"{mod} is too small for any height bound")
        bounds = []
        h = 1
        while h <= cap:
            bounds.append(h)
            h *= 10
        if bounds[-1] != cap:
            bounds.append(cap)
    if s is not None:
        sv = s.value if isinstance(s, ZModElem) else int(s) % N
        if d is None:
            d = ((sv * sv + N // 2) % N) - N // 2
        elif (sv * sv - d) % N:
            raise ValueError(f"s^2 is not {d} modulo {mod}")
        rows = [[N * weight, 0, 0], [sv * weight, 1, 0], [xv * weight, 0, 1]]
    else:
        d = -7 if d is None else d
        rows = [[N * weight, 0], [xv * weight, 1]]
    red = lll_reduce(rows, delta)
    cands = []
    for r in red.rows:
        a = r[0] // weight
        if s is not None:
            a, mb, c = a, r[1], r[2]
        else:
            a, mb, c = a, 0, r[1]
        if c == 0:
            continue
        try:
            q = QuadElem(a, -mb, c, d)
        except ValueError:
            continue
        cands.append(q)
    cands.sort(key=QuadElem.height)
    for bound in bounds:
        for q in cands:
            if q.height() > bound:
                break
            if _verifies(q, xv, mod, sv if s is not None else None):
                return q
    raise NotFound(f"no element of height <= {bounds[-1]} matches the residue modulo {mod}")


def _verifies(q: QuadElem, xv: int, mod: Modulus, sv) -> bool:
    try:
        if sv is None:
            if q.b:
                return False
            return ZModElem(Fraction(q.a, q.c), mod).value == xv
        return reduce_quad(q, mod, sv).value == xv
    except DenominatorNotUnit:
        return False


def recognize_rational(x, H: int | None = None, **kw) -> Fraction:
    """Recover ``a/c`` with ``|a|, c <= H`` from its residue."""
    q = recognize_quad(x, None, H, **kw)
    return Fraction(q.a, q.c)


def recognize_vector(xs, s=None, H: int | None = None, **kw) -> list:
    """Element-wise :func:`recognize_quad`; fails on the first element that does not recognize."""
    out = []
    for i, x in enumerate(xs):
        try:
            out.append(recognize_quad(x, s, H, **kw))
        except NotFound as e:
            raise NotFound(f"element not recognized: {e}", index=i) from None
    return out


__all__ = [
    "DEFAULT_DELTA",
    "DEFAULT_MARGIN",
    "LatticeBasis",
    "height_cap",
    "integer_det",
    "lll_reduce",
    "recognize_quad",
    "recognize_rational",
    "recognize_vector",
]
