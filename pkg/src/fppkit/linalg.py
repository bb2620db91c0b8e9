"""Exact linear algebra.

Two layers:

* generic routines on lists of lists whose entries are field elements with
  Python operators (``Fraction``, ``QuadElem``, ``ZModElem`` with ``k == 1``);
* numpy fast paths over ``F_p`` (``int64``, ``p < 2**31``).

Also small univariate helpers over ``F_p`` (gcd, root finding, characteristic
polynomials) used by the zero-dimensional solver.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from .errors import Inconsistent, SingularMatrix
from .ring import RationalField, ZMod, ZModElem

# -- generic field routines -------------------------------------------------


def _zero_like(M, ring=None):
    if ring is not None:
        return ring.zero
    for row in M:
        for x in row:
            return x * 0
    return 0


def rref(M, ring=None):
    """Reduced row echelon form of a copy of ``M``; returns ``(R, pivots)``.

    With ``ring`` given, entries are first coerced into it (so plain
    integers are treated exactly).
    """
    R = [list(row) if ring is None else [ring(x) for x in row] for row in M]
    if not R:
        return R, []
    nrows, ncols = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c] if not isinstance(R[r][c], ZModElem) else R[r][c].inv()
        R[r] = [x * inv for x in R[r]]
        for i in range(nrows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M, ring=None) -> int:
    return len(rref(M, ring)[1])


def nullspace(M, ring=None, ncols=None):
    """Basis of ``{x : M x = 0}`` as a list of vectors."""
    if not M:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        zero = ring.zero if ring is not None else 0
        one = ring.one if ring is not None else 1
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(M, ring)
    n = len(M[0])
    zero = _zero_like(M, ring)
    one = zero + 1
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def solve(A, b, ring=None):
    """One solution of ``A x = b`` (free variables set to zero)."""
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug, ring)
    n = len(A[0]) if A else 0
    if n in pivots:
        raise Inconsistent("linear system has no solution")
    zero = _zero_like(aug, ring)
    x = [zero] * n
    for i, pc in enumerate(pivots):
        x[pc] = R[i][n]
    return x


def det(M, ring=None):
    n = len(M)
    if n == 0:
        return ring.one if ring is not None else 1
    A = [list(row) if ring is None else [ring(x) for x in row] for row in M]
    zero = _zero_like(A, ring)
    d = zero + 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        p = A[c][c]
        d = d * p
        inv = p.inv() if isinstance(p, ZModElem) else 1 / p
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return d


def inverse(M, ring=None):
    n = len(M)
    zero = _zero_like(M, ring)
    one = zero + 1
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug, ring)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return [row[n:] for row in R]


def matmul(A, B):
    Bt = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            s = None
            for a, b in zip(row, col):
                t = a * b
                s = t if s is None else s + t
            out_row.append(s)
        out.append(out_row)
    return out


def matvec(A, v):
    out = []
    for row in A:
        s = None
        for a, b in zip(row, v):
            t = a * b
            s = t if s is None else s + t
        out.append(s)
    return out


def identity(n, ring):
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def is_invertible(M, ring) -> bool:
    """Invertibility over a field, or over ``Z/p^k`` (unit determinant)."""
    if isinstance(ring, ZMod) and not ring.is_field:
        p = ring.p
        Mp = np.array([[int(x) % p for x in row] for row in M], dtype=np.int64)
        return rank_mod_p(Mp, p) == len(M)
    return bool(det(M, ring))


# -- numpy routines over F_p --------------------------------------------------


def as_array(M, p):
    """Integer matrix mod ``p`` as an ``int64`` array."""
    return np.array([[int(x) % p for x in row] for row in M], dtype=np.int64).reshape(len(M), -1)


def matmul_mod_p(A, B, p):
    """``A @ B mod p`` without int64 overflow."""
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    inner = A.shape[1] if A.ndim == 2 else A.shape[0]
    if inner == 0:
        return np.zeros((A.shape[0], B.shape[1]) if B.ndim == 2 else A.shape[0], dtype=np.int64)
    if (p - 1) ** 2 * inner < 2**62:
        return (A @ B) % p
    lo = B & 0xFFFF
    hi = B >> 16
    if (p - 1) * 0xFFFF * inner >= 2**62:
        chunk = max(1, 2**62 // ((p - 1) * 0x10000))
        out = np.zeros((A.shape[0],) + B.shape[1:], dtype=np.int64)
        for s in range(0, inner, chunk):
            out = (out + matmul_mod_p(A[:, s : s + chunk], B[s : s + chunk], p)) % p
        return out
    h = (A @ hi) % p
    return ((h << 16) % p + (A @ lo) % p) % p


def rref_mod_p(A, p):
    """RREF over ``F_p``; returns ``(R, pivots)`` with ``R`` an int64 array."""
    R = np.array(A, dtype=np.int64) % p
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = R[r:, c]
        k = int(col.argmax())
        if col[k] == 0:
            continue
        if k:
            R[[r, r + k]] = R[[r + k, r]]
        row = R[r]
        inv = pow(int(row[c]), -1, p)
        if inv != 1:
            row *= inv
            row %= p
        f = R[:, c].copy()
        f[r] = 0
        if nrows <= 64:
            # small matrices: a dense update beats selecting the nonzero rows
            R -= f[:, None] * row[None, :]
            R %= p
        else:
            rows = np.flatnonzero(f)
            if 2 * rows.size < nrows:
                if rows.size:
                    R[rows] = (R[rows] - f[rows, None] * row[None, :]) % p
            else:
                R -= f[:, None] * row[None, :]
                R %= p
        pivots.append(c)
        r += 1
    return R, pivots


def echelon_mod_p(A, p):
    """Row echelon form (not reduced): ``(E, pivots)`` with only the nonzero rows."""
    R = np.array(A, dtype=np.int64) % p
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        below = R[r + 1 :, c]
        rows = np.nonzero(below)[0] + r + 1
        if rows.size:
            R[rows] = (R[rows] - np.outer(R[rows, c], R[r]) % p) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank_mod_p(A, p) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(echelon_mod_p(A, p)[1])


def nullspace_mod_p(A, p, ncols=None):
    """Basis of the right kernel as rows of an int64 array."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        n = A.shape[1] if A.ndim == 2 and A.shape[1] else ncols
        return np.eye(n, dtype=np.int64)
    n = A.shape[1]
    R, pivots = rref_mod_p(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for j, f in enumerate(free):
        K[j, f] = 1
        for i, pc in enumerate(pivots):
            K[j, pc] = (-R[i, f]) % p
    return K


def solve_mod_p(A, b, p):
    """A solution of ``A x = b`` over ``F_p`` (free variables zero)."""
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    aug = np.hstack([A, b])
    R, pivots = rref_mod_p(aug, p)
    n = A.shape[1]
    if n in pivots:
        raise Inconsistent("linear system has no solution mod p")
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x


def inv_mod_p(A, p):
    A = np.asarray(A, dtype=np.int64) % p
    n = A.shape[0]
    R, pivots = rref_mod_p(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible mod p")
    return R[:, n:]


def row_basis_mod_p(A, p):
    """Rows of the RREF spanning the row space."""
    R, pivots = rref_mod_p(A, p)
    return R[: len(pivots)], pivots


# -- univariate polynomials over F_p (coefficient lists, low degree first) ---


def upoly_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def upoly_divmod(f, g, p):
    f = [x % p for x in f]
    g = upoly_trim([x % p for x in g])
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = upoly_trim(f)
    inv = pow(g[-1], -1, p)
    q = [0] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        s = len(f) - len(g)
        q[s] = c
        for i, gi in enumerate(g):
            f[s + i] = (f[s + i] - c * gi) % p
        f = upoly_trim(f)
    return q, f


def upoly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return upoly_trim(out)


def upoly_gcd(f, g, p):
    f, g = upoly_trim([x % p for x in f]), upoly_trim([x % p for x in g])
    while g:
        f, g = g, upoly_divmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], -1, p)
        f = [x * inv % p for x in f]
    return f


def upoly_powmod(base, e, mod, p):
    result = [1]
    base = upoly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = upoly_divmod(upoly_mul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = upoly_divmod(upoly_mul(base, base, p), mod, p)[1]
    return result


def upoly_eval(f, x, p):
    v = 0
    for c in reversed(f):
        v = (v * x + c) % p
    return v


def upoly_roots(f, p, rng=None):
    """Distinct roots in ``F_p`` of ``f`` (sorted)."""
    f = upoly_trim([x % p for x in f])
    if len(f) <= 1:
        if not f:
            raise ValueError("zero polynomial has every element as a root")
        return []
    if p < 64:
        return [a for a in range(p) if upoly_eval(f, a, p) == 0]
    rng = rng or random.Random(0)
    xp = upoly_powmod([0, 1], p, f, p)
    xp_minus_x = upoly_trim(xp + [0] * max(0, 2 - len(xp)))
    xp_minus_x = list(xp_minus_x) + [0] * max(0, 2 - len(xp_minus_x))
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = upoly_gcd(f, xp_minus_x, p)
    roots = []

    def split(h):
        h = upoly_trim(h)
        if len(h) <= 1:
            return
        if len(h) == 2:
            roots.append((-h[0]) * pow(h[1], -1, p) % p)
            return
        while True:
            a = rng.randrange(p)
            w = upoly_powmod([a, 1], (p - 1) // 2, h, p)
            w = list(w) + [0] * max(0, 1 - len(w))
            w[0] = (w[0] - 1) % p
            d = upoly_gcd(h, w, p)
            if 1 < len(d) < len(h):
                split(d)
                split(upoly_divmod(h, d, p)[0])
                return

    split(g)
    return sorted(roots)


def charpoly_mod_p(M, p):
    """Characteristic polynomial (low degree first, monic) via Hessenberg reduction."""
    A = [[int(x) % p for x in row] for row in M]
    n = len(A)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if A[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            A[m], A[piv] = A[piv], A[m]
            for row in A:
                row[m], row[piv] = row[piv], row[m]
        inv = pow(A[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = A[i][m - 1] * inv % p
            if u:
                A[i] = [(a - u * b) % p for a, b in zip(A[i], A[m])]
                for row in A:
                    row[m] = (row[m] + u * row[i]) % p
    # Recurrence on leading principal submatrices of the Hessenberg matrix.
    polys = [[1]]
    for k in range(1, n + 1):
        # p_k(x) = (x - h_kk) p_{k-1} - sum_{i<k} h_{i,k} * prod_{j=i+1..k} h_{j,j-1} * p_{i-1}
        hk = A[k - 1][k - 1]
        pk = upoly_mul([(-hk) % p, 1], polys[k - 1], p)
        pk = list(pk) + [0] * (k + 1 - len(pk))
        t = 1
        for i in range(k - 1, 0, -1):
            t = t * A[i][i - 1] % p
            c = t * A[i - 1][k - 1] % p
            if c:
                for j, v in enumerate(polys[i - 1]):
                    pk[j] = (pk[j] - c * v) % p
        polys.append(pk)
    return polys[n]


# -- backends: one interface for F_p (int64) and generic fields (object) -----


class FpBackend:
    """Dense matrices over ``F_p`` as ``int64`` arrays."""

    dtype = np.int64

    def __init__(self, p: int):
        if p >= 2**31:
            raise ValueError("fast path requires p < 2**31")
        self.p = p
        self.ring = ZMod(p)

    def __eq__(self, other):
        return isinstance(other, FpBackend) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def scalar(self, c) -> int:
        return int(self.ring(c).value)

    def to_ring(self, x):
        return ZModElem(int(x), self.ring.modulus)

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def asarray(self, rows):
        return np.array([[self.scalar(c) for c in row] for row in rows], dtype=np.int64).reshape(len(rows), -1)

    def rref(self, A):
        R, piv = rref_mod_p(A, self.p)
        return R[: len(piv)], piv

    def rank(self, A) -> int:
        return rank_mod_p(A, self.p)

    def nullspace(self, A, ncols=None):
        A = np.asarray(A)
        if A.shape[0] == 0:
            return np.eye(A.shape[1] if A.ndim == 2 else ncols, dtype=np.int64)
        return nullspace_mod_p(A, self.p)

    def matmul(self, A, B):
        return matmul_mod_p(A, B, self.p)

    def neg(self, A):
        return (-np.asarray(A)) % self.p

    def add(self, A, B):
        return (np.asarray(A) + np.asarray(B)) % self.p

    def scale(self, A, c):
        return (np.asarray(A) * self.scalar(c)) % self.p

    def inv(self, A):
        return inv_mod_p(A, self.p)

    def solve(self, A, b):
        return solve_mod_p(A, b, self.p)

    def random(self, shape, rng):
        return np.array([rng.randrange(self.p) for _ in range(int(np.prod(shape)))], dtype=np.int64).reshape(shape)

    def nonzero(self, x) -> bool:
        return int(x) % self.p != 0

    def roots(self, poly):
        return upoly_roots(poly, self.p)

    def charpoly(self, M):
        return charpoly_mod_p(M, self.p)


class ObjBackend:
    """Dense matrices over an exact field (``QQ``, ``Q(sqrt d)``) as object arrays."""

    dtype = object

    def __init__(self, ring):
        if not ring.is_field:
            raise ValueError(f"{ring.tag} is not a field")
        self.ring = ring

    def __eq__(self, other):
        return isinstance(other, ObjBackend) and other.ring == self.ring

    def __hash__(self):
        return hash(("obj", self.ring))

    def scalar(self, c):
        return self.ring(c)

    def to_ring(self, x):
        return self.ring(x)

    def zeros(self, shape):
        A = np.empty(shape, dtype=object)
        A.fill(self.ring.zero)
        return A

    def eye(self, n):
        A = self.zeros((n, n))
        for i in range(n):
            A[i, i] = self.ring.one
        return A

    def asarray(self, rows):
        A = self.zeros((len(rows), len(rows[0]) if rows else 0))
        for i, row in enumerate(rows):
            for j, c in enumerate(row):
                A[i, j] = self.ring(c)
        return A

    def _is_nz(self, v):
        return np.array([bool(x) for x in v], dtype=bool)

    def rref(self, A):
        R = np.array(A, dtype=object, copy=True)
        if R.size == 0:
            return R[:0], []
        if isinstance(self.ring, RationalField):
            return _rref_rational(R)
        nrows, ncols = R.shape
        pivots, r = [], 0
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.nonzero(self._is_nz(R[r:, c]))[0]
            if nz.size == 0:
                continue
            piv = r + nz[0]
            if piv != r:
                R[[r, piv]] = R[[piv, r]]
            R[r] = R[r] * (self.ring.one / R[r, c])
            col = R[:, c].copy()
            col[r] = self.ring.zero
            rows = np.nonzero(self._is_nz(col))[0]
            if rows.size:
                cols = np.nonzero(self._is_nz(R[r]))[0]
                R[np.ix_(rows, cols)] = R[np.ix_(rows, cols)] - np.outer(col[rows], R[r, cols])
            pivots.append(c)
            r += 1
        return R[:r], pivots

    def rank(self, A) -> int:
        return len(self.rref(A)[1])

    def nullspace(self, A, ncols=None):
        A = np.asarray(A, dtype=object)
        n = A.shape[1] if A.ndim == 2 else ncols
        if A.shape[0] == 0:
            return self.eye(n)
        R, pivots = self.rref(A)
        free = [c for c in range(n) if c not in set(pivots)]
        K = self.zeros((len(free), n))
        for j, f in enumerate(free):
            K[j, f] = self.ring.one
            for i, pc in enumerate(pivots):
                K[j, pc] = -R[i, f]
        return K

    def matmul(self, A, B):
        A = np.asarray(A, dtype=object)
        B = np.asarray(B, dtype=object)
        if A.shape[-1] == 0:
            out_shape = A.shape[:-1] + B.shape[1:]
            return self.zeros(out_shape)
        return A.dot(B)

    def neg(self, A):
        return -np.asarray(A, dtype=object)

    def add(self, A, B):
        return np.asarray(A, dtype=object) + np.asarray(B, dtype=object)

    def scale(self, A, c):
        return np.asarray(A, dtype=object) * self.ring(c)

    def inv(self, A):
        A = np.asarray(A, dtype=object)
        n = A.shape[0]
        R, piv = self.rref(np.hstack([A, self.eye(n)]))
        if piv[:n] != list(range(n)):
            raise SingularMatrix("matrix is not invertible")
        return R[:, n:]

    def solve(self, A, b):
        x = solve([list(r) for r in np.asarray(A, dtype=object)], list(b), self.ring)
        out = self.zeros(len(x))
        out[:] = x
        return out

    def random(self, shape, rng, bound=20):
        A = self.zeros(shape)
        flat = A.reshape(-1)
        for i in range(flat.size):
            flat[i] = self.ring(rng.randint(-bound, bound))
        return A

    def nonzero(self, x) -> bool:
        return bool(x)


def _rref_rational(R):
    """RREF over Q on sparse integer rows (content removed after each update), normalized at the end."""
    nrows, ncols = R.shape
    rows = []
    for i in range(nrows):
        vals = R[i].tolist()
        den = 1
        for v in vals:
            if v and v.denominator != 1:
                den = math.lcm(den, v.denominator)
        rows.append({j: v.numerator * (den // v.denominator) for j, v in enumerate(vals) if v})
    # unused rows have no entries left of the current column, so the rows that
    # can pivot on column c are exactly those whose leading column is c
    buckets = {}
    for i, row in enumerate(rows):
        if row:
            buckets.setdefault(min(row), []).append(i)
    pivots, prow = [], []

    def eliminate(i, pr, c, a):
        row = rows[i]
        b = row[c]
        g = math.gcd(a, b)
        fa, fb = a // g, b // g
        new = {j: fa * x for j, x in row.items()} if fa != 1 else dict(row)
        for j, y in pr.items():
            v = new.get(j, 0) - fb * y
            if v:
                new[j] = v
            else:
                new.pop(j, None)
        cont = 0
        for x in new.values():
            cont = math.gcd(cont, x)
            if cont == 1:
                break
        if cont > 1:
            new = {j: x // cont for j, x in new.items()}
        rows[i] = new

    while buckets:
        c = min(buckets)
        cands = buckets.pop(c)
        piv = min(cands, key=lambda i: len(rows[i]))
        pr = rows[piv]
        a = pr[c]
        for i in cands:
            if i == piv:
                continue
            eliminate(i, pr, c, a)
            if rows[i]:
                buckets.setdefault(min(rows[i]), []).append(i)
        for i in prow:
            if c in rows[i]:
                eliminate(i, pr, c, a)
        pivots.append(c)
        prow.append(piv)
    r = len(pivots)
    out = np.empty((r, ncols), dtype=object)
    zero, one = Fraction(0), Fraction(1)
    out.fill(zero)
    for k, (c, i) in enumerate(zip(pivots, prow)):
        a = rows[i][c]
        for j, x in rows[i].items():
            out[k, j] = one if x == a else Fraction(x, a)
    return out, pivots


def backend_for(ring):
    """The matrix backend matching a coefficient ring."""
    if isinstance(ring, ZMod):
        if not ring.is_field:
            raise ValueError(f"{ring.tag} is not a field")
        return FpBackend(ring.p)
    return ObjBackend(ring)
