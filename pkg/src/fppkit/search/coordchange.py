"""Coordinate changes that commute with a cyclic action and move one linear form to another."""

from __future__ import annotations

import random

from ..errors import IncompatiblePattern, NoEquivariantSolution
from ..linalg import is_invertible, rref
from ..poly import CyclicAction, Polynomial


def _linear_coeffs(f: Polynomial):
    if not f or not f.is_homogeneous() or f.degree() != 1:
        raise IncompatiblePattern("source and target must be nonzero linear forms")
    n = f.nvars
    return [f.coefficient(tuple(int(i == j) for j in range(n))) for i in range(n)]


def commutant_basis(act: CyclicAction, ring):
    """Basis of the matrices commuting with both generators of ``act``.

    A matrix commutes with the diagonal generator iff it only links
    variables of equal weight, and with the permutation matrix ``A`` iff it
    is fixed by ``M -> A M A^-1``, which sends the unit ``E_ij`` to
    ``(c_i / c_j) E_{perm i, perm j}``. The basis is therefore made of
    scaled sums over orbits of index pairs; orbits whose scalars do not
    return to 1 contribute nothing.
    """
    n = act.nvars
    perm = act.perm if act.perm is not None else tuple(range(n))
    scal = [ring.one] * n if act.perm_scalars is None else [ring(c) for c in act.perm_scalars]
    seen = set()
    basis = []
    for i in range(n):
        for j in range(n):
            if (i, j) in seen:
                continue
            entries = {}
            a, b, s = i, j, ring.one
            while (a, b) not in entries:
                seen.add((a, b))
                entries[(a, b)] = s
                s = s * scal[a] / scal[b]
                a, b = perm[a], perm[b]
            if (a, b) != (i, j) or s != ring.one:
                continue
            if any(act.weights[x] != act.weights[y] for x, y in entries):
                continue
            basis.append(entries)
    return basis


def _matrix(n, basis, u, ring):
    M = [[ring.zero] * n for _ in range(n)]
    for coef, entries in zip(u, basis):
        if coef:
            for (a, b), s in entries.items():
                M[a][b] = M[a][b] + coef * s
    return M


def orbit_support(act: CyclicAction, f: Polynomial):
    """Indices of the permutation orbits on which ``f`` has a nonzero coefficient."""
    c = _linear_coeffs(f)
    return [k for k, orb in enumerate(act.orbits()) if any(c[i] for i in orb)]


def equivariant_coordinate_change(act: CyclicAction, source: Polynomial, target: Polynomial, *,
                                  normalize=None, seed: int = 0, tries: int = 20):
    """Invertible ``M`` commuting with ``act`` such that
    ``substitute_linear(source, M^-1)`` is a multiple of ``target``.

    With the column convention of ``substitute_linear``, the coefficient
    vectors satisfy ``M t = lambda s``. Unknowns are the coordinates of ``M``
    in :func:`commutant_basis`; free ones are set to their value in the
    identity, and random values are tried if that gives a singular matrix.
    Finally ``M`` is scaled so that entry ``normalize`` (a pair ``(i, j)``;
    default the first nonzero entry in row-major order) is 1; with
    ``normalize=False`` the solution is returned unscaled.
    """
    if source.nvars != act.nvars or target.nvars != act.nvars:
        raise IncompatiblePattern("action and forms disagree on the number of variables")
    ring = source.ring
    s = _linear_coeffs(source)
    t = _linear_coeffs(target)
    if orbit_support(act, source) != orbit_support(act, target):
        raise IncompatiblePattern("source and target are supported on different orbits")
    n = act.nvars
    basis = commutant_basis(act, ring)
    # equations (M t)_a = s_a, linear in the basis coordinates u
    rows = []
    for a in range(n):
        row = [ring.zero] * len(basis)
        for k, entries in enumerate(basis):
            v = ring.zero
            for (x, y), sc in entries.items():
                if x == a and t[y]:
                    v = v + sc * t[y]
            row[k] = v
        rows.append(row + [s[a]])
    R, piv = rref(rows, ring)
    m = len(basis)
    if m in piv:
        raise NoEquivariantSolution("no equivariant matrix maps the target to the source")
    free = [k for k in range(m) if k not in piv]
    ident = [ring.one if all(x == y for x, y in entries) else ring.zero for entries in basis]
    rng = random.Random(seed)
    for attempt in range(tries + 1):
        vals = {k: ident[k] if attempt == 0 else ring(rng.randint(-3, 3)) for k in free}
        u = [ring.zero] * m
        for k in free:
            u[k] = vals[k]
        for r, pc in enumerate(piv):
            u[pc] = R[r][m] - sum((R[r][k] * vals[k] for k in free), ring.zero)
        M = _matrix(n, basis, u, ring)
        if is_invertible(M, ring):
            break
    else:
        raise NoEquivariantSolution("every equivariant solution tried is singular")
    if normalize is False:
        return M
    if normalize is None:
        normalize = next((i, j) for i in range(n) for j in range(n) if M[i][j])
    i, j = normalize
    if not M[i][j]:
        raise NoEquivariantSolution(f"entry {normalize} of the coordinate change is zero")
    inv = ring.one / M[i][j]
    return [[x * inv for x in row] for row in M]


def check_coordinate_change(act: CyclicAction, M, source: Polynomial, target: Polynomial, zeta=None) -> bool:
    """Exact re-check: ``M`` commutes with both generators and maps ``source`` onto a multiple of ``target``."""
    from ..linalg import matmul
    from ..poly import substitute_linear
    from ..linalg import inverse

    ring = source.ring
    A = act.permutation_matrix(ring)
    if matmul(M, A) != matmul(A, M):
        return False
    if zeta is not None:
        D = act.diagonal_matrix(ring, zeta)
        if matmul(M, D) != matmul(D, M):
            return False
    elif not act.preserves_weights(M):
        return False
    img = substitute_linear(source, inverse(M, ring))
    ci, ct = _linear_coeffs(img), _linear_coeffs(target)
    k = next(i for i in range(len(ct)) if ct[i])
    lam = ci[k] / ct[k]
    return bool(lam) and all(a == lam * b for a, b in zip(ci, ct))


__all__ = ["check_coordinate_change", "commutant_basis", "equivariant_coordinate_change", "orbit_support"]
