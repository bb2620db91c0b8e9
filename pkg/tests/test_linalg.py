from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fppkit.errors import Inconsistent
from fppkit.linalg import (
    charpoly_mod_p,
    det,
    inverse,
    matmul,
    nullspace,
    nullspace_mod_p,
    rank,
    rank_mod_p,
    rref,
    rref_mod_p,
    solve,
    upoly_eval,
    upoly_roots,
)
from fppkit.ring import GF, QQ, QuadElem, QuadraticField


def int_matrices(max_rows=6, max_cols=6, bound=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@given(int_matrices())
def test_rational_rref_matches_sympy(M):
    R, piv = rref([[Fraction(x) for x in row] for row in M], QQ)
    S, spiv = sympy.Matrix(M).rref()
    assert tuple(piv) == tuple(spiv)
    for i in range(len(piv)):
        assert [Fraction(str(x)) for x in S.row(i)] == [Fraction(x) for x in R[i]]
    assert rank(M, QQ) == sympy.Matrix(M).rank()


@given(int_matrices())
def test_nullspace_is_a_kernel_of_full_dimension(M):
    n = len(M[0])
    K = nullspace(M, QQ, ncols=n)
    assert len(K) == n - sympy.Matrix(M).rank()
    for v in K:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in M)


@given(int_matrices(), st.sampled_from([2, 3, 5, 7, 43]))
def test_mod_p_rank_matches_sympy(M, p):
    A = np.array(M, dtype=np.int64) % p
    # independent oracle: sympy's rank over GF(p) through its domain matrices
    from sympy.polys.matrices import DomainMatrix

    dm = DomainMatrix([[sympy.GF(p)(int(x)) for x in row] for row in M], (len(M), len(M[0])), sympy.GF(p))
    expected = dm.rank()
    assert rank_mod_p(A, p) == expected
    K = nullspace_mod_p(A, p, ncols=len(M[0]))
    assert len(K) == len(M[0]) - expected
    if len(K):
        assert not (A @ np.array(K).T % p).any()


def test_rref_mod_p_pivots():
    A = np.array([[0, 2, 4], [0, 1, 2], [1, 0, 3]], dtype=np.int64)
    R, piv = rref_mod_p(A, 7)
    assert list(piv) == [0, 1]
    assert R[0].tolist() == [1, 0, 3] and R[1].tolist() == [0, 1, 2]


def test_quadratic_field_linear_algebra():
    K = QuadraticField(-7)
    r = QuadElem.root(-7)
    M = [[K(1), r], [r, K(-7)]]
    assert rank(M, K) == 1
    assert det(M, K) == 0
    N = [[K(1), r], [K(2), K(3)]]
    Ni = inverse(N, K)
    assert matmul(N, Ni) == [[K(1), K(0)], [K(0), K(1)]]


def test_solve_and_inconsistent():
    A = [[1, 2], [2, 4]]
    with pytest.raises(Inconsistent):
        solve(A, [1, 3], QQ)
    x = solve([[1, 2], [3, 4]], [5, 6], QQ)
    assert x == [Fraction(-4), Fraction(9, 2)]


@given(int_matrices(4, 4, 6))
def test_det_matches_sympy(M):
    if len(M) != len(M[0]):
        M = [row[: len(M)] + [0] * (len(M) - len(row)) for row in M]
    assert det(M, QQ) == int(sympy.Matrix(M).det())


@given(st.lists(st.lists(st.integers(0, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_charpoly_annihilates(M):
    p = 7
    A = np.array(M, dtype=np.int64)
    chi = charpoly_mod_p(A, p)
    # Cayley-Hamilton: chi(A) = 0
    acc = np.zeros((3, 3), dtype=np.int64)
    P = np.eye(3, dtype=np.int64)
    for c in chi:
        acc = (acc + int(c) * P) % p
        P = (P @ A) % p
    assert not acc.any()


def test_univariate_roots():
    # (x - 2)(x - 5)(x^2 + 1) over F_13: x^2 + 1 has roots 5, 8
    from fppkit.linalg import upoly_mul

    f = upoly_mul(upoly_mul([-2 % 13, 1], [-5 % 13, 1], 13), [1, 0, 1], 13)
    roots = sorted(upoly_roots(f, 13))
    assert roots == sorted({2, 5, 8})
    assert all(upoly_eval(f, a, 13) == 0 for a in roots)


def test_sparse_rational_path_agrees_with_generic():
    from fppkit.linalg import ObjBackend

    rng = np.random.default_rng(3)
    for _ in range(100):
        r, c = rng.integers(1, 7, size=2)
        M = rng.integers(-3, 4, size=(r, c)).tolist()
        M = [[Fraction(int(x), int(rng.integers(1, 4))) for x in row] for row in M]
        R, piv = ObjBackend(QQ).rref(np.array(M, dtype=object))
        S, spiv = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in M]).rref()
        assert tuple(piv) == tuple(spiv)
        for i in range(len(piv)):
            assert [Fraction(str(x)) for x in S.row(i)] == list(R[i])


def test_gf_elements_in_generic_rank():
    F = GF(5)
    M = [[F(1), F(2)], [F(2), F(4)]]
    assert rank(M, F) == 1
