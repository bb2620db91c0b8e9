import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fppkit.errors import DependentRows, NotFound, PrecisionTooLow
from fppkit.lift import lift_root
from fppkit.recog import (
    LatticeBasis,
    height_cap,
    integer_det,
    lll_reduce,
    recognize_quad,
    recognize_rational,
    recognize_vector,
)
from fppkit.ring import Modulus, QuadElem, ZModElem, parse_quad, reduce_quad, sqrt_mod

M43 = Modulus(43, 40)
S43 = sqrt_mod(-7, 43, 40)


def lovasz_holds(rows, delta=Fraction(99, 100)):
    """Size reduction and Lovasz condition via sympy's exact Gram-Schmidt."""
    vs = [sympy.Matrix(r) for r in rows]
    star = []
    mu = {}
    for i, v in enumerate(vs):
        w = v
        for j in range(i):
            mu[i, j] = v.dot(star[j]) / star[j].dot(star[j])
            w = w - mu[i, j] * star[j]
        star.append(w)
    if any(abs(m) > sympy.Rational(1, 2) for m in mu.values()):
        return False
    d = sympy.Rational(delta.numerator, delta.denominator)
    return all(star[k].dot(star[k]) >= (d - mu[k, k - 1] ** 2) * star[k - 1].dot(star[k - 1]) for k in range(1, len(vs)))


def same_lattice(A, B):
    """Rows of A and B generate the same lattice (square, full rank)."""
    MA, MB = sympy.Matrix(A), sympy.Matrix(B)
    U = MA * MB.inv()
    V = MB * MA.inv()
    return all(x.is_integer for x in U) and all(x.is_integer for x in V)


def test_reduced_orthogonal_basis_is_kept():
    B = [[1, 0, 0], [0, 2, 0], [0, 0, 3]]
    out = lll_reduce(B)
    assert [list(map(abs, r)) for r in out.rows] == B


def test_two_dimensional_gauss_example():
    M = 10**12
    out = lll_reduce([[1, 0], [M, 1]])
    # Gauss reduction oracle: the lattice is Z^2, so the reduced basis is unit vectors
    assert sorted(sorted(map(abs, r)) for r in out.rows) == [[0, 1], [0, 1]]
    assert same_lattice(out.rows, [[1, 0], [M, 1]])


def test_scrambled_identity():
    rng = random.Random(5)
    U = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(30):
        i, j = rng.sample(range(3), 2)
        t = rng.randint(-9, 9)
        U[i] = [a + t * b for a, b in zip(U[i], U[j])]
    assert abs(integer_det(U)) == 1
    out = lll_reduce(U)
    assert max(abs(x) for r in out.rows for x in r) <= 1
    assert abs(integer_det(out.rows)) == 1


def test_dependent_rows_rejected():
    with pytest.raises(DependentRows):
        lll_reduce([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        lll_reduce([[1, 0], [0, 1]], delta=Fraction(1, 5))


@settings(max_examples=40)
@given(st.integers(2, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-10**6, 10**6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_lll_output_against_sympy_oracles(B):
    assume(sympy.Matrix(B).det() != 0)
    out = lll_reduce(B)
    assert lovasz_holds(out.rows)
    assert out.is_lll_reduced()
    assert same_lattice(out.rows, B)
    assert abs(integer_det(out.rows)) == abs(int(sympy.Matrix(B).det()))
    assert integer_det(B) == int(sympy.Matrix(B).det())


@pytest.mark.parametrize("text", ["(-1 + r)/2", "(272 - 848*r)/7", "(832 - 192*r)/7"])
def test_recognize_published_coefficients(text):
    q = parse_quad(text)
    x = reduce_quad(q, M43, S43)
    assert recognize_quad(x, S43) == q


def test_recognize_rationals():
    assert recognize_quad(ZModElem(5, M43), S43) == QuadElem(5)
    assert recognize_rational(ZModElem(Fraction(-22, 7), M43)) == Fraction(-22, 7)
    assert recognize_rational(ZModElem(0, M43)) == 0


def test_recognize_vector_of_search_residues():
    # residues 24, 0, 28 at p = 43 (root 6), carried to 43^40 along the Hensel lift of 6
    s = lift_root(-7, 6, 43, 40)
    coeffs = [parse_quad(t) for t in ["(-1 + r)/2", "(272 - 848*r)/7", "(832 - 192*r)/7"]]
    xs = [reduce_quad(q, M43, s) for q in coeffs]
    assert [x.value % 43 for x in xs] == [24, 0, 28]
    assert recognize_vector(xs, s) == coeffs
    assert recognize_vector([ZModElem(0, M43)] * 3, S43) == [QuadElem(0)] * 3


def test_random_vector_round_trip():
    rng = random.Random(11)
    H = 10**6
    qs = [QuadElem(rng.randint(-H, H), rng.randint(-H, H), rng.randint(1, H)) for _ in range(10)]
    qs = [q for q in qs if q.c % 43]
    xs = [reduce_quad(q, M43, S43) for q in qs]
    assert recognize_vector(xs, S43, H) == qs


def test_recognize_with_lifted_root_convention():
    # the Hensel lift of 6 and the canonical root at 43^40 may be conjugate
    s = lift_root(-7, 6, 43, 40)
    q = parse_quad("(272 + 848*r)/7")
    assert recognize_quad(reduce_quad(q, M43, s), s) == q


def test_precision_too_low():
    m = Modulus(43, 3)
    s = sqrt_mod(-7, 43, 3)
    with pytest.raises(PrecisionTooLow):
        recognize_quad(ZModElem(5, m), s, H=10**6)
    assert height_cap(m.N) < 10


def test_height_cap_threshold():
    N = 43**40
    H = height_cap(N)
    assert N > 2**16 * H**3 and N <= 2**16 * (H + 1) ** 3


def test_not_found_reports_index():
    s = sqrt_mod(-7, 43, 40)
    x = ZModElem(123456789123456789123456789, M43)
    with pytest.raises(NotFound) as ei:
        recognize_vector([ZModElem(3, M43), x], s, H=100)
    assert ei.value.index == 1


@settings(max_examples=200)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_round_trip_at_height_bound(a, b, c):
    assume(c % 43)
    q = QuadElem(a, b, c)
    assert recognize_quad(reduce_quad(q, M43, S43), S43, H=10**6) == q


@settings(max_examples=100)
@given(st.integers(0, 43**40 - 1), st.integers(1, 10**4))
def test_recognition_is_sound(x, H):
    # any answer re-verifies through the forward reduction
    xe = ZModElem(x, M43)
    try:
        q = recognize_quad(xe, S43, H=H)
    except NotFound:
        return
    assert reduce_quad(q, M43, S43) == xe and q.height() <= H


def test_lattice_basis_validation():
    with pytest.raises(ValueError):
        LatticeBasis([[1, 2], [3]])
    assert LatticeBasis([[1, 2]]).dim == 1
