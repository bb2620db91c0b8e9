import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fppkit.errors import ArityMismatch, CoefficientNotInRing, PolySyntaxError, SingularMatrix, UnknownVariable
from fppkit.linalg import matmul
from fppkit.poly import (
    CyclicAction,
    PolyRing,
    format_poly_file,
    jacobian,
    monomial_weight,
    monomials_of_degree,
    parse_poly,
    read_poly_text,
    substitute_linear,
    weight_component_basis,
)
from fppkit.ring import GF, QQ, QuadElem, QuadraticField

K = QuadraticField(-7)


def test_parse_examples():
    R = PolyRing([f"Q{i}" for i in range(10)], QQ)
    f = R.parse("Q0^2 + 3*Q1*Q6")
    assert len(f.terms) == 2 and f.is_homogeneous() and f.degree() == 2
    assert not R.parse("Q0^2 - Q0^2").terms
    P = PolyRing([f"P{i}" for i in range(10)], K)
    g = P.parse("(272 - 848*r)/7 * P4")
    assert g.degree() == 1
    assert g.coefficient((0, 0, 0, 0, 1, 0, 0, 0, 0, 0)) == QuadElem(272, -848, 7)


def test_parse_errors_carry_location():
    R = PolyRing("x y", QQ)
    with pytest.raises(PolySyntaxError) as ei:
        R.parse("x^2 + * y")
    assert ei.value.lineno == 1 and ei.value.offset == 7
    with pytest.raises(UnknownVariable):
        R.parse("x + z")
    with pytest.raises(CoefficientNotInRing):
        PolyRing("x y", GF(7)).parse("x/7")
    with pytest.raises(CoefficientNotInRing):
        R.parse("r*x")


def test_file_errors_report_line():
    text = "# comment\nring QQ vars x y\nx + y\nx^^2\n"
    with pytest.raises(PolySyntaxError) as ei:
        read_poly_text(text)
    assert ei.value.lineno == 4


def test_file_round_trip():
    R = PolyRing("a b c", K)
    polys = [R.parse("(1 + r)/2*a^2 - b*c"), R.parse("a + 3*b")]
    amb, back = read_poly_text(format_poly_file(R, polys, ["test"]))
    assert amb.names == R.names and back == polys


def test_evaluate_examples():
    R = PolyRing("x y", GF(43))
    F = GF(43)
    assert R.parse("x^2 + 7*y^2").evaluate([F(6), F(1)]) == 0
    assert R.one().evaluate([F(3), F(4)]) == 1
    assert R.parse("x*y").evaluate([F(0), F(17)]) == 0
    with pytest.raises(ArityMismatch):
        R.parse("x").evaluate([F(1)])


def test_jacobian_examples():
    F = GF(43)
    R = PolyRing("x y", F)
    J = jacobian([R.parse("x^2 + 7*y^2")], [F(6), F(1)])
    assert [c.value for c in J[0]] == [12, 14]
    S = PolyRing("a b c", QQ)
    assert jacobian([S.parse("2*a - b + 5*c")], [1, 2, 3]) == [[2, -1, 5]]


def test_jacobian_of_veronese_has_three_dimensional_kernel():
    from fppkit.datasets import veronese
    from fppkit.linalg import rank

    I = veronese()
    # the image of (1, 2, 3) under the conics
    x, y, z = 1, 2, 3
    pt = [x * x, x * y, x * z, y * y, y * z, z * z]
    J = jacobian(I.gens, pt)
    assert 6 - rank(J, QQ) == 3


def test_print_parse_fixpoint():
    R = PolyRing("x0 x1 x2", K)
    rng = random.Random(1)
    for _ in range(50):
        f = R.zero()
        for _ in range(rng.randint(0, 5)):
            e = tuple(rng.randint(0, 3) for _ in range(3))
            c = QuadElem(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(1, 9))
            f = f + R.monomial(e, c)
        assert R.parse(str(f)) == f
        assert str(R.parse(str(f))) == str(f)


def polys(R, max_terms=4, max_exp=3, bound=20):
    n = R.nvars
    term = st.tuples(st.tuples(*[st.integers(0, max_exp)] * n), st.integers(-bound, bound))
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((R.monomial(e, R.ring(c)) for e, c in ts), R.zero())
    )


R3 = PolyRing("x y z", GF(101))


@given(polys(R3), polys(R3), st.tuples(*[st.integers(0, 100)] * 3))
def test_evaluation_is_multiplicative(f, g, pt):
    pt = [GF(101)(v) for v in pt]
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)
    assert (f + g).evaluate(pt) == f.evaluate(pt) + g.evaluate(pt)


@given(polys(R3), polys(R3))
def test_derivative_product_rule(f, g):
    for i in range(3):
        assert (f * g).diff(i) == f.diff(i) * g + f * g.diff(i)


def test_weight_examples():
    act = CyclicAction(7, (1, 2, 3, 4, 5, 6))
    assert monomial_weight((1, 1, 0, 0, 0, 0), act) == 3
    assert monomial_weight((0,) * 6, act) == 0
    assert monomial_weight((0, 0, 3, 0, 0, 0), act) == 2


def test_weight_component_basis_examples():
    R = PolyRing("x0 x1 x2 x3", QQ)
    triv = CyclicAction.trivial(4)
    assert len(weight_component_basis(2, 0, triv, R)) == comb(5, 2)
    S = PolyRing("a b c", QQ)
    assert weight_component_basis(1, 2, CyclicAction(3, (1, 2, 3)), S) == [(0, 1, 0)]


@given(st.lists(st.integers(0, 6), min_size=10, max_size=10), st.integers(0, 3))
def test_weight_classes_partition_monomials(weights, d):
    act = CyclicAction(7, tuple(weights))
    classes = [weight_component_basis(d, w, act, 10) for w in range(7)]
    flat = [m for c in classes for m in c]
    assert sorted(flat) == sorted(monomials_of_degree(10, d))
    assert len(flat) == comb(d + 9, 9)


@given(st.tuples(*[st.integers(0, 3)] * 4), st.tuples(*[st.integers(0, 3)] * 4), st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_weight_is_additive(m1, m2, w):
    act = CyclicAction(7, tuple(w))
    m12 = tuple(a + b for a, b in zip(m1, m2))
    assert act.weight(m12) == (act.weight(m1) + act.weight(m2)) % 7


def test_substitute_linear_examples():
    R = PolyRing("P1 P2 P3", QQ)
    f = R.parse("P1^2 + 3*P2*P3")
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert substitute_linear(f, I3) == f
    perm = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    s = R.parse("P1 + P2 + P3")
    assert substitute_linear(s, perm) == s
    with pytest.raises(SingularMatrix):
        substitute_linear(f, [[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_diagonal_rescale_evaluates_consistently():
    R = PolyRing("x y z", QQ)
    f = R.parse("x^3 - 2*x*y*z + z^2*y")
    lam = [2, 3, 5]
    D = [[lam[i] if i == j else 0 for j in range(3)] for i in range(3)]
    g = substitute_linear(f, D)
    rng = random.Random(0)
    for _ in range(10):
        pt = [rng.randint(-9, 9) for _ in range(3)]
        assert g.evaluate(pt) == f.evaluate([l * v for l, v in zip(lam, pt)])


def small_matrices():
    return st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3)


@given(polys(PolyRing("x y z", QQ)), small_matrices(), small_matrices())
def test_substitution_composes(f, A, B):
    from fppkit.linalg import det

    if det(A, QQ) == 0 or det(B, QQ) == 0:
        return
    AB = matmul([[QQ(x) for x in r] for r in A], [[QQ(x) for x in r] for r in B])
    assert substitute_linear(f, AB) == substitute_linear(substitute_linear(f, B), A)


def test_action_apply_matches_permutation_matrix():
    act = CyclicAction(7, (1, 1, 1, 2, 2, 2), (1, 2, 0, 4, 5, 3), (1, 1, 1, 2, 2, 2))
    R = PolyRing("a b c d e f", QQ)
    f = R.parse("a^2*d + 3*b*e - c*f*f")
    assert act.apply(f) == substitute_linear(f, act.permutation_matrix(QQ))
    assert act.perm_order == 3


def test_parse_poly_helper():
    f = parse_poly("x + 2*y", ["x", "y"], GF(5))
    assert f.ring == GF(5) and f.degree() == 1
