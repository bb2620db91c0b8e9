import itertools
import random
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fppkit.datasets import planted_three_solutions, twisted_cubic, veronese
from fppkit.errors import NotACurve, NotZeroDimensional, SingularPoint
from fppkit.linalg import rank
from fppkit.poly import PolyRing, monomials_of_degree
from fppkit.ring import GF, QQ
from fppkit.vgeom import (
    check_vanishing,
    graded_piece_rank,
    groebner_basis,
    hilbert_function,
    hilbert_polynomial,
    ideal_contains,
    is_groebner_basis,
    is_nonreduced_curve,
    jets_at_point,
    sample_points,
    singular_locus,
    solve_zero_dim,
    vanish_to_order_conditions,
    vanishing_forms,
)
from fppkit.vgeom.ideal import HilbertData, Ideal, ProjPoint
from fppkit.vgeom.sampling import enumerate_points


def affine_last(pt):
    """Coordinates scaled so the last one is 1, as plain ints."""
    inv = pt.coords[-1].inv()
    return [int((c * inv).value) for c in pt.coords]


def brute_piece_rank(I, n):
    """Rank of {m*g} in degree n through sympy (independent of the graded code)."""
    rows = []
    monos = list(monomials_of_degree(I.nvars, n))
    index = {m: i for i, m in enumerate(monos)}
    for g in I.gens:
        dg = g.degree()
        if dg > n:
            continue
        for m in monomials_of_degree(I.nvars, n - dg):
            row = [0] * len(monos)
            for e, c in g.terms.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] = sympy.Rational(c.numerator, c.denominator)
            rows.append(row)
    return sympy.Matrix(rows).rank() if rows else 0


def test_graded_piece_rank_examples():
    P1 = PolyRing("x y", QQ)
    assert graded_piece_rank(Ideal([], P1), 3) == 0
    assert graded_piece_rank(Ideal([P1.parse("x"), P1.parse("y")]), 1) == 2
    assert graded_piece_rank(twisted_cubic(), 2) == 3


@pytest.mark.parametrize("n", range(0, 6))
def test_twisted_cubic_hilbert_function_against_brute_rank(n):
    I = twisted_cubic()
    assert hilbert_function(I, n) == 3 * n + 1
    assert graded_piece_rank(I, n) == brute_piece_rank(I, n)


@pytest.mark.parametrize("n", range(0, 4))
def test_veronese_hilbert_function(n):
    # degree-2n forms on P^2
    assert hilbert_function(veronese(), n) == comb(2 * n + 2, 2) == 2 * n * n + 3 * n + 1


def test_zero_ideal_hilbert_function():
    P2 = PolyRing("x y z", QQ)
    for n in range(6):
        assert hilbert_function(Ideal([], P2), n) == (n + 1) * (n + 2) // 2


def test_hilbert_polynomial_examples():
    hd = hilbert_polynomial(twisted_cubic())
    assert hd.matches([1, 3]) and hd.dimension == 1 and hd.degree == 3
    hv = hilbert_polynomial(veronese(7))
    assert hv.matches([1, 3, 2]) and hv.degree == 4
    P3 = PolyRing("x y z w", QQ)
    hh = hilbert_polynomial(Ideal([P3.parse("x + y - 3*w")]))
    assert hh.matches([1, sympy.Rational(3, 2), sympy.Rational(1, 2)]) and hh.degree == 1
    h3 = hilbert_polynomial(planted_three_solutions(37).ideal)
    assert h3.is_constant() and h3.constant() == 3


def test_hilbert_data_json_round_trip():
    hd = hilbert_polynomial(twisted_cubic())
    back = HilbertData.from_json(hd.dumps())
    assert back == hd
    assert set(hd.to_json()) == {"values", "fitted", "stable_from"}


def random_quadrics(R, count, rng):
    monos = list(monomials_of_degree(R.nvars, 2))
    out = []
    for _ in range(count):
        f = R.zero()
        for m in rng.sample(monos, 3):
            f = f + R.monomial(m, R.ring(rng.randint(1, R.ring.p - 1)))
        out.append(f)
    return out


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_partition_identity_and_monotonicity(seed):
    rng = random.Random(seed)
    R = PolyRing("x0 x1 x2 x3", GF(7))
    gens = random_quadrics(R, 3, rng)
    I2 = Ideal(gens[:2], R)
    I3 = Ideal(gens, R)
    for n in range(5):
        total = comb(n + 3, 3)
        assert hilbert_function(I3, n) + graded_piece_rank(I3, n) == total
        assert hilbert_function(I3, n) <= hilbert_function(I2, n)


def test_vanishing_forms_examples():
    F = GF(101)
    R = PolyRing("x y z", F)
    pts = [ProjPoint([F(1), F(2), F(3)]), ProjPoint([F(4), F(5), F(7)])]
    lines = vanishing_forms(pts, 1, ambient=R)
    assert len(lines) == 1 and check_vanishing(lines, pts)
    five = [ProjPoint([F(c) for c in v]) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3)]]
    conics = vanishing_forms(five, 2, ambient=R)
    assert len(conics) == 1 and check_vanishing(conics, five)


def test_vanishing_forms_recover_veronese_quadrics():
    I = veronese(7)
    pts = enumerate_points(I)
    forms = vanishing_forms(pts, 2, ambient=I.ambient)
    assert len(forms) == 6
    # same span as the 2x2 minors
    monos = list(monomials_of_degree(6, 2))
    rows = lambda fs: [[f.coefficient(m) for m in monos] for f in fs]
    F = I.ring
    assert rank(rows(forms), F) == 6 == rank(rows(forms) + rows(I.gens), F)


def test_weighted_forms_partition_counts():
    from fppkit.poly import CyclicAction
    from fppkit.vgeom import vanishing_forms_by_weight

    I = veronese(7)
    pts = enumerate_points(I)
    act = CyclicAction(7, (2, 3, 5, 4, 6, 1))
    by_w = vanishing_forms_by_weight(pts, 2, act, ambient=I.ambient)
    assert sum(len(v) for v in by_w.values()) == len(vanishing_forms(pts, 2, ambient=I.ambient))


def test_higher_order_vanishing_forms():
    F = GF(101)
    R = PolyRing("x y z", F)
    pt = ProjPoint([F(1), F(0), F(0)])
    # conics singular at (1:0:0): no x^2, x*y, x*z terms
    forms = vanishing_forms([pt], 2, order=2, ambient=R)
    assert len(forms) == 3 and check_vanishing(forms, [pt], order=2)


def test_sampling_examples():
    F = GF(43)
    R = PolyRing("x y", F)
    pts = sample_points(Ideal([R.parse("x^2 + 7*y^2")]), 2, seed=1)
    assert sorted(affine_last(p) for p in pts) == [[6, 1], [37, 1]]
    P2 = PolyRing("x y z", GF(7))
    pts = sample_points(Ideal([], P2), 3, seed=0)
    assert len(pts) == 3


def test_veronese_points_over_f7():
    I = veronese(7)
    pts = enumerate_points(I)
    # parameterization oracle: images of the 57 points of P^2(F_7)
    F = GF(7)
    images = set()
    for x, y, z in itertools.product(range(7), repeat=3):
        if (x, y, z) == (0, 0, 0):
            continue
        images.add(tuple(ProjPoint([F(v) for v in (x * x, x * y, x * z, y * y, y * z, z * z)]).values()))
    assert len(pts) == 57 == len(images)
    assert {tuple(p.values()) for p in pts} == images
    sample = sample_points(I, 10, seed=3)
    assert all(I.contains_point(p) for p in sample)


def test_singular_locus_examples():
    R = PolyRing("x y z", GF(101))
    node = singular_locus(Ideal([R.parse("x*y")]), 1)
    assert hilbert_polynomial(node).matches([1])
    double = singular_locus(Ideal([R.parse("x^2")]), 1)
    assert hilbert_polynomial(double).dimension == 1
    conic = singular_locus(Ideal([R.parse("x*z - y^2")]), 1)
    assert hilbert_polynomial(conic).matches([])


def cut_of(q):
    """Coefficients on (a..f) of the hyperplane dual to the symmetric matrix q."""
    return [q[0][0], 2 * q[0][1], 2 * q[0][2], q[1][1], 2 * q[1][2], q[2][2]]


def test_nonreduced_examples():
    I = veronese(7)
    R = I.ambient
    assert is_nonreduced_curve(I, R.parse("a"))
    assert not is_nonreduced_curve(I, R.parse("a + d + f"))
    assert not is_nonreduced_curve(I, R.parse("b"))


@settings(max_examples=30)
@given(st.sampled_from([5, 7]), st.lists(st.integers(0, 6), min_size=6, max_size=6))
def test_nonreduced_iff_rank_one(p, v):
    # the cut sum c_ij m_ij pulls back to the conic with symmetric matrix [[c0, c1/2, c2/2], ...]
    c = [x % p for x in v]
    if not any(c):
        return
    F = GF(p)
    h = F(2).inv()
    Q = [[F(c[0]), F(c[1]) * h, F(c[2]) * h], [F(c[1]) * h, F(c[3]), F(c[4]) * h], [F(c[2]) * h, F(c[4]) * h, F(c[5])]]
    I = veronese(p)
    assert is_nonreduced_curve(I, c) == (rank(Q, F) == 1)


def test_not_a_curve():
    P3 = PolyRing("x y z w", GF(7))
    I = Ideal([P3.parse("x*y")])
    with pytest.raises(NotACurve):
        is_nonreduced_curve(I, P3.parse("x"))


def test_jet_of_hyperplane():
    R = PolyRing("x y z w", QQ)
    I = Ideal([R.parse("w")])
    jet = jets_at_point(I, [1, 0, 0, 0], 2)
    s = jet.series
    assert s[0].coefficient((0, 0)) == 1 and s[3].terms == {}
    tangent = sorted((tuple(k for k in e), j) for j in range(4) for e in s[j].terms if sum(e) == 1)
    assert tangent == [((0, 1), 2), ((1, 0), 1)]


def test_jet_of_quadric_cone():
    R = PolyRing("x y z w", QQ)
    I = Ideal([R.parse("x*z - y^2")])
    jet = jets_at_point(I, [1, 0, 0, 0], 2)
    # along the jet z equals y^2 up to order 2
    from fppkit.vgeom.jets import compose

    diff = compose(R.parse("z - y^2"), jet.series)
    assert diff.valuation() is None


def test_jet_rejects_singular_point():
    R = PolyRing("x y z w", QQ)
    I = Ideal([R.parse("x*z - y^2")])
    with pytest.raises(SingularPoint):
        jets_at_point(I, [0, 0, 0, 1], 2)


@settings(max_examples=15)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 5), st.integers(1, 4))
def test_jets_satisfy_generators(x, y, z, k):
    I = veronese()
    pt = [x * x, x * y, x * z, y * y, y * z, z * z]
    jet = jets_at_point(I, pt, k)
    assert jet.residual_order(I) > k


def test_vanish_conditions_small_examples():
    R = PolyRing("x y z", QQ)
    curve = Ideal([R.parse("x*z - y^2")])
    jet = jets_at_point(curve, [1, 0, 0], 2, dim=1)
    lines = [R.parse("x"), R.parse("y"), R.parse("z")]
    assert vanish_to_order_conditions(lines, jet, 1).rank() == 1
    assert vanish_to_order_conditions(lines, jet, 2).rank() == 2


def test_groebner_example_and_sympy_oracle():
    R = PolyRing("x y", GF(7), "lex")
    G = groebner_basis([R.parse("x^2 - 1"), R.parse("x*y - 1")], "lex")
    strs = {str(g) for g in G.gens}
    assert strs == {"x + 6*y", "y^2 + 6"}
    x, y = sympy.symbols("x y")
    S = sympy.groebner([x**2 - 1, x * y - 1], x, y, order="lex", modulus=7)
    assert len(S.exprs) == len(G.gens)
    assert is_groebner_basis(G)


def test_groebner_fixpoint_and_principal():
    R = PolyRing("x y z", QQ)
    G = groebner_basis([R.parse("x^2 - y*z"), R.parse("x*y - z^2")])
    assert groebner_basis(G).gens == G.gens
    P = groebner_basis([R.parse("2*x^2 + 4*y*z")])
    assert [str(g) for g in P.gens] == ["x^2 + 2*y*z"]
    assert ideal_contains(G, R.parse("x^2 - y*z") * R.parse("x + y"))


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_groebner_agrees_with_sympy(seed):
    rng = random.Random(seed)
    R = PolyRing("x y z", GF(11))
    gens = random_quadrics(R, 2, rng)
    G = groebner_basis(gens)
    x, y, z = sympy.symbols("x y z")
    to_sym = lambda f: sum(int(c) * x ** e[0] * y ** e[1] * z ** e[2] for e, c in f.terms.items())
    S = sympy.groebner([to_sym(g) for g in gens], x, y, z, order="grevlex", modulus=11)
    canon = lambda e: tuple(sorted(sympy.Poly(e, x, y, z, modulus=11).monic().as_dict().items()))
    assert sorted(canon(to_sym(g)) for g in G.gens) == sorted(canon(e) for e in S.exprs)


def test_solve_zero_dim_examples():
    F = GF(7)
    R = PolyRing("x y z", F)
    sol = solve_zero_dim(Ideal([R.parse("x - 2*z"), R.parse("y - 3*z")]))
    assert [affine_last(p) for p in sol] == [[2, 3, 1]]
    S = PolyRing("x y", GF(43))
    sol = solve_zero_dim(Ideal([S.parse("x^2 + 7*y^2")]))
    assert sorted(affine_last(p) for p in sol) == [[6, 1], [37, 1]]
    planted = planted_three_solutions(37)
    sol = solve_zero_dim(planted.ideal)
    assert len(sol) == 3 == sol.hilbert_constant
    assert all(planted.ideal.contains_point(p) for p in sol)


def test_solve_zero_dim_rejects_curves():
    with pytest.raises(NotZeroDimensional):
        solve_zero_dim(twisted_cubic(7))


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_zero_dim_count_bounded_by_hilbert(seed):
    rng = random.Random(seed)
    R = PolyRing("x y z", GF(13))
    I = Ideal(random_quadrics(R, 2, rng), R)
    try:
        sol = solve_zero_dim(I)
    except NotZeroDimensional:
        return
    assert len(sol) <= sol.hilbert_constant
    assert all(I.contains_point(p) for p in sol)
    # exhaustive oracle over P^2(F_13)
    assert len(sol) == len(enumerate_points(I))
