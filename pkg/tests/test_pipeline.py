from fractions import Fraction

import pytest
import sympy

from fppkit.datasets import veronese
from fppkit.errors import StageError
from fppkit.pipeline import run_torsion_pipeline
from fppkit.poly import CyclicAction
from fppkit.search import InvariantCutPattern


def symmetric_matrix(cut):
    a, b, c, d, e, f = (sympy.Rational(str(x)) for x in cut)
    return sympy.Matrix([[a, b / 2, c / 2], [b / 2, d, e / 2], [c / 2, e / 2, f]])


@pytest.fixture(scope="module")
def report_p5():
    return run_torsion_pipeline(veronese(), 5, K=20)


def test_pipeline_finds_an_exact_square_cut(report_p5):
    rep = report_p5
    assert rep["status"] == "found" and rep["hits"] == 31 and rep["verified"]
    # independent check: the recognized cut is a rank-one conic over Q
    assert symmetric_matrix(rep["cut"]).rank() == 1
    # and it reduces mod 5 to a multiple of the selected search hit
    back = [Fraction(x).numerator * pow(Fraction(x).denominator, -1, 5) % 5 for x in rep["cut"]]
    sel = rep["selected"]["cut_mod_p"]
    assert all((u * y - v * x) % 5 == 0 for u, v in zip(back, sel) for x, y in zip(back, sel))


def test_pipeline_report_records_every_stage(report_p5):
    assert set(report_p5["timings"]) == {"reduce", "search", "sample", "lift"}
    assert report_p5["coordinate_change"] is None
    assert report_p5["lift_attempts"][-1]["result"] == "verified"


def test_pipeline_empty_hit_set():
    pat = InvariantCutPattern(((1,), (2,), (4,)), 6, 0)
    rep = run_torsion_pipeline(veronese(), 5, pattern=pat)
    assert rep["status"] == "no nonreduced cut" and rep["hits"] == 0


def test_pipeline_with_coordinate_change():
    from fppkit.ring import QQ

    act = CyclicAction.trivial(6)
    target = veronese().ambient.linear_form([QQ(1)] * 6)
    pat = InvariantCutPattern(((0, 3, 5), (1, 2, 4)), 6, 0)
    rep = run_torsion_pipeline(veronese(), 5, pattern=pat, K=20, action=act, target=target)
    assert rep["status"] == "found"
    M = sympy.Matrix([[sympy.Rational(x) for x in row] for row in rep["coordinate_change"]])
    assert M.det() != 0
    # M maps the target coefficients onto a multiple of the cut coefficients
    s = sympy.Matrix([sympy.Rational(x) for x in rep["cut"]])
    image = M * sympy.ones(6, 1)
    assert sympy.Matrix.hstack(image, s).rank() == 1


def test_stage_errors_name_the_stage():
    with pytest.raises(StageError) as ei:
        run_torsion_pipeline(veronese(), 9)
    assert ei.value.stage == "reduce"
