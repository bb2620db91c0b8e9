import pytest

from fppkit.constants import H0_NH, h0_closed_form
from fppkit.datasets import (
    NAMES,
    cube_root_system,
    load,
    planted_jet_example,
    planted_three_solutions,
    resolve_input,
    twisted_cubic,
    veronese,
)
from fppkit.ring import GF, QuadraticField
from fppkit.search import ansatz_invariant_form, verify_solution
from fppkit.vgeom import jets_at_point, vanish_to_order_conditions
from oracles import jet_condition_rank, weight_zero_quadric_monomials


def test_table_values_match_closed_form():
    assert sorted(H0_NH) == list(range(4, 13))
    assert [H0_NH[n] for n in range(4, 13)] == [3, 6, 10, 15, 21, 28, 36, 45, 55]
    assert all(h0_closed_form(n) == H0_NH[n] for n in H0_NH)


def test_bundled_ideals_load():
    assert veronese().nvars == 6 and len(veronese().gens) == 6
    assert twisted_cubic().nvars == 4 and len(twisted_cubic().gens) == 3
    assert veronese(7).ring == GF(7)
    for name in NAMES:
        assert load(name).gens


def test_planted_solutions_are_exact_zeros():
    ps = planted_three_solutions()
    assert ps.d == -7 and len(ps.solutions) == 3
    assert all(verify_solution(ps.ideal, v) for v in ps.solutions)
    assert ps.ideal.ring == QuadraticField(-7)


def test_cube_root_system_has_one_field_solution():
    K = QuadraticField(-7)
    I = cube_root_system()
    assert verify_solution(I, [K(1), K.parse("(1 + r)/2"), K(0)])
    assert not verify_solution(I, [K(1), K(1), K(0)])


def test_resolve_input(tmp_path):
    I, text = resolve_input("veronese")
    assert "ring QQ" in text and I.nvars == 6
    path = tmp_path / "line.poly"
    path.write_text("ring GF(7) vars x y\nx - 2*y\n")
    J, _ = resolve_input(str(path))
    assert J.ring == GF(7)
    with pytest.raises(FileNotFoundError):
        resolve_input(str(tmp_path / "nothing"))


def test_jet_example_against_power_series_oracle():
    ex = planted_jet_example()
    fam = ansatz_invariant_form(ex.action, ex.degree, ex.weight, ambient=ex.surface.ambient)
    monos = weight_zero_quadric_monomials(ex.action.weights, ex.action.order)
    assert sorted(tuple(e) for f in fam.basis for e in f.terms) == sorted(monos)
    jet = jets_at_point(ex.surface, ex.point, ex.order - 1)
    cons = vanish_to_order_conditions(fam.basis, jet, ex.order)
    assert cons.rank() == jet_condition_rank(monos, ex.order) == ex.nparams - ex.remaining


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_jet_conditions_on_all_quadrics(order):
    from fppkit.poly import CyclicAction

    ex = planted_jet_example()
    triv = CyclicAction.trivial(6)
    fam = ansatz_invariant_form(triv, 2, 0, ambient=ex.surface.ambient)
    monos = [next(iter(f.terms)) for f in fam.basis]
    jet = jets_at_point(ex.surface, ex.point, max(order - 1, 1))
    assert vanish_to_order_conditions(fam.basis, jet, order).rank() == jet_condition_rank(monos, order)
