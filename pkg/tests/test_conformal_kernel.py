import json
from fractions import Fraction

import pytest

from confjord.conformal_kernel.affine import (KAPPA, AffineSl, ModeVector, Virasoro, WindowError, affinize,
                                              check_delta_identity, check_loop_recovery, delta_coefficient,
                                              loop_reference, witt_reference)
from confjord.conformal_kernel.algebra import (ConformalElement, NotALieAlgebra, PatchedAlgebra, abelian,
                                               builtin_mutants, components, dump_algebra, from_lie_algebra,
                                               load_algebra, make_sl2_current, make_witt, mutate, sl_n_data,
                                               sl2_structure_constants)
from confjord.conformal_kernel.axioms import (check_jacobi, check_on_generators, check_skew, check_translation,
                                              check_weight_grading, jacobi_lhs, jacobi_rhs_components,
                                              run_axiom_suite, skew_rhs_components, skew_rhs_residue)
from confjord.foundation import MalformedInput, ZSeries

g = ConformalElement.gen
E = g("e")


def test_witt_product():
    y = make_witt().product(E, E)
    assert y == ZSeries({-1: g("e", 1), -2: g("e", 0, 2)})


def test_witt_shifted_first_argument():
    # Y+(de, z) e = d/dz Y+(e, z) e
    y = make_witt().product(g("e", 1), E)
    assert y == ZSeries({-2: g("e", 1, -1), -3: g("e", 0, -4)})


def test_witt_shifted_second_argument():
    # a_n(db) = d(a_n b) + n a_(n-1) b gives d^2e, 3de, 4e
    y = make_witt().product(E, g("e", 1))
    assert components(y) == {0: g("e", 2), 1: g("e", 1, 3), 2: g("e", 0, 4)}


def test_unshifted_product_is_raw_table():
    w = make_witt()
    assert w.product(E, E) == w.raw_product("e", "e")


def test_sl2_current_product():
    sl2 = make_sl2_current()
    assert sl2.product(g("e"), g("f")) == ZSeries({-1: g("h")})


def test_abelian_products_vanish():
    a = abelian(["x", "y"])
    assert not a.product(g("x"), g("y"))


def test_from_lie_algebra_rejects_non_lie():
    with pytest.raises(NotALieAlgebra):
        from_lie_algebra(["a", "b"], {("a", "b"): {"a": 1}})


def test_sl_n_trace_form_and_brackets():
    names, sc, form, mats = sl_n_data(2)
    assert form[("H1", "H1")] == 2
    assert sc[("E12", "E21")] == {"H1": 1}
    names3, sc3, form3, _ = sl_n_data(3)
    assert len(names3) == 8
    assert sc3[("E12", "E23")] == {"E13": 1}


def test_translation_passes_on_witt_and_sl2():
    assert check_translation(make_witt(), 3).passed
    assert check_translation(make_sl2_current(), 3).passed


def test_translation_fault_has_witness():
    w = make_witt()
    bad = ZSeries({-1: g("e", 1), -2: g("e", 0, 3)})
    patched = PatchedAlgebra(w, E, E, bad)
    rep = check_translation(patched, 1)
    assert not rep.passed
    assert all(f["inputs"]["a"] in (E.to_json(), g("e", 1).to_json()) for f in rep.failures)
    assert any(f["inputs"]["a"] == E.to_json() and f["inputs"]["b"] == E.to_json() for f in rep.failures)


def test_skew_witt_residue_path():
    w = make_witt()
    assert skew_rhs_residue(w, E, E) == w.product(E, E)
    assert check_skew(w, E, E).passed


def test_skew_reduces_to_antisymmetry_for_currents():
    sl2 = make_sl2_current()
    for a in sl2.generators():
        for b in sl2.generators():
            assert skew_rhs_components(sl2, a, b) == components(sl2.product(a, b))


def test_skew_vacuous_for_zero_map():
    a = abelian(["x"])
    assert check_skew(a, g("x"), g("x")).passed


def test_jacobi_witt_all_components():
    w = make_witt()
    rep = check_jacobi(w, E, E, E)
    assert rep.passed and rep.checks_run > 10


def test_jacobi_with_central_generator_is_zero():
    alg = from_lie_algebra(["e", "f", "h", "c"], dict(sl2_structure_constants()[1]))
    c = g("c")
    lhs = jacobi_lhs(alg, c, g("e"), g("f"))
    assert not any(lhs.values())
    assert not any(jacobi_rhs_components(alg, c, g("e"), g("f"), lhs.keys()).values())


def test_mutants_fail_at_both_levels():
    for name, alg in builtin_mutants().items():
        rep = check_on_generators(alg, depth=2)
        assert rep.details["generator_verdict"] == "fail", name
        assert rep.details["extended_verdict"] == "fail", name
        assert rep.details["verdicts_agree"]


def test_witt_e1_mutant_witness():
    alg = builtin_mutants()["witt-e1"]
    rep = check_skew(alg, E, E)
    assert not rep.passed


def test_suite_passes_on_witt_and_sl2():
    for alg in (make_witt(), make_sl2_current()):
        assert run_axiom_suite(alg, 3).passed
        rep = check_on_generators(alg, depth=3)
        assert rep.passed and rep.details["verdicts_agree"]


def test_mutate_keeps_translation():
    m = mutate(make_witt(), "e", "e", 1, g("e", 0, 3))
    assert check_translation(m, 2).passed


def test_grading():
    rep = check_weight_grading(make_witt(), 8)
    assert rep.passed and rep.details["N0"] == 1
    rep = check_weight_grading(abelian([]), 8)
    assert rep.passed


def test_affinize_witt_and_loop():
    assert check_loop_recovery(make_witt(), 6, witt_reference).passed
    assert check_loop_recovery(make_sl2_current(), 6, loop_reference(sl2_structure_constants()[1])).passed
    table = affinize(make_witt(), 6)
    assert table.bracket("e", 2, "e", -3) == ModeVector({("e", -1): 5})


def test_affinize_abelian_is_zero():
    table = affinize(abelian(["x", "y"]), 3)
    assert all(not v for v in table.brackets.values())


def test_affinize_window():
    table = affinize(make_witt(), 2)
    with pytest.raises(WindowError):
        table.bracket("e", 5, "e", 0)
    with pytest.raises(MalformedInput):
        affinize(make_witt(), -1)


def test_delta_kappa_values():
    assert delta_coefficient(AffineSl(2), 4, 1, -1, "H1", "H1")[KAPPA] == 2
    assert delta_coefficient(Virasoro(), 4, 2, -2)[KAPPA] == Fraction(1, 2)
    assert delta_coefficient(Virasoro(), 4, 1, -1)[KAPPA] == 0


def test_delta_identities_and_sign():
    for case in (AffineSl(2), AffineSl(3), Virasoro()):
        rep = check_delta_identity(case, 3)
        assert rep.passed
        assert rep.details["reconciling_kappa_sign"] == [-1]


def test_algebra_json_roundtrip():
    w = make_witt()
    again = load_algebra(dump_algebra(w))
    assert again.product(E, E) == w.product(E, E)
    assert again.weights == {"e": 2}
    with pytest.raises(MalformedInput):
        load_algebra("{not json")
    with pytest.raises(MalformedInput):
        load_algebra(json.dumps({"basis": ["a"], "components": [{"u": "a", "v": "b", "n": 0, "terms": []}]}))
