from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from confjord.conformal_kernel.axioms import check_on_generators, check_translation, run_axiom_suite
from confjord.fermionic_fock import (MINUS, PLUS, UNIT, FockConformalAlgebra, FockElement, HatElement, QuadGen,
                                     StraighteningError, _component_closed, _component_series, apply_mode,
                                     apply_word, check_action_identities, check_component_paths, check_unit_ideal,
                                     component_as_printed, oracle_compare, pairing, partial_hat, quad_state,
                                     quadratic_component, straighten, yplus_hat)
from confjord.foundation import MalformedInput
from confjord.matrix_family.elements import MatElement, yplus_matrix

VAC = FockElement.vacuum()
P1, M1, P2, M2 = (PLUS, 1), (MINUS, 1), (PLUS, 2), (MINUS, 2)


def test_apply_mode_examples():
    # h(1/2) kills the vacuum
    assert not apply_mode(P1, 0, VAC)
    # s+_1(1/2) s-_1(-1/2) 1 = 1
    assert apply_mode(P1, 0, apply_mode(M1, -1, VAC)) == VAC
    # equal creation modes square to zero
    assert not apply_mode(P1, -1, apply_mode(P1, -1, VAC))


def test_canonical_order_and_sign():
    a = apply_word([(P1, -1), (M1, -2)], VAC)
    b = apply_word([(M1, -2), (P1, -1)], VAC)
    assert a == -b
    (key, c), = a.items()
    assert key == ((-2, MINUS, 1), (-1, PLUS, 1)) and c == -1


def test_pairing_is_symmetric_and_isotropic():
    assert pairing(P1, M1) == pairing(M1, P1) == 1
    assert pairing(P1, M2) == 0
    assert pairing(P1, P1) == pairing(M1, M1) == 0


factors = st.tuples(st.sampled_from([P1, M1, P2, M2]), st.integers(-3, 2))


@settings(max_examples=80)
@given(st.lists(factors, max_size=4), factors, factors)
def test_anticommutation_relation(word, f, g):
    x = apply_word([(h, -abs(e) - 1) for h, e in word], VAC)
    (h, p), (h2, q) = f, g
    lhs = apply_word([(h, p), (h2, q)], x) + apply_word([(h2, q), (h, p)], x)
    assert lhs == x * (pairing(h, h2) * (p + q + 1 == 0))


def test_action_identities():
    rep = check_action_identities(rank=2, max_mode=1)
    assert rep.passed and rep.checks_run > 500


def test_contraction_identity_sign_instance():
    # h2(-m) h1(n) (h3(-j) h4(-k)) = <h1,h4> h3(-j) h2(-m) when n = k
    state = apply_word([(P2, -2), (M1, -1)], VAC)
    got = apply_word([(M2, -3), (P1, 0)], state)
    assert got == apply_word([(P2, -2), (M2, -3)], VAC)


def test_matrix_unit_law():
    for a, b, c, d in product((1, 2), repeat=4):
        s = quad_state(QuadGen(c, d, 1, 1))
        got = apply_word([((PLUS, a), -2), ((MINUS, b), 1)], s)
        assert got == (quad_state(QuadGen(a, d, 1, 1)) if b == c else VAC.zero())


def test_component_paths_agree():
    rep = check_component_paths(rank=2, max_mn=1, max_c=3)
    assert rep.passed


def test_printed_closed_form_double_counts_vacuum_term():
    # s+_1(-1/2) s-_1(-1/2) acting by its component 1 on itself: the full
    # contraction is <h1,h4><h2,h3> 1 = 1, the as-printed double sum gives 2.
    g = QuadGen(1, 1, 0, 0)
    s = quad_state(g)
    assert _component_series(g, 1, s) == VAC
    assert _component_closed(g, 1, s) == VAC
    assert component_as_printed(g, 1, s) == VAC * 2


def test_printed_closed_form_misses_creation_pairs():
    g = QuadGen(1, 1, 0, 0)
    # component -1 creates s+_1(-1/2) s-_1(-1/2) from the vacuum
    assert _component_series(g, -1, VAC) == quad_state(g)
    assert not component_as_printed(g, -1, VAC)


def test_translation_of_components():
    g = QuadGen(1, 2, 1, 0)
    dg = partial_hat(HatElement.gen(g))
    s = quad_state(QuadGen(2, 1, 0, 2))
    for c in range(-3, 5):
        lhs = sum((quadratic_component(x, c)(s) * coef for x, coef in dg.items()), VAC.zero())
        assert lhs == quadratic_component(g, c - 1)(s) * (-c)


def test_partial_hat():
    assert not partial_hat(HatElement.gen(UNIT))
    d = partial_hat(HatElement.gen(QuadGen(1, 2, 0, 0)))
    assert d == HatElement({QuadGen(1, 2, 1, 0): 1, QuadGen(1, 2, 0, 1): 1})


def test_unit_ideal():
    assert check_unit_ideal(rank=2, max_mode=2).passed


def test_yplus_hat_examples():
    assert not yplus_hat(UNIT, QuadGen(1, 1, 0, 0))
    y = yplus_hat(QuadGen(1, 2, 0, 0), QuadGen(2, 1, 0, 0))
    assert y[-2] == HatElement.gen(UNIT)
    assert y[-1] == HatElement({QuadGen(1, 1, 0, 0): 1, QuadGen(2, 2, 0, 0): -1})


def test_vacuum_term_exactly_when_indices_pair_off():
    for j1, j2, j3, j4 in product((1, 2), repeat=4):
        y = yplus_hat(QuadGen(j1, j2, 1, 0), QuadGen(j3, j4, 0, 1))
        has_unit = any(x.unit_part() for _, x in y.items())
        assert has_unit == (j1 == j4 and j2 == j3)


def test_straighten_rejects_non_quadratic():
    with pytest.raises(StraighteningError):
        straighten(apply_word([(P1, -1), (P2, -1)], VAC))


def test_oracle_examples():
    # no contraction with the vacuum possible
    rep = oracle_compare(1, 2, 2, 2, 0, 0, 0, 0, r=2)
    assert rep.passed and not rep.details["unit_terms"]
    # j1 = j4, j2 = j3: extra multiple of 1, equal modulo span{1}
    rep = oracle_compare(1, 2, 2, 1, 0, 0, 0, 0, r=2)
    assert rep.passed and rep.details["unit_terms"]
    # zero overlap: both sides vanish
    rep = oracle_compare(1, 1, 2, 2, 1, 0, 0, 1, r=2)
    assert rep.passed and rep.checks_run == 0
    assert not yplus_matrix(MatElement.unit(2, 1, 1, 1, 0), MatElement.unit(2, 2, 2, 0, 1))
    with pytest.raises(MalformedInput):
        oracle_compare(1, 3, 1, 1, 0, 0, 0, 0, r=2)


def test_oracle_scalars_are_one():
    for j in product((1, 2), repeat=4):
        rep = oracle_compare(*j, 1, 1, 1, 0, r=2)
        assert rep.passed
        assert {s["scalar"] for s in rep.details["scalars"]} <= {"1"}


def test_fock_conformal_axioms():
    alg = FockConformalAlgebra(rank=1, max_mode=1)
    assert check_translation(alg, 1).passed
    assert run_axiom_suite(alg, 1).passed
    assert check_on_generators(alg, depth=1, max_triples=60).passed


def test_fock_json_roundtrip():
    x = apply_word([(P1, -2), (M2, -1)], VAC) * 3 + VAC
    doc = x.to_json()
    assert FockElement.from_json(doc) == x
    factors = [f for term in doc for f in term["factors"]]
    assert {f["mode"] for f in factors} == {"-3/2", "-1/2"}
