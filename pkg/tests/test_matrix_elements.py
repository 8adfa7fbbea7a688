from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from confjord.foundation import MalformedInput, ZSeries, derivative
from confjord.matrix_family.elements import (MatElement, canonicalize_over_V, component_by_weight, expand_over_V,
                                             parse_element, partial_action, weight, yplus_components, yplus_matrix)

U = MatElement.unit
s_, t_ = sympy.symbols("s t")


def as_function(e: MatElement):
    """u(m, n) <-> s^(-m-1) t^(-n-1), one scalar function per matrix entry."""
    out = {}
    for (m1, m2, i, j), c in e.items():
        out[(i, j)] = out.get((i, j), 0) + sympy.Rational(c) * s_ ** (-m1 - 1) * t_ ** (-m2 - 1)
    return out


def partial_oracle(e: MatElement):
    return {key: sympy.expand(-(sympy.diff(f, s_) + sympy.diff(f, t_))) for key, f in as_function(e).items()}


def same(f, g):
    keys = set(f) | set(g)
    return all(sympy.simplify(f.get(k, 0) - g.get(k, 0)) == 0 for k in keys)


def test_partial_examples():
    assert partial_action(U(2, 1, 1, 0, 0)) == U(2, 1, 1, 1, 0) + U(2, 1, 1, 0, 1)
    twice = partial_action(partial_action(U(2, 1, 1, 0, 0)))
    assert twice == U(2, 1, 1, 2, 0) * 2 + U(2, 1, 1, 1, 1) * 2 + U(2, 1, 1, 0, 2) * 2
    assert not partial_action(MatElement(2))


elements = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(1, 2), st.integers(1, 2)),
    st.integers(-3, 3), max_size=5).map(lambda d: MatElement(2, d))


@settings(max_examples=60)
@given(elements)
def test_partial_matches_symbolic_oracle(e):
    assert same(as_function(partial_action(e)), partial_oracle(e))


def test_yplus_examples():
    u, v = {(1, 2): 1}, {(2, 1): 1}
    a = MatElement.from_matrix(u)
    b = MatElement.from_matrix(v)
    # (uv - vu)(0,0) z^-1
    assert yplus_matrix(a, b) == ZSeries({-1: U(2, 1, 1) - U(2, 2, 2)})
    # u(0,0), v(1,0): (uv)(1,0) z^-1 + (uv)(0,0) z^-2 - (vu)(1,0) z^-1
    b1 = MatElement.from_matrix(v, 1, 0)
    y = yplus_matrix(a, b1)
    assert y[-1] == U(2, 1, 1, 1, 0) - U(2, 2, 2, 1, 0)
    assert y[-2] == U(2, 1, 1, 0, 0)
    # u(0,1), v(0,1): z^-2 coefficient -(uv + vu)(0,1)
    y = yplus_matrix(MatElement.from_matrix(u, 0, 1), MatElement.from_matrix(v, 0, 1))
    assert y[-2] == -(U(2, 1, 1, 0, 1) + U(2, 2, 2, 0, 1))


def test_yplus_zero_and_mismatch():
    assert not yplus_matrix(MatElement(2), U(2, 1, 1))
    assert not yplus_components(U(2, 1, 1), MatElement(2))
    with pytest.raises(MalformedInput):
        yplus_matrix(U(2, 1, 1), U(3, 1, 1))


@settings(max_examples=40)
@given(elements, elements)
def test_translation_covariance(a, b):
    ya = yplus_matrix(a, b)
    assert yplus_matrix(partial_action(a), b) == derivative(ya)
    assert ya.map(partial_action) - yplus_matrix(a, partial_action(b)) == derivative(ya)


def test_weights():
    assert weight(U(2, 1, 1, 0, 1)) == 2
    with pytest.raises(MalformedInput):
        weight(U(2, 1, 1, 0, 1) + U(2, 1, 1, 0, 0))


def test_component_by_weight_grading():
    u, v = U(2, 1, 2, 0, 1), U(2, 2, 1, 1, 0)
    out = component_by_weight(u, 0)(v)
    assert out and out.weight() == 2
    assert not component_by_weight(u, -2)(v)


def test_canonical_form_examples():
    c = canonicalize_over_V(U(2, 1, 1, 0, 3))
    assert dict(c) == {(0, (1, 1, 3)): 1}
    c = canonicalize_over_V(U(2, 1, 1, 1, 0))
    assert dict(c) == {(1, (1, 1, 0)): 1, (0, (1, 1, 1)): -1}


def test_canonical_form_of_u20():
    # u(2,0) = (d^2 u(0,0) - remainder)/2, checked by expanding forward
    x = U(2, 1, 2, 2, 0)
    c = canonicalize_over_V(x)
    assert c[(2, (1, 2, 0))] == Fraction(1, 2)
    assert expand_over_V(c, 2) == x


@settings(max_examples=60)
@given(elements)
def test_canonical_form_roundtrip(e):
    assert expand_over_V(canonicalize_over_V(e), 2) == e


def test_parse_element():
    assert parse_element("E12:0,1", 2) == U(2, 1, 2, 0, 1)
    assert parse_element("sym-E12:0,1", 2) == U(2, 1, 2, 0, 1) + U(2, 2, 1, 0, 1)
    assert parse_element("1/2*skew-E12:1,0 + E11:0,0", 2) == (U(2, 1, 2, 1, 0) - U(2, 2, 1, 1, 0)) / 2 + U(2, 1, 1)
    assert parse_element("E10_3:0,0", 12) == U(12, 10, 3)
    for bad in ("E13:0,0", "F12:0,0", "E12:0", "E123:0,0"):
        with pytest.raises(MalformedInput):
            parse_element(bad, 2)


def test_json_roundtrip():
    e = U(2, 1, 2, 0, 1) * Fraction(3, 2) + U(2, 2, 2, 3, 0)
    assert MatElement.from_json(e.to_json()) == e
