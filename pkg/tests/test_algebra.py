"""Laurent polynomial arithmetic: frozen examples, ring laws, sympy cross-checks."""

import random
from fractions import Fraction

import pytest
import sympy

from volform import LaurentPoly
from volform.errors import (
    EvaluationError,
    NotAUnitError,
    UnknownVariableError,
    VariableMismatchError,
)

from helpers import random_poly, surface_chart, torus_chart
from oracles import poly_to_sympy, sympy_equal

XY = ("x", "y")


def gens(*names):
    return LaurentPoly.generators(names)


def test_product_difference_of_squares():
    x, y = gens(*XY)
    assert (x + y) * (x - y) == x ** 2 - y ** 2


def test_unit_cancellation():
    x, y = gens(*XY)
    assert x ** -1 * x == LaurentPoly.one(XY)


def test_surface_defining_combination():
    x, y = gens(*XY)
    assert 1 - x - y == LaurentPoly.from_dict(XY, {(0, 0): 1, (1, 0): -1, (0, 1): -1})


def test_zero_terms_are_dropped():
    x, y = gens(*XY)
    assert (x - x).is_zero
    assert (x * 0).is_zero
    assert not (x + y).is_zero


def test_canonical_order_is_graded_lex():
    x, y = gens(*XY)
    p = 1 + y + x + x * y
    assert [e for e, _ in p.terms] == [(1, 1), (1, 0), (0, 1), (0, 0)]


def test_partial_derivative_power_rule():
    x, y = gens(*XY)
    assert (x ** 2 * y).partial_derivative("x") == 2 * x * y
    assert (x ** -1).partial_derivative("x") == -(x ** -2)
    assert (1 - x - y).partial_derivative("y") == LaurentPoly.constant(XY, -1)


def test_partial_derivative_unknown_variable():
    x, _ = gens(*XY)
    with pytest.raises(UnknownVariableError):
        x.partial_derivative("t")


def test_substitute_negation_pair():
    x, y = gens(*XY)
    assert (x * y).substitute({"x": -x, "y": -y}) == x * y


def test_substitute_to_zero():
    x, y = gens(*XY)
    z2 = y ** 2
    assert z2.substitute({"y": LaurentPoly.zero(XY)}).is_zero


def test_substitute_unit_scaling():
    x, y = gens(*XY)
    result = (x ** -1).substitute({"x": 2 * x})
    assert result == Fraction(1, 2) * x ** -1
    # derived check: evaluate both sides at sample points
    for value in (1, 2, -3, Fraction(5, 7)):
        assert result.evaluate({"x": value, "y": 1}) == Fraction(1) / (2 * Fraction(value))


def test_substitute_negative_power_of_non_unit_rejected():
    x, y = gens(*XY)
    with pytest.raises(NotAUnitError):
        (x ** -1).substitute({"x": x + y})


def test_evaluate_examples():
    x, y = gens(*XY)
    assert (x + y).evaluate({"x": 1, "y": 2}) == 3
    assert (x ** -1 * y).evaluate({"x": 2, "y": 4}) == 2
    assert (1 - x - y).evaluate({"x": 1, "y": 1}) == -1


def test_evaluate_zero_at_negative_power():
    x, _ = gens(*XY)
    with pytest.raises(EvaluationError):
        (x ** -1).evaluate({"x": 0, "y": 3})


def test_evaluate_missing_assignment():
    x, y = gens(*XY)
    with pytest.raises(UnknownVariableError):
        (x * y).evaluate({"x": 1})


def test_variable_list_mismatch():
    x, _ = gens(*XY)
    other = LaurentPoly.variable(("x", "y", "z"), "x")
    with pytest.raises(VariableMismatchError):
        x + other


def test_division_by_unit_and_scalar():
    x, y = gens(*XY)
    assert (x * y) / x == y
    assert (2 * x) / 2 == x
    with pytest.raises(NotAUnitError):
        x / (x + y)


@pytest.mark.parametrize("chart_maker", [lambda: torus_chart(2), surface_chart])
def test_ring_axioms_on_random_inputs(chart_maker):
    on = chart_maker()
    rng = random.Random(101)
    for _ in range(120):
        p = random_poly(rng, on)
        q = random_poly(rng, on)
        r = random_poly(rng, on)
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r


def test_leibniz_rule_on_random_inputs():
    on = surface_chart()
    rng = random.Random(102)
    for _ in range(120):
        p = random_poly(rng, on)
        q = random_poly(rng, on)
        name = rng.choice(on.coordinates)
        lhs = (p * q).partial_derivative(name)
        rhs = p * q.partial_derivative(name) + q * p.partial_derivative(name)
        assert lhs == rhs


def test_substitute_is_ring_homomorphism():
    on = torus_chart(2)
    rng = random.Random(103)
    z1, z2 = on.generators()
    images = {"z1": z1 * z2, "z2": z2 ** -1}
    for _ in range(60):
        p = random_poly(rng, on)
        q = random_poly(rng, on)
        assert (p + q).substitute(images) == p.substitute(images) + q.substitute(images)
        assert (p * q).substitute(images) == p.substitute(images) * q.substitute(images)


def test_evaluate_after_substitute_composes():
    on = torus_chart(2)
    rng = random.Random(104)
    z1, z2 = on.generators()
    images = {"z1": 2 * z1, "z2": z1 * z2}
    for _ in range(40):
        p = random_poly(rng, on)
        point = {"z1": Fraction(3), "z2": Fraction(-2)}
        composed = {
            name: images.get(name, on.generator(name)).evaluate(point)
            for name in on.coordinates
        }
        assert p.substitute(images).evaluate(point) == p.evaluate(composed)


def test_against_sympy_on_random_instances():
    on = surface_chart()
    rng = random.Random(105)
    symbols = sympy.symbols(on.coordinates)
    for _ in range(40):
        p = random_poly(rng, on)
        q = random_poly(rng, on)
        assert sympy_equal(p * q, poly_to_sympy(p) * poly_to_sympy(q))
        assert sympy_equal(p + q, poly_to_sympy(p) + poly_to_sympy(q))
        name = rng.choice(on.coordinates)
        sym = symbols[on.coordinates.index(name)]
        assert sympy_equal(p.partial_derivative(name), sympy.diff(poly_to_sympy(p), sym))


def test_rename_and_extend_variables():
    x, y = gens(*XY)
    p = x ** 2 * y - 3
    renamed = p.rename_variables({"x": "u"})
    assert renamed.variables == ("u", "y")
    extended = p.extend_variables(("t", "x", "y"))
    assert extended.variables == ("t", "x", "y")
    assert extended.evaluate({"t": 9, "x": 2, "y": 1}) == p.evaluate({"x": 2, "y": 1})
    back = extended.drop_variables(("t",))
    assert back == p


def test_string_form_is_stable():
    x, y = gens(*XY)
    assert str(x ** 2 - Fraction(1, 2) * y ** -1) == "x**2 - 1/2*y**-1"
    assert str(LaurentPoly.zero(XY)) == "0"
