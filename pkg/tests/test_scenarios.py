"""Built-in scenarios: every expected record executes, products behave."""

import pytest

from volform import (
    LaurentPoly,
    RunFlags,
    action,
    chart,
    execute,
    forms_equal,
    is_invariant,
    lie_bracket,
    product,
    rename_scenario,
    scenario_by_name,
    sl2,
    surface,
    torus,
    vector_field,
    volume_form,
    xm1,
)
from volform.errors import ChartError

XYZ = ("x", "y", "z")


def xvar():
    return LaurentPoly.variable(XYZ, "x")


def yvar():
    return LaurentPoly.variable(XYZ, "y")


def run_all(scenario):
    records = execute(scenario, RunFlags())
    for record, directive in zip(records, scenario.checks):
        assert record.status == directive.expect, (
            f"{scenario.name}: {record.name} -> {record.status} ({record.detail})"
        )
    return records


@pytest.mark.parametrize(
    "maker",
    [
        lambda: torus(1),
        lambda: torus(2),
        lambda: torus(3),
        sl2,
        lambda: surface(xvar(), yvar()),
        lambda: surface(xvar() ** 2, yvar() ** 3),
        lambda: xm1(1),
        lambda: xm1(2),
        lambda: xm1(3),
        lambda: product(surface(xvar(), yvar()), torus(1)),
        lambda: product(sl2(), torus(1)),
    ],
)
def test_all_expected_records_pass(maker):
    run_all(maker())


def test_torus_requires_positive_dimension():
    with pytest.raises(ChartError):
        torus(0)


def test_xm1_requires_positive_exponent():
    with pytest.raises(ChartError):
        xm1(0)


def test_xm1_one_has_no_primitive_form():
    assert "tau" not in xm1(1).forms
    assert "tau" in xm1(2).forms


def test_surface_rejects_nonzero_constant_terms():
    with pytest.raises(ChartError):
        surface(xvar() + 1, yvar())


def test_product_of_tori_matches_bigger_torus_up_to_renaming():
    prod = product(torus(1), torus(1))
    assert prod.chart.coordinates == ("z1", "z1_2")
    renamed = rename_scenario(prod, {"z1_2": "z2"})
    reference = torus(2)
    assert renamed.chart == reference.chart
    assert renamed.volume == reference.volume
    for name in ("nu1",):
        assert renamed.fields[name] == reference.fields[name]
    assert renamed.fields["nu1_2"] == reference.fields["nu2"]


def test_product_is_associative_up_to_renaming():
    a, b, c = torus(1), sl2(), xm1(2)
    left = product(product(a, b), c)
    right = product(a, product(b, c))
    assert left.chart == right.chart
    assert left.volume == right.volume
    assert left.fields == right.fields
    assert left.polys == right.polys
    assert set(left.actions) == set(right.actions)


def test_product_lifted_fields_commute():
    prod = product(sl2(), torus(1))
    bracket = lie_bracket(prod.fields["xi"], prod.fields["nu1"])
    assert bracket.is_zero


def test_product_diagonal_action_invariants():
    prod = product(surface(xvar(), yvar()), torus(1))
    assert "swap_xy*negate" in prod.actions
    diag = prod.actions["swap_xy*negate"]
    # the torus scaling field lifts to an invariant field
    assert is_invariant(prod.fields["nu1"], diag)
    # the anti-invariant surface shear becomes invariant after scaling by z1
    assert "z1dz" in prod.fields
    assert is_invariant(prod.fields["z1dz"], diag)
    # same mechanism for the volume form
    assert "z1w" in prod.forms
    assert is_invariant(prod.forms["z1w"], diag)
    # and the unscaled objects are genuinely anti-invariant, not invariant
    assert not is_invariant(prod.fields["dz"], diag)
    assert not is_invariant(prod.volume, diag)


def test_quadric_surface_times_torus_spot_check():
    # u*v = x^2 - 1 with all coordinates negated, times a negated torus factor
    names = ("u", "v", "x")
    u, v, x = LaurentPoly.generators(names)
    quadric = chart(names, invertible=("u",), relations=[(u * v - x ** 2 + 1, "v")])
    w1 = volume_form(quadric, u.unit_inverse())
    xi_u = vector_field(quadric, {"x": u, "v": 2 * x})
    xi_v = vector_field(quadric, {"x": v, "u": 2 * x})
    from volform import Model, divergence, is_tangent

    assert is_tangent(xi_u) and is_tangent(xi_v)
    assert divergence(xi_u, w1).is_zero and divergence(xi_v, w1).is_zero
    base = Model(
        name="quadric",
        chart=quadric,
        volume=w1,
        volume_name="w",
        fields={"xi_u": xi_u, "xi_v": xi_v},
        actions={
            "negate": action(quadric, "negate", {"u": -u, "v": -v, "x": -x}, 2)
        },
    )
    prod = product(base, torus(1))
    diag = prod.actions["negate*negate"]
    for name in ("xi_u", "xi_v", "nu1"):
        assert is_invariant(prod.fields[name], diag)


def test_scenario_addresses():
    assert scenario_by_name("torus:2").name == "torus:2"
    assert scenario_by_name("sl2").name == "sl2"
    s = scenario_by_name("surface:p=x**2,q=y**3")
    assert s.chart.coordinates == ("x", "y", "z")
    assert scenario_by_name("xm1:2").forms
    prod = scenario_by_name("product:torus:1|torus:1")
    assert len(prod.chart.coordinates) == 2
    with pytest.raises(ChartError):
        scenario_by_name("nonsense")
    with pytest.raises(ChartError):
        scenario_by_name("torus:x")
    with pytest.raises(ChartError):
        scenario_by_name("surface:p=x")


def test_exactness_field_contraction_is_exact():
    from volform import (contract_volume, exactness_field, exterior_derivative,
                         forms_equal, interior_product)
    from volform.errors import PreconditionError

    for n in (2, 3):
        s = torus(n)
        nu1, nu2 = s.fields["nu1"], s.fields["nu2"]
        # nu = nu2(f) * nu1 needs f in Ker nu1; a function of z2 alone works
        f = s.chart.generator("z2") ** 3
        scaled = exactness_field(nu2, nu1, f)
        assert scaled.coefficients == (3 * f * nu1).coefficients
        primitive = interior_product(nu2, interior_product(f * nu1, s.volume))
        assert forms_equal(
            contract_volume(scaled, s.volume), exterior_derivative(primitive)
        )
        with pytest.raises(PreconditionError):
            exactness_field(nu2, nu1, s.chart.generator("z1"))  # not in Ker nu1


def test_volume_coefficients_are_nonzero_at_sampled_points():
    from volform import sample_point

    for maker in (lambda: torus(2), sl2, lambda: surface(xvar(), yvar()), lambda: xm1(2)):
        s = maker()
        coeff = s.volume.unit_coefficient()
        for seed in range(5):
            point = sample_point(s.chart, seed)
            assert coeff.evaluate(point.as_dict()) != 0


def test_torus_contraction_forms_match_up_to_sign():
    from volform import contract_volume

    s = torus(3)
    for i in (1, 2, 3):
        got = contract_volume(s.fields[f"nu{i}"], s.volume)
        expected = s.forms[f"w_without_{i}"]
        assert forms_equal(got, expected) or forms_equal(got, -expected)
