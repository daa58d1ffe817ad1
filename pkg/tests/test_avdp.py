"""Bracket identities, kernels, semi-compatibility, wedge spans, flows,
and the surface decomposition, cross-checked against brute-force oracles."""

import random
from fractions import Fraction

import pytest

from volform import (
    FULL_RING,
    IDEAL_WITNESS,
    UNKNOWN,
    LaurentPoly,
    bracket_potential,
    contract_volume,
    exterior_derivative,
    forms_equal,
    kernel_basis,
    lie_bracket,
    lie_derivative,
    monomials_up_to,
    sample_point,
    scalar_form,
    semicompat_bounded,
    spans_wedge_square,
    surface_decompose,
    surface_roles,
    vector_field,
    verify_bracket_identity,
    verify_flow_jacobian,
    verify_potential,
)
from volform.avdp import SurfaceDecomposition
from volform.errors import ChartError, DimensionError, PreconditionError
from volform.linalg import SpanBuilder
from volform.algebra import _grlex_key

from helpers import (
    random_poly,
    sl2_chart,
    surface_chart,
    surface_fields,
    surface_volume,
    torus_chart,
    torus_volume,
)
from oracles import brute_force_kernel, row_space_contains


def sl2_pair():
    on = sl2_chart()
    b1, b2 = on.generator("b1"), on.generator("b2")
    a1, a2 = on.generator("a1"), on.generator("a2")
    xi = vector_field(on, {"a1": b1, "a2": b2})
    eta = vector_field(on, {"b1": a1, "b2": a2})
    return on, xi, eta


# ----------------------------------------------------------- identity (1)


def test_bracket_identity_on_surface_pairs():
    on = surface_chart()
    w = surface_volume(on)
    fields = surface_fields(on)
    assert verify_bracket_identity(fields["dz"], fields["dy"], w)
    assert verify_bracket_identity(fields["dz"], fields["dx"], w)
    assert verify_bracket_identity(fields["dy"], fields["dx"], w)


def test_bracket_identity_same_field_trivial():
    on, xi, _ = sl2_pair()
    from volform import volume_form

    w = volume_form(on, on.generator("a1").unit_inverse())
    assert verify_bracket_identity(xi, xi, w)


def test_bracket_identity_commuting_torus_fields():
    on = torus_chart(2)
    w = torus_volume(on)
    nu1 = vector_field(on, {"z1": on.generator("z1")})
    nu2 = vector_field(on, {"z2": on.generator("z2")})
    assert lie_bracket(nu1, nu2).is_zero
    assert verify_bracket_identity(nu1, nu2, w)


def test_bracket_identity_checks_divergence_precondition():
    on = torus_chart(1)
    w = torus_volume(on)
    z1 = on.generator("z1")
    bad = vector_field(on, {"z1": z1 ** 2})  # divergence z1
    good = vector_field(on, {"z1": z1})
    with pytest.raises(PreconditionError):
        verify_bracket_identity(bad, good, w)


# ---------------------------------------------------------------- kernels


def test_kernel_of_surface_fields_are_coordinate_polynomials():
    on = surface_chart()
    fields = surface_fields(on)
    span_gens = {"dz": "z", "dy": "y", "dx": "x"}
    for name, coordinate in span_gens.items():
        basis = kernel_basis(fields[name], 4)
        assert len(basis) == 5
        builder = SpanBuilder(key_order=_grlex_key)
        for member in basis:
            builder.insert(member.as_dict())
        g = on.generator(coordinate)
        for k in range(5):
            assert builder.contains(on.normal_form(g ** k).as_dict())


def test_kernel_matches_brute_force_oracle():
    on = surface_chart()
    fields = surface_fields(on)
    for name in ("dz", "dy", "dx"):
        basis = kernel_basis(fields[name], 4)
        dimension, functions, columns = brute_force_kernel(fields[name], on, 4)
        assert len(basis) == dimension
        # every computed basis member lies in the oracle's row space
        for member in basis:
            assert set(e for e, _ in member.terms) <= set(columns)
            vec = [dict(member.terms).get(c, Fraction(0)) for c in columns]
            assert row_space_contains(functions, vec)


def test_kernel_of_sl2_shear_contains_its_kernel_coordinates():
    on, xi, _ = sl2_pair()
    basis = kernel_basis(xi, 1)
    builder = SpanBuilder(key_order=_grlex_key)
    for member in basis:
        builder.insert(member.as_dict())
    assert builder.contains(on.generator("b1").as_dict())
    assert builder.contains(on.normal_form(on.generator("b2")).as_dict())


def test_kernel_dimension_tracks_the_bound():
    # the kernel stays the polynomials in z at higher truncations too
    on = surface_chart()
    fields = surface_fields(on)
    for bound in (2, 5, 6):
        assert len(kernel_basis(fields["dz"], bound)) == bound + 1


def test_kernel_members_are_normal_forms_killed_by_the_field():
    on = surface_chart()
    fields = surface_fields(on)
    for name in ("dz", "dy", "dx"):
        for member in kernel_basis(fields[name], 3):
            assert on.normal_form(member) == member
            assert fields[name].apply(member).is_zero


def test_kernel_of_zero_field_is_whole_truncated_ring():
    on = torus_chart(2)
    zero = vector_field(on, {})
    basis = kernel_basis(zero, 2)
    assert len(basis) == len(monomials_up_to(on, 2))


# ----------------------------------------------------- semi-compatibility


def test_semicompat_sl2_pair_is_full_ring():
    _, xi, eta = sl2_pair()
    verdict = semicompat_bounded(xi, eta, 2)
    assert verdict.status == FULL_RING
    assert verdict.witness == LaurentPoly.one(xi.chart.coordinates)
    # monotone: stays FULL_RING at a higher bound
    assert semicompat_bounded(xi, eta, 3).status == FULL_RING


def test_semicompat_self_pair_is_unknown():
    _, xi, _ = sl2_pair()
    verdict = semicompat_bounded(xi, xi, 2)
    assert verdict.status == UNKNOWN
    assert verdict.witness is None


def test_semicompat_torus_trivial():
    on = torus_chart(2)
    nu1 = vector_field(on, {"z1": on.generator("z1")})
    nu2 = vector_field(on, {"z2": on.generator("z2")})
    assert semicompat_bounded(nu1, nu2, 0).status == FULL_RING


def test_semicompat_ideal_witness_on_sl2_like_chart():
    # x*v - y*u = 1 with the two polynomial shears; v's normal form has a
    # 1/x denominator, so the certificate is an ideal witness rather than 1
    names = ("x", "y", "u", "v")
    x, y, u, v = LaurentPoly.generators(names)
    from volform import chart

    on = chart(names, invertible=("x",), relations=[(x * v - y * u - 1, "v")])
    nu_y = vector_field(on, {"y": x, "v": u})
    nu_u = vector_field(on, {"u": x, "v": y})
    verdict = semicompat_bounded(nu_y, nu_u, 1)
    assert verdict.status == IDEAL_WITNESS
    assert verdict.witness == x


# --------------------------------------------------------- wedge spanning


def test_wedge_span_on_torus():
    for n in (2, 3):
        on = torus_chart(n)
        one = LaurentPoly.one(on.coordinates)
        gens = {name: on.generator(name) for name in on.coordinates}
        pairs = []
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                nu_i = vector_field(on, {f"z{i}": gens[f"z{i}"]})
                nu_j = vector_field(on, {f"z{j}": gens[f"z{j}"]})
                pairs.append((gens[f"z{j}"] * nu_i, gens[f"z{i}"] * nu_j, one))
        for seed in range(20):
            assert spans_wedge_square(pairs, sample_point(on, seed))


def test_wedge_span_rejects_foreign_points():
    on = torus_chart(2)
    other = surface_chart()
    nu1 = vector_field(on, {"z1": on.generator("z1")})
    nu2 = vector_field(on, {"z2": on.generator("z2")})
    one = LaurentPoly.one(on.coordinates)
    from volform.errors import PointError

    with pytest.raises(PointError):
        spans_wedge_square([(nu1, nu2, one)], sample_point(other, 0))


def test_wedge_span_fails_with_zero_witnesses():
    on = torus_chart(2)
    zero = LaurentPoly.zero(on.coordinates)
    nu1 = vector_field(on, {"z1": on.generator("z1")})
    nu2 = vector_field(on, {"z2": on.generator("z2")})
    assert not spans_wedge_square([(nu1, nu2, zero)], sample_point(on, 3))


def test_wedge_span_on_surface_at_generic_point():
    on = surface_chart()
    fields = surface_fields(on)
    one = LaurentPoly.one(on.coordinates)
    point = sample_point(on, 0)
    # generic: the single pair wedge is x*y*(p' + y*z), nonzero unless y = 1
    assert point["y"] != 1
    assert spans_wedge_square([(fields["dz"], fields["dy"], one)], point)


# ---------------------------------------------------------- flow Jacobian


def test_flow_jacobian_on_sl2():
    on, xi, _ = sl2_pair()
    point = on.point({"a1": 1, "a2": 1, "b1": 0, "b2": 1})
    assert verify_flow_jacobian(xi, on.generator("b1"), point, 8)


def test_flow_jacobian_zero_function_gives_identity():
    on, xi, _ = sl2_pair()
    point = on.point({"a1": 1, "a2": 1, "b1": 0, "b2": 1})
    assert verify_flow_jacobian(xi, LaurentPoly.zero(on.coordinates), point, 8)


def test_flow_jacobian_preconditions():
    on, xi, _ = sl2_pair()
    point = on.point({"a1": 1, "a2": 0, "b1": 5, "b2": 1})
    with pytest.raises(PreconditionError):
        verify_flow_jacobian(xi, on.generator("b1"), point, 8)  # b1 != 0 there
    with pytest.raises(PreconditionError):
        verify_flow_jacobian(xi, on.generator("a1"), point, 8)  # a1 not in kernel


# -------------------------------------------------- surface decomposition


def test_decompose_z_squared():
    on = surface_chart()
    z = on.generator("z")
    d = surface_decompose(z ** 2, on)
    assert d.z_powers == ((2, Fraction(1)),)
    assert d.constant == 0 and not d.x_powers and not d.xy


def test_decompose_xyz():
    on = surface_chart()
    x, y, z = on.generators()
    d = surface_decompose(x * y * z, on)
    assert d.constant == 1
    assert d.x_powers == ((1, Fraction(-1)),)
    assert d.y_powers == ((1, Fraction(-1)),)
    assert not d.z_powers and not d.xy and not d.xz and not d.yz


def test_decompose_roundtrip_on_random_coefficients():
    on = surface_chart()
    rng = random.Random(55)
    for _ in range(50):
        def draw_powers():
            return tuple(
                sorted((i, Fraction(rng.randint(-4, 4))) for i in
                       rng.sample(range(1, 5), rng.randint(0, 2)))
            )

        def draw_grid():
            cells = set()
            while len(cells) < rng.randint(0, 2):
                cells.add((rng.randint(1, 4), rng.randint(1, 4)))
            return tuple(sorted((c, Fraction(rng.randint(-4, 4))) for c in cells))

        dec = SurfaceDecomposition(
            constant=Fraction(rng.randint(-3, 3)),
            x_powers=draw_powers(),
            y_powers=draw_powers(),
            z_powers=draw_powers(),
            xy=draw_grid(),
            xz=draw_grid(),
            yz=draw_grid(),
            truncation=4,
        )
        rebuilt = surface_decompose(dec.reconstruct(on), on)
        assert _strip(rebuilt) == _strip(dec)
        # reconstruction agrees with the input modulo the relation
        assert (
            on.normal_form(rebuilt.reconstruct(on)) == on.normal_form(dec.reconstruct(on))
        )


def _strip(d: SurfaceDecomposition):
    def clean(entries):
        return tuple((k, c) for k, c in entries if c != 0)

    return (
        d.constant,
        clean(d.x_powers),
        clean(d.y_powers),
        clean(d.z_powers),
        clean(d.xy),
        clean(d.xz),
        clean(d.yz),
    )


def test_decompose_terminates_with_degree_raising_substitutions():
    # with deg p = 4 each rewrite grows total degree, but the z-degree
    # multiset still descends; the result must agree modulo the relation
    x, y, z = LaurentPoly.generators(("x", "y", "z"))
    on = surface_chart(p=x ** 4, q=y)
    f = (x * y * z) ** 2 + x * y * z ** 3
    dec = surface_decompose(f, on)
    assert on.normal_form(dec.reconstruct(on)) == on.normal_form(f)
    for (i, j), _ in dec.xy + dec.xz:
        assert i >= 1 and j >= 1


def test_decomposition_families_are_independent_modulo_the_relation():
    # uniqueness: a decomposition with any nonzero entry cannot represent 0,
    # and the all-zero decomposition represents exactly 0
    on = surface_chart()
    rng = random.Random(57)
    zero = SurfaceDecomposition(Fraction(0), (), (), (), (), (), (), 0)
    assert zero.reconstruct(on).is_zero
    for _ in range(30):
        slot = rng.randint(0, 6)
        entries = [Fraction(0), (), (), (), (), (), ()]
        value = Fraction(rng.choice([n for n in range(-4, 5) if n]))
        if slot == 0:
            entries[0] = value
        elif slot <= 3:
            entries[slot] = ((rng.randint(1, 4), value),)
        else:
            entries[slot] = (((rng.randint(1, 4), rng.randint(1, 4)), value),)
        dec = SurfaceDecomposition(*entries, truncation=4)
        assert not on.normal_form(dec.reconstruct(on)).is_zero


def test_decompose_rejects_laurent_input():
    on = surface_chart()
    x = on.generator("x")
    with pytest.raises(ChartError):
        surface_decompose(x ** -1, on)


def test_surface_roles_detection():
    on = surface_chart()
    roles = surface_roles(on)
    assert (roles.x, roles.y, roles.z) == ("x", "y", "z")
    assert roles.p == on.generator("x")
    with pytest.raises(ChartError):
        surface_roles(sl2_chart())


# ------------------------------------------------------ surface potential


def test_bracket_potential_value_and_exactness():
    on = surface_chart()
    w = surface_volume(on)
    fields = surface_fields(on)
    value = bracket_potential(fields["dz"], fields["dy"], w)
    y, z = on.generator("y"), on.generator("z")
    assert value == on.normal_form(1 + y * z)
    assert forms_equal(
        exterior_derivative(scalar_form(on, value)),
        contract_volume(lie_bracket(fields["dz"], fields["dy"]), w),
    )


def test_bracket_potential_same_field_is_zero():
    on = surface_chart()
    w = surface_volume(on)
    fields = surface_fields(on)
    assert bracket_potential(fields["dz"], fields["dz"], w).is_zero


def test_bracket_potential_of_scaled_fields_has_monomial_lead():
    on = surface_chart()
    w = surface_volume(on)
    fields = surface_fields(on)
    y, z = on.generator("y"), on.generator("z")
    for i, j in ((1, 1), (1, 2), (2, 1)):
        zi = on.normal_form(z ** i)
        yj = on.normal_form(y ** j)
        value = bracket_potential(zi * fields["dz"], yj * fields["dy"], w)
        # re-expand in the seven families: the top cell is y^(j+1) z^(i+1)
        dec = surface_decompose((z ** i * (1 + y * z) * y ** j), on)
        cells = dict(dec.yz)
        assert cells.get((j + 1, i + 1)) not in (None, 0)
        assert value == on.normal_form(z ** i * (1 + y * z) * y ** j)
        assert max(a + b for (a, b) in cells) == i + j + 2


def test_bracket_potential_requires_surface():
    on, xi, eta = sl2_pair()
    from volform import volume_form

    w = volume_form(on, on.generator("a1").unit_inverse())
    with pytest.raises(DimensionError):
        bracket_potential(xi, eta, w)


def test_verify_potential_examples():
    on = surface_chart()
    w = surface_volume(on)
    fields = surface_fields(on)
    x, y, z = on.generators()
    assert verify_potential(-z, fields["dz"], w)
    assert not verify_potential(z, fields["dz"], w)
    assert not verify_potential(z ** 2, fields["dz"], w)
    assert verify_potential(-y, fields["dy"], w)
    assert verify_potential(x, fields["dx"], w)
    zero = vector_field(on, {})
    assert verify_potential(LaurentPoly.zero(on.coordinates), zero, w)


def test_accepted_potentials_lie_in_the_kernel():
    # whenever d f = i_xi omega, the field must kill f
    on = surface_chart()
    w = surface_volume(on)
    fields = surface_fields(on)
    x, y, z = on.generators()
    for f, xi in ((-z, fields["dz"]), (-y, fields["dy"]), (x, fields["dx"])):
        assert verify_potential(f, xi, w)
        assert xi.apply(f).is_zero
        assert lie_derivative(xi, scalar_form(on, f)).is_zero


def test_divergence_of_kernel_scaled_fields_is_application():
    rng = random.Random(56)
    cases = []
    torus = torus_chart(2)
    cases.append((torus, torus_volume(torus),
                  [vector_field(torus, {n: torus.generator(n)}) for n in torus.coordinates]))
    surf = surface_chart()
    cases.append((surf, surface_volume(surf), list(surface_fields(surf).values())))
    from volform import divergence

    for on, w, generators in cases:
        for _ in range(50):
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in generators]
            nu = vector_field(on, {})
            for c, g in zip(coeffs, generators):
                nu = nu + c * g
            assert divergence(nu, w).is_zero
            f = random_poly(rng, on, max_terms=2, max_degree=2)
            assert divergence(f * nu, w) == nu.apply(f)
