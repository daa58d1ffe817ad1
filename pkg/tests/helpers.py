"""Shared fixtures-by-function: standard charts and seeded random generators."""

from __future__ import annotations

import random
from fractions import Fraction

from volform import (
    Chart,
    DiffForm,
    LaurentPoly,
    VectorField,
    chart,
    diff_form,
    field_from_free,
    vector_field,
    volume_form,
)

XYZ = ("x", "y", "z")


def surface_chart(p: LaurentPoly | None = None, q: LaurentPoly | None = None) -> Chart:
    x, y, z = LaurentPoly.generators(XYZ)
    p = x if p is None else p
    q = y if q is None else q
    return chart(XYZ, invertible=("x", "y"), relations=[(p + q + x * y * z - 1, "z")])


def torus_chart(n: int) -> Chart:
    names = tuple(f"z{i}" for i in range(1, n + 1))
    return chart(names, invertible=names)


def sl2_chart() -> Chart:
    names = ("a1", "a2", "b1", "b2")
    rel = LaurentPoly.from_dict(
        names, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1, (0, 0, 0, 0): -1}
    )
    return chart(names, invertible=("a1",), relations=[(rel, "b2")])


def torus_volume(on: Chart):
    return volume_form(on, LaurentPoly.monomial(on.coordinates, tuple(-1 for _ in on.coordinates)))


def surface_volume(on: Chart):
    x = on.generator("x")
    y = on.generator("y")
    return volume_form(on, (x * y).unit_inverse())


def surface_fields(on: Chart) -> dict[str, VectorField]:
    from volform import surface_roles

    roles = surface_roles(on)
    x, y, z = (on.generator(n) for n in (roles.x, roles.y, roles.z))
    dp = roles.p.partial_derivative(roles.x)
    dq = roles.q.partial_derivative(roles.y)
    return {
        "dz": vector_field(on, {"x": dq + x * z, "y": -(dp + y * z)}),
        "dy": vector_field(on, {"x": -(x * y), "z": dp + y * z}),
        "dx": vector_field(on, {"y": -(x * y), "z": dq + x * z}),
    }


def random_coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([n for n in range(-5, 6) if n != 0]))


def random_poly(
    rng: random.Random,
    on: Chart,
    max_terms: int = 3,
    max_degree: int = 3,
    laurent: bool = True,
) -> LaurentPoly:
    """Sparse random polynomial; negative exponents only on invertible
    coordinates and only when ``laurent``."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = []
        for name in on.coordinates:
            lo = -max_degree if (laurent and name in on.invertible) else 0
            exps.append(rng.randint(lo, max_degree))
        terms[tuple(exps)] = random_coeff(rng)
    return LaurentPoly.from_dict(on.coordinates, terms)


def random_tangent_field(rng: random.Random, on: Chart, max_degree: int = 2) -> VectorField:
    free = {
        name: random_poly(rng, on, max_terms=2, max_degree=max_degree)
        for name in on.free_coordinates
        if rng.random() < 0.9
    }
    return field_from_free(on, free)


def random_form(rng: random.Random, on: Chart, degree: int, max_degree: int = 2) -> DiffForm:
    import itertools

    keys = list(itertools.combinations(on.free_coordinates, degree))
    rng.shuffle(keys)
    chosen = keys[: rng.randint(1, len(keys))] if keys else []
    return diff_form(
        on,
        degree,
        {key: random_poly(rng, on, max_terms=2, max_degree=max_degree) for key in chosen},
    )
