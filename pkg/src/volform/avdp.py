"""Volume-density toolkit: bracket identities, degree-bounded kernels,
semi-compatibility certificates, pointwise wedge-span tests, flow-Jacobian
checks, and the surface decomposition over the seven monomial families.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import Exponents, LaurentPoly, _grlex_key
from .calculus import (
    VectorField,
    VolumeForm,
    contract_volume,
    exterior_derivative,
    interior_product,
    is_tangent,
    lie_bracket,
    lnd_flow,
    scalar_form,
)
from .errors import (
    ChartError,
    DimensionError,
    NotTangentError,
    PointError,
    PreconditionError,
    ResourceLimitError,
)
from .linalg import SpanBuilder
from .variety import Chart, Point

FULL_RING = "FULL_RING"
IDEAL_WITNESS = "IDEAL_WITNESS"
UNKNOWN = "UNKNOWN"


# ------------------------------------------------------------ identities


def verify_bracket_identity(a: VectorField, b: VectorField, volume: VolumeForm) -> bool:
    """Exact check that contracting the bracket equals d of the double
    contraction.  Only asserted for divergence-free fields, so that is a
    checked precondition, reported distinctly from an identity failure."""
    from .calculus import divergence  # local to keep module import order simple

    for name, f in (("first", a), ("second", b)):
        if not divergence(f, volume).is_zero:
            raise PreconditionError(f"{name} field does not have divergence zero")
    lhs = contract_volume(lie_bracket(a, b), volume)
    rhs = exterior_derivative(interior_product(a, interior_product(b, volume)))
    return (lhs - rhs).is_zero


def bracket_potential(a: VectorField, b: VectorField, volume: VolumeForm) -> LaurentPoly:
    """On a surface the double contraction is a scalar potential of the
    bracket's contraction: d(result) = i_[a,b] omega."""
    on = a.chart
    if on.dimension != 2:
        raise DimensionError(f"chart has dimension {on.dimension}, expected 2")
    from .calculus import divergence

    for name, f in (("first", a), ("second", b)):
        if not divergence(f, volume).is_zero:
            raise PreconditionError(f"{name} field does not have divergence zero")
    result = interior_product(a, interior_product(b, volume))
    return result.coefficient(())


def verify_potential(f: LaurentPoly, xi: VectorField, volume: VolumeForm) -> bool:
    """True iff d(f) equals i_xi omega exactly (no sign search)."""
    on = xi.chart
    if on.dimension != 2:
        raise DimensionError(f"chart has dimension {on.dimension}, expected 2")
    lhs = exterior_derivative(scalar_form(on, f))
    return (lhs - contract_volume(xi, volume)).is_zero


# --------------------------------------------------------------- kernels


def monomials_up_to(on: Chart, degree_bound: int) -> list[LaurentPoly]:
    """All ambient monomials of total degree <= bound, degree-then-lex order."""
    n = len(on.coordinates)
    out: list[LaurentPoly] = []
    for total in range(degree_bound + 1):
        for exps in _compositions(total, n):
            out.append(LaurentPoly.monomial(on.coordinates, exps))
    return out


def _compositions(total: int, parts: int) -> Iterable[Exponents]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _span_builder() -> SpanBuilder:
    return SpanBuilder(key_order=_grlex_key)


def kernel_basis(xi: VectorField, degree_bound: int) -> list[LaurentPoly]:
    """Echelonized basis of {f : xi(f) = 0 on the chart} within the span of
    ambient monomials of total degree <= bound, all in normal form."""
    if not is_tangent(xi):
        raise NotTangentError("kernel computation needs a tangent field")
    on = xi.chart
    monomials = monomials_up_to(on, degree_bound)
    reduced = [on.normal_form(m) for m in monomials]
    images = [xi.apply(m) for m in monomials]

    image_span = _span_builder()
    members: list[LaurentPoly] = []
    for idx, w in enumerate(images):
        was_new, combo = image_span.insert(w.as_dict())
        if was_new:
            continue
        candidate = LaurentPoly.zero(on.coordinates)
        for j, c in enumerate(combo):
            if c:
                candidate = candidate + c * reduced[j]
        if not candidate.is_zero:
            members.append(candidate)

    basis_span = _span_builder()
    for f in members:
        basis_span.insert(f.as_dict())
    return [LaurentPoly.from_dict(on.coordinates, row) for row in basis_span.basis()]


# ----------------------------------------------------- semi-compatibility


@dataclass(frozen=True)
class SemicompatVerdict:
    """One-sided certificate for the span of a kernel product.

    FULL_RING: every monomial of degree <= bound lies in the span (witness 1).
    IDEAL_WITNESS: witness*f lies in the span for every bounded monomial f.
    UNKNOWN: no certificate found at this bound; never a negative result.
    """

    status: str
    witness: LaurentPoly | None
    degree_bound: int


def semicompat_bounded(
    a: VectorField, b: VectorField, degree_bound: int
) -> SemicompatVerdict:
    on = a.chart
    for f in (a, b):
        if not is_tangent(f):
            raise NotTangentError("semi-compatibility needs tangent fields")
    kernel_a = kernel_basis(a, degree_bound)
    kernel_b = kernel_basis(b, degree_bound)

    span = _span_builder()
    for f in kernel_a:
        for g in kernel_b:
            span.insert(on.normal_form(f * g).as_dict())

    monomials = [on.normal_form(m) for m in monomials_up_to(on, degree_bound)]
    if all(span.contains(m.as_dict()) for m in monomials):
        return SemicompatVerdict(FULL_RING, LaurentPoly.one(on.coordinates), degree_bound)

    for row in span.basis():
        candidate = LaurentPoly.from_dict(on.coordinates, row)
        if all(
            span.contains(on.normal_form(candidate * m).as_dict()) for m in monomials
        ):
            return SemicompatVerdict(IDEAL_WITNESS, candidate, degree_bound)

    return SemicompatVerdict(UNKNOWN, None, degree_bound)


# ------------------------------------------------------ pointwise wedges

WedgePair = tuple[VectorField, VectorField, LaurentPoly]


def spans_wedge_square(pairs: Sequence[WedgePair], point: Point) -> bool:
    """Strong pointwise test: do the witness-scaled wedges of the pairs span
    the full wedge square of the tangent space at the point?"""
    if not pairs:
        raise PreconditionError("no field pairs supplied")
    on = pairs[0][0].chart
    if point.chart != on:
        raise PointError("point does not belong to the fields' chart")
    free = on.free_coordinates
    n = len(free)
    target = n * (n - 1) // 2
    if target == 0:
        return True
    values = point.as_dict()
    span = SpanBuilder(key_order=lambda k: k)
    for a, b, witness in pairs:
        if a.chart != on or b.chart != on:
            raise ChartError("pair fields live on different charts")
        scale = on.normal_form(witness).evaluate(values)
        va = [a.free_components()[c].evaluate(values) for c in free]
        vb = [b.free_components()[c].evaluate(values) for c in free]
        vec = {}
        for i, j in itertools.combinations(range(n), 2):
            entry = scale * (va[i] * vb[j] - va[j] * vb[i])
            if entry:
                vec[(i, j)] = entry
        if vec:
            span.insert(vec)
        if span.rank == target:
            return True
    return span.rank == target


# -------------------------------------------------------- flow Jacobians


def verify_flow_jacobian(
    nu: VectorField,
    f: LaurentPoly,
    point: Point,
    bound: int = 32,
) -> bool:
    """Check the tangent map of the time-1 flow of f*nu at a zero of f.

    The expected Jacobian in the free-coordinate trivialization is
    identity + nu(point) * gradient(f at point)^T, exactly.
    """
    on = nu.chart
    if point.chart != on:
        raise PointError("point does not belong to the field's chart")
    if not nu.apply(f).is_zero:
        raise PreconditionError("f is not in the kernel of the field")
    values = point.as_dict()
    reduced_f = on.normal_form(f)
    if reduced_f.evaluate(values) != 0:
        raise PreconditionError("f does not vanish at the point")

    symbol = "_flow_t"
    flow = lnd_flow(f * nu, symbol, bound)
    at_one = {
        name: image.substitute(
            {symbol: LaurentPoly.one(image.variables)}
        ).drop_variables((symbol,))
        for name, image in flow.items()
    }

    free = on.free_coordinates
    jac = []
    for name in free:
        row_poly = on.normal_form(at_one[name])
        jac.append([row_poly.partial_derivative(c).evaluate(values) for c in free])

    v = [nu.free_components()[c].evaluate(values) for c in free]
    grad = [reduced_f.partial_derivative(c).evaluate(values) for c in free]
    for i in range(len(free)):
        for j in range(len(free)):
            expected = (Fraction(1) if i == j else Fraction(0)) + v[i] * grad[j]
            if jac[i][j] != expected:
                return False
    return True


# ------------------------------------------------- surface decomposition


@dataclass(frozen=True)
class SurfaceRoles:
    """Coordinate roles of a surface chart p(x) + q(y) + x*y*z = 1."""

    x: str
    y: str
    z: str
    p: LaurentPoly
    q: LaurentPoly


def surface_roles(on: Chart) -> SurfaceRoles:
    if len(on.coordinates) != 3 or len(on.relations) != 1:
        raise ChartError("not a surface chart: expected 3 coordinates, 1 relation")
    rel = on.relations[0]
    z = rel.solves
    x, y = (c for c in on.coordinates if c != z)
    poly = rel.poly
    xyz = LaurentPoly.variable(on.coordinates, x) * LaurentPoly.variable(
        on.coordinates, y
    ) * LaurentPoly.variable(on.coordinates, z)
    rest = poly - xyz
    if rest.degree_in(z) != 0 or poly.coefficient_in(z, 1) != (
        LaurentPoly.variable(on.coordinates, x) * LaurentPoly.variable(on.coordinates, y)
    ):
        raise ChartError("relation is not of the shape p(x) + q(y) + x*y*z - 1")
    p_part: dict[Exponents, Fraction] = {}
    q_part: dict[Exponents, Fraction] = {}
    constant = Fraction(0)
    ix = on.coordinates.index(x)
    iy = on.coordinates.index(y)
    for exps, coeff in rest.terms:
        if all(e == 0 for e in exps):
            constant += coeff
        elif exps[iy] == 0 and exps[ix] > 0:
            p_part[exps] = coeff
        elif exps[ix] == 0 and exps[iy] > 0:
            q_part[exps] = coeff
        else:
            raise ChartError("relation mixes x and y outside the x*y*z term")
    if constant != -1:
        raise ChartError("relation constant term must be -1")
    return SurfaceRoles(
        x,
        y,
        z,
        LaurentPoly.from_dict(on.coordinates, p_part),
        LaurentPoly.from_dict(on.coordinates, q_part),
    )


@dataclass(frozen=True)
class SurfaceDecomposition:
    """Unique expansion over {1, x^i, y^i, z^i, x^i y^j, x^i z^j, y^i z^j}."""

    constant: Fraction
    x_powers: tuple[tuple[int, Fraction], ...]
    y_powers: tuple[tuple[int, Fraction], ...]
    z_powers: tuple[tuple[int, Fraction], ...]
    xy: tuple[tuple[tuple[int, int], Fraction], ...]
    xz: tuple[tuple[tuple[int, int], Fraction], ...]
    yz: tuple[tuple[tuple[int, int], Fraction], ...]
    truncation: int

    def reconstruct(self, on: Chart) -> LaurentPoly:
        roles = surface_roles(on)
        x = LaurentPoly.variable(on.coordinates, roles.x)
        y = LaurentPoly.variable(on.coordinates, roles.y)
        z = LaurentPoly.variable(on.coordinates, roles.z)
        total = LaurentPoly.constant(on.coordinates, self.constant)
        for i, c in self.x_powers:
            total = total + c * x ** i
        for i, c in self.y_powers:
            total = total + c * y ** i
        for i, c in self.z_powers:
            total = total + c * z ** i
        for (i, j), c in self.xy:
            total = total + c * x ** i * y ** j
        for (i, j), c in self.xz:
            total = total + c * x ** i * z ** j
        for (i, j), c in self.yz:
            total = total + c * y ** i * z ** j
        return total


def surface_decompose(
    f: LaurentPoly, on: Chart, max_steps: int = 200_000
) -> SurfaceDecomposition:
    """Rewrite an ambient polynomial into the seven monomial families by
    repeatedly replacing x*y*z with 1 - p - q; the z-degree multiset strictly
    descends, so the loop terminates."""
    roles = surface_roles(on)
    on.validate_poly(f)
    for exps, _ in f.terms:
        if any(e < 0 for e in exps):
            raise ChartError("decomposition needs a polynomial without negative exponents")

    ix = on.coordinates.index(roles.x)
    iy = on.coordinates.index(roles.y)
    iz = on.coordinates.index(roles.z)
    replacement = (
        LaurentPoly.one(on.coordinates) - roles.p - roles.q
    )  # equals x*y*z on the surface

    terms = f.as_dict()
    steps = 0
    while True:
        mixed = [
            exps
            for exps in terms
            if exps[ix] >= 1 and exps[iy] >= 1 and exps[iz] >= 1
        ]
        if not mixed:
            break
        for exps in mixed:
            coeff = terms.pop(exps, None)
            if coeff is None:  # cancelled by an earlier substitution in this sweep
                continue
            lowered = list(exps)
            lowered[ix] -= 1
            lowered[iy] -= 1
            lowered[iz] -= 1
            stump = LaurentPoly.monomial(on.coordinates, tuple(lowered), coeff)
            for e2, c2 in (stump * replacement).terms:
                merged = terms.get(e2, Fraction(0)) + c2
                if merged:
                    terms[e2] = merged
                else:
                    terms.pop(e2, None)
            steps += 1
            if steps > max_steps:
                raise ResourceLimitError(
                    f"surface rewriting exceeded {max_steps} steps"
                )

    constant = Fraction(0)
    x_powers: dict[int, Fraction] = {}
    y_powers: dict[int, Fraction] = {}
    z_powers: dict[int, Fraction] = {}
    xy: dict[tuple[int, int], Fraction] = {}
    xz: dict[tuple[int, int], Fraction] = {}
    yz: dict[tuple[int, int], Fraction] = {}
    truncation = 0
    for exps, coeff in terms.items():
        i, j, k = exps[ix], exps[iy], exps[iz]
        truncation = max(truncation, i, j, k)
        if i == j == k == 0:
            constant += coeff
        elif j == 0 and k == 0:
            x_powers[i] = coeff
        elif i == 0 and k == 0:
            y_powers[j] = coeff
        elif i == 0 and j == 0:
            z_powers[k] = coeff
        elif k == 0:
            xy[(i, j)] = coeff
        elif j == 0:
            xz[(i, k)] = coeff
        else:
            yz[(j, k)] = coeff

    freeze = lambda d: tuple(sorted(d.items()))  # noqa: E731
    return SurfaceDecomposition(
        constant,
        freeze(x_powers),
        freeze(y_powers),
        freeze(z_powers),
        freeze(xy),
        freeze(xz),
        freeze(yz),
        truncation,
    )
