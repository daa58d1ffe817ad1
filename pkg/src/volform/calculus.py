"""Exterior calculus on a chart: fields, forms, d, wedge, contraction, flows.

Forms live in the free coordinates only; differentials of solvable
coordinates are eliminated through the defining relations, so coefficient
maps over sorted free-coordinate index sets are canonical and form equality
is structural.  The contraction convention inserts the field in the first
slot; the exterior derivative is d(f dx_I) = sum_j df/dx_j dx_j ^ dx_I.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .algebra import LaurentPoly, Scalar
from .errors import (
    ChartError,
    DimensionError,
    NilpotencyError,
    NotTangentError,
    VariableMismatchError,
    VolumeFormError,
)
from .variety import (
    Chart,
    SubstitutionAction,
    poly_matrix_inverse,
    substitution_jacobian,
)

FormKey = tuple[str, ...]


@dataclass(frozen=True)
class VectorField:
    """Derivation in ambient presentation: one coefficient per coordinate."""

    chart: Chart
    coefficients: tuple[tuple[str, LaurentPoly], ...]

    def coefficient(self, name: str) -> LaurentPoly:
        for key, value in self.coefficients:
            if key == name:
                return value
        raise ChartError(f"no coefficient for coordinate {name!r}")

    def as_dict(self) -> dict[str, LaurentPoly]:
        return dict(self.coefficients)

    def free_components(self) -> dict[str, LaurentPoly]:
        d = self.as_dict()
        return {name: d[name] for name in self.chart.free_coordinates}

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for _, c in self.coefficients)

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        """xi(f) = sum coeff_i * df/dx_i, in normal form."""
        self.chart.validate_poly(f)
        total = LaurentPoly.zero(self.chart.coordinates)
        for name, coeff in self.coefficients:
            if coeff.is_zero:
                continue
            total = total + coeff * f.partial_derivative(name)
        return self.chart.normal_form(total)

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_chart(self, other)
        o = other.as_dict()
        return vector_field(
            self.chart, {name: coeff + o[name] for name, coeff in self.coefficients}
        )

    def __neg__(self) -> "VectorField":
        return vector_field(self.chart, {n: -c for n, c in self.coefficients})

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __rmul__(self, factor: Union[LaurentPoly, Scalar]) -> "VectorField":
        f = self.chart.poly(factor)
        return vector_field(self.chart, {n: f * c for n, c in self.coefficients})

    __mul__ = __rmul__


def vector_field(on: Chart, coefficients: Mapping[str, LaurentPoly | Scalar]) -> VectorField:
    """Build a field from (possibly partial) coordinate coefficients."""
    extra = set(coefficients) - set(on.coordinates)
    if extra:
        raise ChartError(f"coefficients for unknown coordinates: {sorted(extra)}")
    entries = []
    for name in on.coordinates:
        value = coefficients.get(name, 0)
        entries.append((name, on.normal_form(on.poly(value))))
    return VectorField(on, tuple(entries))


def field_from_free(on: Chart, free: Mapping[str, LaurentPoly | Scalar]) -> VectorField:
    """Tangential completion: free components are arbitrary, solvable
    components are forced by the relations."""
    extra = set(free) - set(on.free_coordinates)
    if extra:
        raise ChartError(f"not free coordinates: {sorted(extra)}")
    comps: dict[str, LaurentPoly] = {
        name: on.poly(free.get(name, 0)) for name in on.free_coordinates
    }
    pending = list(on.relations)
    for _ in range(len(pending) + 1):
        if not pending:
            break
        progressed = []
        for rel in pending:
            needed = rel.poly.support() - {rel.solves} - set(comps)
            if needed:
                progressed.append(rel)
                continue
            a = rel.poly.coefficient_in(rel.solves, 1)
            drift = LaurentPoly.zero(on.coordinates)
            for name in rel.poly.support():
                if name == rel.solves:
                    continue
                drift = drift + comps[name] * rel.poly.partial_derivative(name)
            comps[rel.solves] = -(a.unit_inverse()) * drift
        if len(progressed) == len(pending):
            raise ChartError("relations are not triangular for tangential completion")
        pending = progressed
    return vector_field(on, comps)


def is_tangent(field: VectorField, on: Chart | None = None) -> bool:
    """True iff the field maps each defining polynomial into the ideal."""
    target = on or field.chart
    if target is not field.chart and target != field.chart:
        raise ChartError("field lives on a different chart")
    return all(field.apply(rel.poly).is_zero for rel in field.chart.relations)


def _require_tangent(field: VectorField) -> None:
    if not is_tangent(field):
        raise NotTangentError("vector field is not tangent to the chart")


def _same_chart(a, b) -> None:
    if a.chart != b.chart:
        raise VariableMismatchError("objects live on different charts")


# ----------------------------------------------------------------- forms


@dataclass(frozen=True)
class DiffForm:
    """Degree-k form as a map from sorted free-coordinate subsets to scalars."""

    chart: Chart
    degree: int
    coefficients: tuple[tuple[FormKey, LaurentPoly], ...]

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, key: Iterable[str]) -> LaurentPoly:
        target = tuple(key)
        for k, v in self.coefficients:
            if k == target:
                return v
        return LaurentPoly.zero(self.chart.coordinates)

    def as_dict(self) -> dict[FormKey, LaurentPoly]:
        return dict(self.coefficients)

    def __add__(self, other: "DiffForm") -> "DiffForm":
        _same_chart(self, other)
        if self.degree != other.degree and not (self.is_zero or other.is_zero):
            raise DimensionError(
                f"cannot add forms of degree {self.degree} and {other.degree}"
            )
        out: dict[FormKey, LaurentPoly] = dict(self.coefficients)
        for k, v in other.coefficients:
            out[k] = out.get(k, LaurentPoly.zero(self.chart.coordinates)) + v
        degree = other.degree if self.is_zero else self.degree
        return diff_form(self.chart, degree, out)

    def __neg__(self) -> "DiffForm":
        return DiffForm(
            self.chart, self.degree, tuple((k, -v) for k, v in self.coefficients)
        )

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def __rmul__(self, factor: Union[LaurentPoly, Scalar]) -> "DiffForm":
        f = self.chart.poly(factor)
        return diff_form(
            self.chart, self.degree, {k: f * v for k, v in self.coefficients}
        )

    __mul__ = __rmul__


def forms_equal(a: DiffForm, b: DiffForm) -> bool:
    """Structural equality that ignores the zero form's recorded degree and
    the DiffForm/VolumeForm class split."""
    if a.is_zero and b.is_zero:
        return True
    return a.degree == b.degree and a.coefficients == b.coefficients


def _canonical_key(on: Chart, names: Iterable[str]) -> tuple[FormKey, int] | None:
    order = {name: i for i, name in enumerate(on.free_coordinates)}
    seq = list(names)
    for name in seq:
        if name not in order:
            raise ChartError(f"{name!r} is not a free coordinate of the chart")
    if len(set(seq)) != len(seq):
        return None
    sign = 1
    indexed = [order[name] for name in seq]
    # insertion sort, counting swaps for the permutation sign
    for i in range(1, len(indexed)):
        j = i
        while j > 0 and indexed[j - 1] > indexed[j]:
            indexed[j - 1], indexed[j] = indexed[j], indexed[j - 1]
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return tuple(seq), sign


def diff_form(
    on: Chart,
    degree: int,
    coefficients: Mapping[Iterable[str], LaurentPoly | Scalar] | None = None,
) -> DiffForm:
    if degree < 0:
        return DiffForm(on, 0, ())
    out: dict[FormKey, LaurentPoly] = {}
    for raw_key, value in (coefficients or {}).items():
        key = (raw_key,) if isinstance(raw_key, str) else tuple(raw_key)
        if len(key) != degree:
            raise DimensionError(f"key {key} does not match degree {degree}")
        canon = _canonical_key(on, key)
        if canon is None:
            continue
        skey, sign = canon
        poly = on.normal_form(on.poly(value)) * sign
        if skey in out:
            out[skey] = out[skey] + poly
        else:
            out[skey] = poly
    entries = [(k, v) for k, v in out.items() if not v.is_zero]
    entries.sort(key=lambda kv: kv[0])
    return DiffForm(on, degree, tuple(entries))


def scalar_form(on: Chart, value: LaurentPoly | Scalar) -> DiffForm:
    return diff_form(on, 0, {(): value})


def zero_form(on: Chart, degree: int = 0) -> DiffForm:
    return DiffForm(on, max(degree, 0), ())


@dataclass(frozen=True)
class VolumeForm(DiffForm):
    """Nonvanishing top form; the single coefficient is a unit monomial."""

    def unit_coefficient(self) -> LaurentPoly:
        return self.coefficients[0][1]

    def coefficient_inverse(self) -> LaurentPoly:
        return self.unit_coefficient().unit_inverse()


def volume_form(on: Chart, coefficient: LaurentPoly | Scalar) -> VolumeForm:
    top = len(on.free_coordinates)
    coeff = on.normal_form(on.poly(coefficient))
    if coeff.is_zero:
        raise VolumeFormError("volume form coefficient is zero")
    if not coeff.is_monomial:
        raise VolumeFormError(
            f"volume form coefficient {coeff} is not a single Laurent monomial; "
            f"this shape is not supported"
        )
    if not coeff.support() <= on.invertible:
        raise VolumeFormError(
            f"volume form coefficient {coeff} involves non-invertible coordinates "
            f"and would vanish somewhere"
        )
    return VolumeForm(on, top, ((tuple(on.free_coordinates), coeff),))


# ------------------------------------------------------------- operations


def exterior_derivative(form: DiffForm) -> DiffForm:
    on = form.chart
    order = {name: i for i, name in enumerate(on.free_coordinates)}
    out: dict[FormKey, LaurentPoly] = {}
    for key, coeff in form.coefficients:
        for name in on.free_coordinates:
            if name in key:
                continue
            d = coeff.partial_derivative(name)
            if d.is_zero:
                continue
            d = on.normal_form(d)
            position = sum(1 for k in key if order[k] < order[name])
            new_key = tuple(sorted(key + (name,), key=order.__getitem__))
            signed = d if position % 2 == 0 else -d
            out[new_key] = out.get(new_key, LaurentPoly.zero(on.coordinates)) + signed
    return diff_form(on, form.degree + 1, out)


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    _same_chart(a, b)
    on = a.chart
    degree = a.degree + b.degree
    if degree > len(on.free_coordinates):
        return zero_form(on, degree)
    order = {name: i for i, name in enumerate(on.free_coordinates)}
    out: dict[FormKey, LaurentPoly] = {}
    for ka, va in a.coefficients:
        for kb, vb in b.coefficients:
            if set(ka) & set(kb):
                continue
            inversions = sum(
                1 for x in ka for y in kb if order[x] > order[y]
            )
            key = tuple(sorted(ka + kb, key=order.__getitem__))
            term = va * vb
            signed = term if inversions % 2 == 0 else -term
            out[key] = out.get(key, LaurentPoly.zero(on.coordinates)) + signed
    return diff_form(on, degree, out)


def interior_product(field: VectorField, form: DiffForm) -> DiffForm:
    """Contraction inserting the field in the first slot."""
    _same_chart(field, form)
    on = form.chart
    if form.degree == 0:
        return zero_form(on, 0)
    comps = field.free_components()
    out: dict[FormKey, LaurentPoly] = {}
    for key, coeff in form.coefficients:
        for t, name in enumerate(key):
            v = comps[name]
            if v.is_zero:
                continue
            reduced = key[:t] + key[t + 1:]
            term = coeff * v
            signed = term if t % 2 == 0 else -term
            out[reduced] = out.get(reduced, LaurentPoly.zero(on.coordinates)) + signed
    return diff_form(on, form.degree - 1, out)


def lie_derivative(field: VectorField, form: DiffForm) -> DiffForm:
    """L_xi = d i_xi + i_xi d."""
    return exterior_derivative(interior_product(field, form)) + interior_product(
        field, exterior_derivative(form)
    )


def lie_bracket(a: VectorField, b: VectorField) -> VectorField:
    _same_chart(a, b)
    _require_tangent(a)
    _require_tangent(b)
    coeffs = {
        name: a.apply(b.coefficient(name)) - b.apply(a.coefficient(name))
        for name in a.chart.coordinates
    }
    return vector_field(a.chart, coeffs)


def divergence(field: VectorField, volume: VolumeForm) -> LaurentPoly:
    """The unique scalar g with L_xi(omega) = g * omega."""
    _same_chart(field, volume)
    _require_tangent(field)
    if not volume.unit_coefficient().is_monomial:
        raise VolumeFormError("volume coefficient is not a unit; divergence would leave the ring")
    derived = lie_derivative(field, volume)
    if derived.is_zero:
        return LaurentPoly.zero(field.chart.coordinates)
    coeff = derived.coefficients[0][1]
    return field.chart.normal_form(coeff * volume.coefficient_inverse())


def contract_volume(field: VectorField, volume: VolumeForm) -> DiffForm:
    """The closed-(n-1)-form side of a divergence-free field: i_xi omega."""
    _require_tangent(field)
    return interior_product(field, volume)


def lnd_flow(
    field: VectorField,
    symbol: str = "t",
    bound: int = 32,
) -> dict[str, LaurentPoly]:
    """Polynomial flow exp(t*xi) of a locally nilpotent field.

    Returns the image of each coordinate in the chart variables extended by
    ``symbol``.  Fails with NilpotencyError when some iterate xi^k(x_i) has
    not reached 0 in normal form for k <= bound.
    """
    on = field.chart
    _require_tangent(field)
    if symbol in on.coordinates:
        raise ChartError(f"flow parameter {symbol!r} clashes with a coordinate")
    extended = on.extend((symbol,))
    t = LaurentPoly.variable(extended.coordinates, symbol)
    images: dict[str, LaurentPoly] = {}
    for name in on.coordinates:
        terms = LaurentPoly.variable(on.coordinates, name).extend_variables(
            extended.coordinates
        )
        current = on.generator(name)
        factorial = 1
        k = 0
        while True:
            current = field.apply(current)
            k += 1
            factorial *= k
            if current.is_zero:
                break
            if k > bound:
                raise NilpotencyError(
                    f"xi^{k}({name}) is still nonzero; field not verified locally "
                    f"nilpotent at bound {bound}"
                )
            terms = terms + (
                current.extend_variables(extended.coordinates)
                * (t ** k)
                * Fraction(1, factorial)
            )
        images[name] = terms
    # the flow must be a chart endomorphism: relations map into the ideal
    for rel in on.relations:
        lifted = rel.poly.extend_variables(extended.coordinates)
        if not extended.normal_form(lifted.substitute(images)).is_zero:
            raise NilpotencyError(
                "flow does not preserve the defining ideal; field is not tangent"
            )
    return images


# ----------------------------------------------- transforms and invariance


def transform_field(field: VectorField, act: SubstitutionAction) -> VectorField:
    """Pullback of a field along a substitution, via the inverse Jacobian."""
    on = field.chart
    jac = substitution_jacobian(on, act)
    inv = poly_matrix_inverse(jac)
    images = act.as_dict()
    substituted = [field.coefficient(c).substitute(images) for c in on.coordinates]
    coeffs = {}
    for i, name in enumerate(on.coordinates):
        total = LaurentPoly.zero(on.coordinates)
        for j in range(len(on.coordinates)):
            total = total + inv[i][j] * substituted[j]
        coeffs[name] = total
    return vector_field(on, coeffs)


def pullback_form(form: DiffForm, act: SubstitutionAction) -> DiffForm:
    """Pullback along a substitution, computed in the free coordinates."""
    on = form.chart
    images = act.as_dict()
    differentials: dict[str, DiffForm] = {}
    for name in on.free_coordinates:
        reduced = on.normal_form(images[name])
        differentials[name] = diff_form(
            on,
            1,
            {(j,): reduced.partial_derivative(j) for j in on.free_coordinates},
        )
    total = zero_form(on, form.degree)
    for key, coeff in form.coefficients:
        term = scalar_form(on, on.normal_form(coeff.substitute(images)))
        for name in key:
            term = wedge(term, differentials[name])
        total = total + term
    return total


def is_invariant(
    obj: Union[LaurentPoly, VectorField, DiffForm],
    act: SubstitutionAction,
    on: Chart | None = None,
) -> bool:
    """Whether the object is fixed by the substitution modulo the ideal.

    Fields transform by the inverse Jacobian, forms by pullback.
    """
    if isinstance(obj, VectorField):
        return transform_field(obj, act).coefficients == obj.coefficients
    if isinstance(obj, DiffForm):
        return forms_equal(pullback_form(obj, act), obj)
    if isinstance(obj, LaurentPoly):
        if on is None:
            raise ChartError("invariance of a bare polynomial needs the chart")
        return on.normal_form(obj.substitute(act.as_dict())) == on.normal_form(obj)
    raise TypeError(f"cannot test invariance of {type(obj).__name__}")


def quasi_character(obj: DiffForm, act: SubstitutionAction) -> Fraction | None:
    """The constant c with pullback(obj) = c*obj, or None when not scalar."""
    pulled = pullback_form(obj, act)
    if obj.is_zero:
        return Fraction(1) if pulled.is_zero else None
    if pulled.is_zero or len(pulled.coefficients) != len(obj.coefficients):
        return None
    base = obj.as_dict()
    ratio: Fraction | None = None
    for key, value in pulled.coefficients:
        if key not in base:
            return None
        source = base[key]
        quotient = None
        if source.is_monomial and value.is_monomial:
            candidate = value * source.unit_inverse()
            if candidate.is_constant:
                quotient = candidate.constant_value()
        else:
            for c in (Fraction(1), Fraction(-1)):
                if (value - c * source).is_zero:
                    quotient = c
                    break
        if quotient is None:
            return None
        if ratio is None:
            ratio = quotient
        elif ratio != quotient:
            return None
    return ratio
