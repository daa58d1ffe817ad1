"""Executable check directives shared by scenarios, documents, and the CLI."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import LaurentPoly, _grlex_key
from .avdp import (
    UNKNOWN,
    bracket_potential,
    kernel_basis,
    semicompat_bounded,
    spans_wedge_square,
    verify_bracket_identity,
    verify_flow_jacobian,
    verify_potential,
)
from .calculus import (
    DiffForm,
    VectorField,
    VolumeForm,
    contract_volume,
    divergence,
    exterior_derivative,
    forms_equal,
    interior_product,
    is_invariant,
    is_tangent,
    lie_bracket,
    lnd_flow,
    scalar_form,
)
from .errors import SemanticError, VolformError
from .groups import GroupPresentation, submodular
from .linalg import SpanBuilder
from .model import CheckDirective, Model
from .variety import sample_point

PASS = "PASS"
FAIL = "FAIL"
ERROR = "ERROR"
# UNKNOWN is shared with the semicompat verdict vocabulary

STATUSES = (PASS, FAIL, ERROR, UNKNOWN)


@dataclass(frozen=True)
class RunFlags:
    seed: int = 0
    degree_bound: int = 4
    lnd_bound: int = 32
    points: int = 20


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str
    detail: str
    wall_ms: float


CheckFn = Callable[[Model, tuple, RunFlags], tuple[str, str]]
REGISTRY: dict[str, CheckFn] = {}


def register(kind: str):
    def wrap(fn: CheckFn) -> CheckFn:
        REGISTRY[kind] = fn
        return fn
    return wrap


def run_check(model: Model, directive: CheckDirective, flags: RunFlags) -> CheckRecord:
    fn = REGISTRY.get(directive.kind)
    started = time.perf_counter()
    if fn is None:
        return CheckRecord(directive.label(), ERROR, f"unknown check kind {directive.kind!r}", 0.0)
    try:
        status, detail = fn(model, directive.args, flags)
    except VolformError as exc:
        status, detail = ERROR, f"{type(exc).__name__}: {exc}"
    wall_ms = (time.perf_counter() - started) * 1000.0
    return CheckRecord(directive.label(), status, detail, wall_ms)


def execute(model: Model, flags: RunFlags | None = None) -> list[CheckRecord]:
    flags = flags or RunFlags()
    return [run_check(model, d, flags) for d in model.checks]


# --------------------------------------------------------------- resolvers


def _want(model: Model, name, kind: type, what: str):
    if not isinstance(name, str):
        raise SemanticError(f"expected a {what} name, got {name!r}")
    obj = model.lookup(name)
    if obj is None:
        raise SemanticError(f"unknown identifier {name!r}")
    if not isinstance(obj, kind):
        raise SemanticError(f"{name!r} is not a {what}")
    return obj


def _field(model: Model, name) -> VectorField:
    return _want(model, name, VectorField, "vector field")


def _form(model: Model, name) -> DiffForm:
    return _want(model, name, DiffForm, "differential form")


def _volume(model: Model, name) -> VolumeForm:
    return _want(model, name, VolumeForm, "volume form")


def _polynomial(model: Model, name) -> LaurentPoly:
    return _want(model, name, LaurentPoly, "polynomial")


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SemanticError(f"expected an integer {what}, got {value!r}")
    return value


# ------------------------------------------------------------------ checks


@register("tangent")
def _check_tangent(model: Model, args, flags) -> tuple[str, str]:
    field = _field(model, args[0])
    if is_tangent(field):
        return PASS, "field is tangent to every defining relation"
    residuals = [str(field.apply(rel.poly)) for rel in field.chart.relations]
    return FAIL, f"relation residuals: {residuals}"


@register("divergence_zero")
def _check_divergence_zero(model: Model, args, flags) -> tuple[str, str]:
    field = _field(model, args[0])
    volume = _volume(model, args[1])
    div = divergence(field, volume)
    if div.is_zero:
        return PASS, "divergence is 0"
    return FAIL, f"divergence is {div}"


@register("identity1")
def _check_identity1(model: Model, args, flags) -> tuple[str, str]:
    a, b = _field(model, args[0]), _field(model, args[1])
    volume = _volume(model, args[2])
    if verify_bracket_identity(a, b, volume):
        return PASS, "contraction of the bracket equals d of the double contraction"
    residual = contract_volume(lie_bracket(a, b), volume) - exterior_derivative(
        interior_product(a, interior_product(b, volume))
    )
    return FAIL, f"residual form: {_render_form(residual)}"


@register("potential")
def _check_potential(model: Model, args, flags) -> tuple[str, str]:
    poly = _polynomial(model, args[0])
    field = _field(model, args[1])
    volume = _volume(model, args[2])
    for c in (1, -1):
        if verify_potential(c * poly, field, volume):
            return PASS, f"matched constant c = {c:+d}"
    residual = exterior_derivative(
        scalar_form(field.chart, poly)
    ) - contract_volume(field, volume)
    return FAIL, f"no sign matches; residual for c=+1: {_render_form(residual)}"


@register("bracket_potential")
def _check_bracket_potential(model: Model, args, flags) -> tuple[str, str]:
    a, b = _field(model, args[0]), _field(model, args[1])
    volume = _volume(model, args[2])
    expected = _polynomial(model, args[3])
    value = bracket_potential(a, b, volume)
    exact = exterior_derivative(scalar_form(a.chart, value)) - contract_volume(
        lie_bracket(a, b), volume
    )
    if not exact.is_zero:
        return FAIL, f"d(potential) misses the bracket contraction by {_render_form(exact)}"
    target = a.chart.normal_form(expected)
    for c in (1, -1):
        if (value - c * target).is_zero:
            return PASS, f"potential equals {c:+d} * ({expected})"
    return FAIL, f"potential is {value}, expected +/- ({expected})"


@register("kernel_spans")
def _check_kernel_spans(model: Model, args, flags) -> tuple[str, str]:
    field = _field(model, args[0])
    bound = _int(args[1], "degree bound")
    generator = _polynomial(model, args[2])
    expected_dim = _int(args[3], "dimension")
    basis = kernel_basis(field, bound)
    if len(basis) != expected_dim:
        return FAIL, f"kernel dimension {len(basis)}, expected {expected_dim}"
    chart = field.chart
    span = SpanBuilder(key_order=_grlex_key)
    for member in basis:
        span.insert(member.as_dict())
    for k in range(expected_dim):
        power = chart.normal_form(generator ** k)
        if not span.contains(power.as_dict()):
            return FAIL, f"({generator})**{k} is outside the computed kernel"
    return PASS, f"kernel is exactly the span of powers of {generator} (dim {expected_dim})"


@register("semicompat")
def _check_semicompat(model: Model, args, flags) -> tuple[str, str]:
    a, b = _field(model, args[0]), _field(model, args[1])
    bound = _int(args[2], "degree bound") if len(args) > 2 else flags.degree_bound
    expected = args[3] if len(args) > 3 else None
    verdict = semicompat_bounded(a, b, bound)
    detail = f"status {verdict.status} at bound {bound}"
    if verdict.witness is not None:
        detail += f", witness {verdict.witness}"
    if verdict.status == UNKNOWN:
        return UNKNOWN, detail + " (one-sided test; not a refutation)"
    if expected is None or verdict.status == expected:
        return PASS, detail
    return FAIL, detail + f", expected {expected}"


@register("wedge_span")
def _check_wedge_span(model: Model, args, flags) -> tuple[str, str]:
    triples = args[0]
    pairs = []
    for entry in triples:
        a, b, witness = entry
        pairs.append((_field(model, a), _field(model, b), _polynomial(model, witness)))
    chart = pairs[0][0].chart
    points = []
    seen = set()
    attempt = 0
    while len(points) < flags.points and attempt < 50 * max(flags.points, 1):
        candidate = sample_point(chart, flags.seed + attempt)
        attempt += 1
        if candidate.values in seen:
            continue
        seen.add(candidate.values)
        points.append(candidate)
    if len(points) < flags.points:
        return ERROR, f"could only sample {len(points)} distinct points"
    for point in points:
        if not spans_wedge_square(pairs, point):
            return FAIL, f"wedges do not span at {dict(point.values)}"
    return PASS, f"wedges span the wedge square at {len(points)} sampled points"


@register("lnd")
def _check_lnd(model: Model, args, flags) -> tuple[str, str]:
    field = _field(model, args[0])
    bound = _int(args[1], "bound") if len(args) > 1 else flags.lnd_bound
    images = lnd_flow(field, "t", bound)
    moved = [n for n, img in images.items()
             if img != field.chart.generator(n).extend_variables(img.variables)]
    return PASS, f"locally nilpotent within bound {bound}; flow moves {moved or 'nothing'}"


@register("exact_volume")
def _check_exact_volume(model: Model, args, flags) -> tuple[str, str]:
    form = _form(model, args[0])
    volume = _volume(model, args[1])
    residual = exterior_derivative(form) - volume
    if residual.is_zero:
        return PASS, "d(form) equals the volume form exactly"
    return FAIL, f"residual form: {_render_form(residual)}"


@register("invariant")
def _check_invariant(model: Model, args, flags) -> tuple[str, str]:
    name = args[0]
    obj = model.lookup(name) if isinstance(name, str) else None
    if obj is None:
        raise SemanticError(f"unknown identifier {name!r}")
    act = model.actions.get(args[1])
    if act is None:
        raise SemanticError(f"unknown action {args[1]!r}")
    if is_invariant(obj, act, model.chart):
        return PASS, f"{name} is invariant under {act.name}"
    return FAIL, f"{name} is not invariant under {act.name}"


@register("commute")
def _check_commute(model: Model, args, flags) -> tuple[str, str]:
    a, b = _field(model, args[0]), _field(model, args[1])
    bracket = lie_bracket(a, b)
    if bracket.is_zero:
        return PASS, "bracket vanishes"
    return FAIL, f"bracket is {[str(c) for _, c in bracket.coefficients if not c.is_zero]}"


@register("theta_equals")
def _check_theta_equals(model: Model, args, flags) -> tuple[str, str]:
    field = _field(model, args[0])
    volume = _volume(model, args[1])
    expected = _form(model, args[2])
    value = contract_volume(field, volume)
    for c in (1, -1):
        if forms_equal(value, c * expected):
            return PASS, f"contraction matches {c:+d} * {args[2]}"
    return FAIL, f"contraction is {_render_form(value)}"


@register("flow_jacobian")
def _check_flow_jacobian(model: Model, args, flags) -> tuple[str, str]:
    field = _field(model, args[0])
    poly = _polynomial(model, args[1])
    literal = args[2]
    bound = _int(args[3], "bound") if len(args) > 3 else flags.lnd_bound
    point = field.chart.point({name: value for name, value in literal})
    if verify_flow_jacobian(field, poly, point, bound):
        return PASS, "flow Jacobian equals identity plus the rank-one shear"
    return FAIL, "flow Jacobian does not match identity plus the rank-one shear"


@register("submodular")
def _check_submodular(model: Model, args, flags) -> tuple[str, str]:
    group = _want(model, args[0], GroupPresentation, "group")
    element = group.element(args[1])
    expected = Fraction(args[2])
    value = submodular(element, group.lie_basis)
    if value == expected:
        return PASS, f"determinant of the adjoint action is {value}"
    return FAIL, f"determinant is {value}, expected {expected}"


def _render_form(form: DiffForm) -> str:
    if form.is_zero:
        return "0"
    return " + ".join(
        f"({coeff}) d{'^d'.join(key) if key else '(scalar)'}"
        for key, coeff in form.coefficients
    )
