"""Affine variety presentations as triangular charts.

A chart lists coordinates, flags the invertible ones, and carries defining
relations that are degree 1 in a designated "solvable" coordinate with a unit
(single Laurent monomial) leading coefficient.  Solving each relation
eliminates its coordinate, so every regular function has a canonical normal
form in the free coordinates; congruence modulo the defining ideal becomes
structural equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import LaurentPoly, Scalar
from .errors import (
    ActionError,
    ChartError,
    EvaluationError,
    NotAUnitError,
    PointError,
    ResourceLimitError,
    UnknownVariableError,
    VariableMismatchError,
)

SAMPLE_RANGE = [n for n in range(-9, 10) if n != 0]


@dataclass(frozen=True)
class Relation:
    poly: LaurentPoly
    solves: str


@dataclass(frozen=True)
class Chart:
    coordinates: tuple[str, ...]
    invertible: frozenset[str]
    relations: tuple[Relation, ...]
    free_coordinates: tuple[str, ...]
    # fully eliminated solution per solvable coordinate, in free coordinates only
    solutions: tuple[tuple[str, LaurentPoly], ...]

    @property
    def dimension(self) -> int:
        return len(self.free_coordinates)

    @property
    def solvable(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.solutions)

    def validate_poly(self, p: LaurentPoly) -> LaurentPoly:
        if p.variables != self.coordinates:
            raise VariableMismatchError(
                f"polynomial over {p.variables} does not match chart coordinates "
                f"{self.coordinates}"
            )
        for exps, _ in p.terms:
            for name, e in zip(p.variables, exps):
                if e < 0 and name not in self.invertible:
                    raise ChartError(
                        f"negative exponent on non-invertible coordinate {name!r}"
                    )
        return p

    def poly(self, source: LaurentPoly | Scalar) -> LaurentPoly:
        """Coerce a scalar or same-variable polynomial onto this chart."""
        if isinstance(source, LaurentPoly):
            return self.validate_poly(source)
        return LaurentPoly.constant(self.coordinates, source)

    def generators(self) -> tuple[LaurentPoly, ...]:
        return LaurentPoly.generators(self.coordinates)

    def generator(self, name: str) -> LaurentPoly:
        return LaurentPoly.variable(self.coordinates, name)

    def normal_form(self, p: LaurentPoly) -> LaurentPoly:
        """Canonical representative of p modulo the defining ideal."""
        self.validate_poly(p)
        if not self.solutions:
            return p
        used = p.support()
        bindings = {name: expr for name, expr in self.solutions if name in used}
        if not bindings:
            return p
        return p.substitute(bindings)

    def point(self, values: Mapping[str, Scalar]) -> "Point":
        vals = {}
        for name in self.coordinates:
            if name not in values:
                raise PointError(f"missing value for coordinate {name!r}")
            vals[name] = Fraction(values[name])
        extra = set(values) - set(self.coordinates)
        if extra:
            raise PointError(f"unknown coordinates in point: {sorted(extra)}")
        for name in self.invertible:
            if vals[name] == 0:
                raise PointError(f"invertible coordinate {name!r} is zero")
        for rel in self.relations:
            if rel.poly.evaluate(vals) != 0:
                raise PointError(
                    f"point does not satisfy relation {rel.poly} = 0"
                )
        return Point(self, tuple((c, vals[c]) for c in self.coordinates))

    def extend(self, names: Iterable[str], invertible: Iterable[str] = ()) -> "Chart":
        """Append fresh free coordinates (used for flow parameters)."""
        extra = tuple(names)
        for name in extra:
            if name in self.coordinates:
                raise ChartError(f"coordinate {name!r} already exists")
        coords = self.coordinates + extra
        rels = [
            (rel.poly.extend_variables(coords), rel.solves) for rel in self.relations
        ]
        return chart(coords, self.invertible | set(invertible), rels)

    def rename(self, mapping: Mapping[str, str]) -> "Chart":
        coords = tuple(mapping.get(c, c) for c in self.coordinates)
        rels = [
            (rel.poly.rename_variables(mapping), mapping.get(rel.solves, rel.solves))
            for rel in self.relations
        ]
        return chart(coords, {mapping.get(c, c) for c in self.invertible}, rels)


def chart(
    coordinates: Iterable[str],
    invertible: Iterable[str] = (),
    relations: Iterable[tuple[LaurentPoly, str]] = (),
) -> Chart:
    """Build and validate a triangular chart presentation."""
    coords = tuple(coordinates)
    if not coords:
        raise ChartError("a chart needs at least one coordinate")
    if len(set(coords)) != len(coords):
        raise ChartError(f"duplicate coordinate names: {coords}")
    inv = frozenset(invertible)
    unknown = inv - set(coords)
    if unknown:
        raise ChartError(f"invertible flags for unknown coordinates: {sorted(unknown)}")

    rels: list[Relation] = []
    solvable: list[str] = []
    for poly, solves in relations:
        if solves not in coords:
            raise ChartError(f"solvable coordinate {solves!r} is not a coordinate")
        if solves in solvable:
            raise ChartError(f"coordinate {solves!r} solved by two relations")
        if solves in inv:
            raise ChartError(
                f"solvable coordinate {solves!r} may not be flagged invertible"
            )
        rels.append(Relation(poly, solves))
        solvable.append(solves)

    free = tuple(c for c in coords if c not in solvable)
    probe = Chart(coords, inv, tuple(rels), free, ())
    for rel in rels:
        probe.validate_poly(rel.poly)
        if rel.poly.degree_in(rel.solves) != 1 or rel.poly.min_degree_in(rel.solves) < 0:
            raise ChartError(
                f"relation {rel.poly} must have total degree exactly 1 in {rel.solves!r}"
            )

    # Solve each relation a*s + b = 0 as s = -b/a; a must be a unit monomial.
    raw: dict[str, LaurentPoly] = {}
    for rel in rels:
        a = rel.poly.coefficient_in(rel.solves, 1)
        b = rel.poly.coefficient_in(rel.solves, 0)
        if not a.is_monomial:
            raise ChartError(
                f"leading coefficient {a} of {rel.solves!r} is not a single monomial"
            )
        if not a.support() <= inv:
            raise ChartError(
                f"leading coefficient {a} of {rel.solves!r} involves "
                f"non-invertible coordinates"
            )
        raw[rel.solves] = (-b) * a.unit_inverse()

    # Back-substitute until every solution uses free coordinates only.
    solvable_set = set(solvable)
    for _ in range(len(rels) + 1):
        changed = False
        for name in solvable:
            expr = raw[name]
            pending = expr.support() & solvable_set
            if name in pending:
                raise ChartError(f"relation for {name!r} is self-referential")
            if pending:
                raw[name] = expr.substitute({t: raw[t] for t in pending})
                changed = True
        if not changed:
            break
    for name in solvable:
        if raw[name].support() & solvable_set:
            raise ChartError("relations are not triangular: elimination does not terminate")

    solutions = tuple((name, raw[name]) for name in solvable)
    return Chart(coords, inv, tuple(rels), free, solutions)


def normal_form(p: LaurentPoly, on: Chart) -> LaurentPoly:
    return on.normal_form(p)


@dataclass(frozen=True)
class Point:
    chart: Chart
    values: tuple[tuple[str, Fraction], ...]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.values)

    def __getitem__(self, name: str) -> Fraction:
        for key, value in self.values:
            if key == name:
                return value
        raise UnknownVariableError(f"no coordinate {name!r} in point")


def sample_point(on: Chart, seed: int, retries: int = 100) -> Point:
    """Deterministic rational point: random nonzero integer draws for the free
    coordinates, solvable coordinates computed from the relations."""
    rng = random.Random(seed)
    for _ in range(retries):
        values: dict[str, Fraction] = {
            name: Fraction(rng.choice(SAMPLE_RANGE)) for name in on.free_coordinates
        }
        try:
            for name, expr in on.solutions:
                values[name] = expr.evaluate(values)
            return on.point(values)
        except (PointError, EvaluationError):
            continue
    raise ResourceLimitError(f"no valid point found in {retries} attempts")


@dataclass(frozen=True)
class SubstitutionAction:
    """Finite-order chart automorphism given by coordinate images."""

    name: str
    images: tuple[tuple[str, LaurentPoly], ...]
    order: int

    def image(self, coordinate: str) -> LaurentPoly:
        for key, value in self.images:
            if key == coordinate:
                return value
        raise UnknownVariableError(f"no image for coordinate {coordinate!r}")

    def as_dict(self) -> dict[str, LaurentPoly]:
        return dict(self.images)

    def apply(self, p: LaurentPoly) -> LaurentPoly:
        return p.substitute(self.as_dict())


def action(
    on: Chart,
    name: str,
    images: Mapping[str, LaurentPoly | Scalar],
    order: int,
) -> SubstitutionAction:
    """Validate a substitution action: declared order and ideal stability."""
    if order < 1:
        raise ActionError(f"declared order must be positive, got {order}")
    full: dict[str, LaurentPoly] = {}
    for c in on.coordinates:
        img = images.get(c)
        full[c] = on.generator(c) if img is None else on.poly(img)
    extra = set(images) - set(on.coordinates)
    if extra:
        raise ActionError(f"images for unknown coordinates: {sorted(extra)}")
    for c in on.invertible:
        if not full[c].is_monomial:
            raise ActionError(
                f"invertible coordinate {c!r} must map to a unit monomial, got {full[c]}"
            )
        if not full[c].support() <= on.invertible:
            raise ActionError(
                f"image of invertible coordinate {c!r} involves non-invertible "
                f"coordinates"
            )

    # order check: the order-fold composite is the identity modulo the ideal
    current = {c: on.generator(c) for c in on.coordinates}
    for _ in range(order):
        current = {c: current[c].substitute(full) for c in on.coordinates}
    for c in on.coordinates:
        if on.normal_form(current[c]) != on.normal_form(on.generator(c)):
            raise ActionError(
                f"substitution is not of order {order}: coordinate {c!r} maps to "
                f"{current[c]} after {order} iterations"
            )

    # ideal stability: each defining polynomial maps back into the ideal
    for rel in on.relations:
        if not on.normal_form(rel.poly.substitute(full)).is_zero:
            raise ActionError(
                f"substitution does not preserve the ideal: relation {rel.poly} "
                f"maps outside"
            )

    return SubstitutionAction(name, tuple((c, full[c]) for c in on.coordinates), order)


def compose_actions(on: Chart, first: SubstitutionAction, then: SubstitutionAction,
                    name: str | None = None) -> SubstitutionAction:
    """Composite substitution applying ``first`` and then ``then``."""
    f = first.as_dict()
    t = then.as_dict()
    images = {c: t[c].substitute(f) for c in on.coordinates}
    order = _lcm(first.order, then.order)
    return action(on, name or f"{first.name}*{then.name}", images, order)


def _lcm(a: int, b: int) -> int:
    g, x = a, b
    while x:
        g, x = x, g % x
    return a * b // abs(g)


# ---------------------------------------------------------------- jacobians

PolyMatrix = tuple[tuple[LaurentPoly, ...], ...]


def substitution_jacobian(on: Chart, act: SubstitutionAction) -> PolyMatrix:
    """Matrix of ambient partials d(image_i)/d(coordinate_j)."""
    return tuple(
        tuple(act.image(ci).partial_derivative(cj) for cj in on.coordinates)
        for ci in on.coordinates
    )


def poly_matrix_det(m: PolyMatrix) -> LaurentPoly:
    n = len(m)
    if n == 0:
        raise ChartError("empty matrix")
    if n == 1:
        return m[0][0]
    variables = m[0][0].variables
    total = LaurentPoly.zero(variables)
    for j in range(n):
        entry = m[0][j]
        if entry.is_zero:
            continue
        minor = tuple(row[:j] + row[j + 1:] for row in m[1:])
        cofactor = poly_matrix_det(minor)
        term = entry * cofactor
        total = total + (term if j % 2 == 0 else -term)
    return total


def poly_matrix_inverse(m: PolyMatrix) -> PolyMatrix:
    """Inverse of a polynomial matrix whose determinant is a unit monomial."""
    n = len(m)
    det = poly_matrix_det(m)
    if det.is_zero or not det.is_monomial:
        raise NotAUnitError(
            f"matrix determinant {det} is not a unit; inverse leaves the Laurent ring"
        )
    det_inv = det.unit_inverse()
    if n == 1:
        return ((det_inv,),)
    adj = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(
                tuple(m[r][c] for c in range(n) if c != i)
                for r in range(n) if r != j
            )
            cof = poly_matrix_det(minor)
            row.append((cof if (i + j) % 2 == 0 else -cof) * det_inv)
        adj.append(tuple(row))
    return tuple(adj)
