"""Built-in worked examples: tori, SL2, the xyz-surfaces, the x^m v - y u = 1
family, and products, each packaged with the checks it is expected to pass.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .algebra import LaurentPoly
from .calculus import (
    DiffForm,
    VectorField,
    diff_form,
    divergence,
    is_invariant,
    vector_field,
    volume_form,
)
from .errors import ChartError, PreconditionError, VolformError
from .model import CheckDirective, Model
from .variety import SubstitutionAction, action, chart

Scenario = Model


def exactness_field(xi: VectorField, eta: VectorField, f: LaurentPoly) -> VectorField:
    """The field xi(f)*eta for commuting xi, eta and f in the kernel of eta.

    By the bracket identity this equals [xi, f*eta], so its contraction with
    any volume form that kills both xi and f*eta is exact, with the double
    contraction of (xi, f*eta) as a primitive."""
    from .calculus import lie_bracket

    if not lie_bracket(xi, eta).is_zero:
        raise PreconditionError("fields do not commute")
    if not eta.apply(f).is_zero:
        raise PreconditionError("f is not in the kernel of the second field")
    scaled = xi.apply(f) * eta
    assert scaled.coefficients == lie_bracket(xi, f * eta).coefficients
    return scaled


def torus(n: int) -> Scenario:
    """(C*)^n with the invariant volume form and the coordinate scalings."""
    if n < 1:
        raise ChartError(f"torus dimension must be >= 1, got {n}")
    names = tuple(f"z{i}" for i in range(1, n + 1))
    t = chart(names, invertible=names)
    gens = {name: t.generator(name) for name in names}
    omega = volume_form(
        t, LaurentPoly.monomial(names, tuple(-1 for _ in names))
    )

    fields: dict[str, VectorField] = {}
    for i, name in enumerate(names, start=1):
        fields[f"nu{i}"] = vector_field(t, {name: gens[name]})
    # nu_i rescaled by nu_j(z_j) = z_j: exactness fields whose contractions
    # with omega are exact; they feed the wedge-span test
    pair_triples: list[tuple[str, str, str]] = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            left = f"nu{i}x{j}"
            right = f"nu{j}x{i}"
            fields[left] = exactness_field(fields[f"nu{j}"], fields[f"nu{i}"], gens[f"z{j}"])
            fields[right] = exactness_field(fields[f"nu{i}"], fields[f"nu{j}"], gens[f"z{i}"])
            pair_triples.append((left, right, "one"))

    forms: dict[str, DiffForm] = {}
    for i, name in enumerate(names, start=1):
        rest = tuple(m for m in names if m != name)
        coeff = LaurentPoly.monomial(
            names, tuple(-1 if m != name else 0 for m in names)
        )
        forms[f"w_without_{i}"] = diff_form(t, n - 1, {rest: coeff})

    negate = action(t, "negate", {name: -gens[name] for name in names}, 2)

    polys = {"one": LaurentPoly.one(names)}

    checks: list[CheckDirective] = []
    for i in range(1, n + 1):
        checks.append(CheckDirective("divergence_zero", (f"nu{i}", "w")))
        checks.append(CheckDirective("theta_equals", (f"nu{i}", "w", f"w_without_{i}")))
        checks.append(CheckDirective("invariant", (f"nu{i}", "negate")))
    if n >= 2:
        checks.append(CheckDirective("semicompat", ("nu1", "nu2", 0, "FULL_RING")))
        checks.append(CheckDirective("wedge_span", (tuple(pair_triples),)))

    return Model(
        name=f"torus:{n}",
        chart=t,
        volume=omega,
        volume_name="w",
        fields=fields,
        forms=forms,
        polys=polys,
        actions={"negate": negate},
        checks=tuple(checks),
    )


def sl2() -> Scenario:
    """SL2 as a1*b2 - a2*b1 = 1, with the two triangular shear fields."""
    names = ("a1", "a2", "b1", "b2")
    rel = LaurentPoly.from_dict(names, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1, (0, 0, 0, 0): -1})
    c = chart(names, invertible=("a1",), relations=[(rel, "b2")])
    a1, a2, b1, b2 = c.generators()
    omega = volume_form(c, a1.unit_inverse())
    xi = vector_field(c, {"a1": b1, "a2": b2})
    eta = vector_field(c, {"b1": a1, "b2": a2})
    polys = {"one": LaurentPoly.one(names), "f": b1}

    point_literal = (("a1", 1), ("a2", 1), ("b1", 0), ("b2", 1))
    checks = (
        CheckDirective("tangent", ("xi",)),
        CheckDirective("tangent", ("eta",)),
        CheckDirective("lnd", ("xi", 2)),
        CheckDirective("lnd", ("eta", 2)),
        CheckDirective("divergence_zero", ("xi", "w")),
        CheckDirective("divergence_zero", ("eta", "w")),
        CheckDirective("identity1", ("xi", "eta", "w")),
        CheckDirective("semicompat", ("xi", "eta", 2, "FULL_RING")),
        CheckDirective("flow_jacobian", ("xi", "f", point_literal, 8)),
    )
    return Model(
        name="sl2",
        chart=c,
        volume=omega,
        volume_name="w",
        fields={"xi": xi, "eta": eta},
        polys=polys,
        checks=checks,
    )


def surface(p: LaurentPoly, q: LaurentPoly) -> Scenario:
    """The surface p(x) + q(y) + x*y*z = 1 with its three shear fields.

    p must be a polynomial in x alone with p(0) = 0, q likewise in y.  The
    simple-roots hypothesis on 1-p and 1-q is the caller's responsibility and
    is recorded, not verified.
    """
    names = ("x", "y", "z")
    x, y, z = LaurentPoly.generators(names)
    p = p.extend_variables(names) if p.variables != names else p
    q = q.extend_variables(names) if q.variables != names else q
    for poly, var, label in ((p, "x", "p"), (q, "y", "q")):
        if not poly.support() <= {var}:
            raise ChartError(f"{label} must be a polynomial in {var} only, got {poly}")
        if not poly.is_zero and poly.min_degree_in(var) < 1:
            raise ChartError(f"{label}(0) must be 0, got {poly}")
    rel = p + q + x * y * z - 1
    c = chart(names, invertible=("x", "y"), relations=[(rel, "z")])
    omega = volume_form(c, (x * y).unit_inverse())

    dp = p.partial_derivative("x")
    dq = q.partial_derivative("y")
    dz = vector_field(c, {"x": dq + x * z, "y": -(dp + y * z)})
    dy = vector_field(c, {"x": -(x * y), "z": dp + y * z})
    dx = vector_field(c, {"y": -(x * y), "z": dq + x * z})

    polys = {
        "one": LaurentPoly.one(names),
        "px": x,
        "py": y,
        "pz": z,
        # the double contraction of (dz, dy) with omega; equals 1 + y*z when p = x
        "pprime_plus_yz": dp + y * z,
    }

    actions: dict[str, SubstitutionAction] = {}
    if p.substitute({"x": y}) == q and q.substitute({"y": x}) == p:
        actions["swap_xy"] = action(c, "swap_xy", {"x": y, "y": x}, 2)

    checks = (
        CheckDirective("tangent", ("dz",)),
        CheckDirective("tangent", ("dy",)),
        CheckDirective("tangent", ("dx",)),
        CheckDirective("divergence_zero", ("dz", "w")),
        CheckDirective("divergence_zero", ("dy", "w")),
        CheckDirective("divergence_zero", ("dx", "w")),
        CheckDirective("identity1", ("dz", "dy", "w")),
        CheckDirective("identity1", ("dz", "dx", "w")),
        CheckDirective("identity1", ("dy", "dx", "w")),
        CheckDirective("potential", ("pz", "dz", "w")),
        CheckDirective("potential", ("py", "dy", "w")),
        CheckDirective("potential", ("px", "dx", "w")),
        CheckDirective("bracket_potential", ("dz", "dy", "w", "pprime_plus_yz")),
        CheckDirective("kernel_spans", ("dz", 4, "pz", 5)),
        CheckDirective("kernel_spans", ("dy", 4, "py", 5)),
        CheckDirective("kernel_spans", ("dx", 4, "px", 5)),
    )
    return Model(
        name=f"surface:p={p},q={q}",
        chart=c,
        volume=omega,
        volume_name="w",
        fields={"dz": dz, "dy": dy, "dx": dx},
        polys=polys,
        actions=actions,
        checks=checks,
    )


def xm1(m: int) -> Scenario:
    """The hypersurface x^m*v - y*u = 1, its volume form x^-m dx^dy^du, and
    for m >= 2 the primitive whose exterior derivative recovers it."""
    if m < 1:
        raise ChartError(f"exponent must be >= 1, got {m}")
    names = ("x", "y", "u", "v")
    x, y, u, v = LaurentPoly.generators(names)
    rel = x ** m * v - y * u - 1
    c = chart(names, invertible=("x",), relations=[(rel, "v")])
    omega = volume_form(c, LaurentPoly.monomial(names, (-m, 0, 0, 0)))

    nu_y = vector_field(c, {"y": x ** m, "v": u})
    nu_u = vector_field(c, {"u": x ** m, "v": y})
    fields = {"nu_y": nu_y, "nu_u": nu_u}

    forms: dict[str, DiffForm] = {}
    checks: list[CheckDirective] = [
        CheckDirective("tangent", ("nu_y",)),
        CheckDirective("tangent", ("nu_u",)),
        CheckDirective("lnd", ("nu_y", 2)),
        CheckDirective("lnd", ("nu_u", 2)),
        CheckDirective("divergence_zero", ("nu_y", "w")),
        CheckDirective("divergence_zero", ("nu_u", "w")),
    ]
    if m == 1:
        # the m = 1 chart is the SL2 relation in other names; the kernel
        # products certify an ideal witness already at bound 1
        checks.append(CheckDirective("semicompat", ("nu_y", "nu_u", 1, "IDEAL_WITNESS")))
    else:
        checks.append(
            CheckDirective("semicompat", ("nu_y", "nu_u", 1), expect="UNKNOWN")
        )
    if m >= 2:
        coeff = LaurentPoly.monomial(names, (1 - m, 0, 0, 0), Fraction(1, 1 - m))
        forms["tau"] = diff_form(c, 2, {("y", "u"): coeff})
        checks.append(CheckDirective("exact_volume", ("tau", "w")))

    return Model(
        name=f"xm1:{m}",
        chart=c,
        volume=omega,
        volume_name="w",
        fields=fields,
        forms=forms,
        polys={"one": LaurentPoly.one(names)},
        checks=tuple(checks),
    )


# --------------------------------------------------------------- products


def rename_scenario(s: Scenario, mapping: Mapping[str, str]) -> Scenario:
    """Rename chart coordinates throughout a scenario (object names stay)."""
    new_chart = s.chart.rename(mapping)

    def rn_poly(p: LaurentPoly) -> LaurentPoly:
        return p.rename_variables(mapping)

    def rn_field(f: VectorField) -> VectorField:
        return vector_field(
            new_chart, {mapping.get(n, n): rn_poly(c) for n, c in f.coefficients}
        )

    def rn_form(f: DiffForm) -> DiffForm:
        return diff_form(
            new_chart,
            f.degree,
            {
                tuple(mapping.get(n, n) for n in key): rn_poly(c)
                for key, c in f.coefficients
            },
        )

    def rn_action(a: SubstitutionAction) -> SubstitutionAction:
        return action(
            new_chart,
            a.name,
            {mapping.get(n, n): rn_poly(img) for n, img in a.images},
            a.order,
        )

    def rn_arg(arg):
        if isinstance(arg, tuple):
            return tuple(rn_arg(a) for a in arg)
        if isinstance(arg, str) and arg in mapping:
            return mapping[arg]
        return arg

    volume = volume_form(new_chart, rn_poly(s.volume.unit_coefficient())) if s.volume else None
    return Model(
        name=s.name,
        chart=new_chart,
        volume=volume,
        volume_name=s.volume_name,
        fields={n: rn_field(f) for n, f in s.fields.items()},
        forms={n: rn_form(f) for n, f in s.forms.items()},
        polys={n: rn_poly(p) for n, p in s.polys.items()},
        actions={n: rn_action(a) for n, a in s.actions.items()},
        groups=dict(s.groups),
        checks=tuple(
            CheckDirective(d.kind, rn_arg(d.args), d.expect) for d in s.checks
        ),
    )


def _fresh_names(taken: set[str], wanted: tuple[str, ...]) -> dict[str, str]:
    mapping = {}
    for name in wanted:
        candidate = name
        suffix = 2
        while candidate in taken:
            candidate = f"{name}_{suffix}"
            suffix += 1
        if candidate != name:
            mapping[name] = candidate
        taken.add(candidate)
    return mapping


def product(s1: Scenario, s2: Scenario) -> Scenario:
    """Product scenario: concatenated chart, product volume, lifted fields.

    Factor actions lift (identity on the other factor) and equal-order pairs
    combine diagonally; objects that verify as invariant under a diagonal
    action are recorded as invariance checks.
    """
    if s1.chart is None or s2.chart is None or s1.volume is None or s2.volume is None:
        raise ChartError("product needs two scenarios with charts and volume forms")
    clash = _fresh_names(set(s1.chart.coordinates), s2.chart.coordinates)
    right = rename_scenario(s2, clash) if clash else s2

    coords = s1.chart.coordinates + right.chart.coordinates
    rels = [
        (rel.poly.extend_variables(coords), rel.solves)
        for rel in s1.chart.relations + right.chart.relations
    ]
    both = chart(coords, s1.chart.invertible | right.chart.invertible, rels)

    def lift_poly(p: LaurentPoly) -> LaurentPoly:
        return p.extend_variables(coords)

    def lift_field(f: VectorField) -> VectorField:
        return vector_field(both, {n: lift_poly(c) for n, c in f.coefficients})

    def lift_form(f: DiffForm) -> DiffForm:
        return diff_form(
            both, f.degree, {key: lift_poly(c) for key, c in f.coefficients}
        )

    volume = volume_form(
        both,
        lift_poly(s1.volume.unit_coefficient())
        * lift_poly(right.volume.unit_coefficient()),
    )

    fields: dict[str, VectorField] = {}
    origin: dict[str, int] = {}
    for side, source in ((1, s1), (2, right)):
        rename = _fresh_names(set(fields), tuple(source.fields))
        for name, f in source.fields.items():
            key = rename.get(name, name)
            fields[key] = lift_field(f)
            origin[key] = side

    forms: dict[str, DiffForm] = {}
    for source in (s1, right):
        rename = _fresh_names(set(forms), tuple(source.forms))
        for name, f in source.forms.items():
            forms[rename.get(name, name)] = lift_form(f)

    polys: dict[str, LaurentPoly] = {}
    for source in (s1, right):
        for name, p in source.polys.items():
            lifted = lift_poly(p)
            if name in polys:
                if polys[name] == lifted:
                    continue
                name = _fresh_names(set(polys), (name,))[name]
            polys[name] = lifted

    actions: dict[str, SubstitutionAction] = {}
    for source in (s1, right):
        for name, a in source.actions.items():
            lifted = action(both, name, {n: lift_poly(img) for n, img in a.images}, a.order)
            actions[_fresh_names(set(actions), (name,)).get(name, name)] = lifted
    diagonals: list[str] = []
    for n1, a1 in s1.actions.items():
        for n2, a2 in right.actions.items():
            if a1.order != a2.order:
                continue
            images = {n: lift_poly(img) for n, img in a1.images}
            images.update({n: lift_poly(img) for n, img in a2.images})
            name = f"{n1}*{n2}"
            actions[name] = action(both, name, images, a1.order)
            diagonals.append(name)

    checks: list[CheckDirective] = []
    for name, f in fields.items():
        checks.append(CheckDirective("tangent", (name,)))
        if divergence(f, volume).is_zero:
            checks.append(CheckDirective("divergence_zero", (name, "w")))
    field_names = list(fields)
    for a in field_names:
        for b in field_names:
            if origin[a] == 1 and origin[b] == 2:
                checks.append(CheckDirective("commute", (a, b)))

    # invariance records for diagonal actions: plain invariant objects, plus
    # anti-invariant fields of one factor rescaled by an anti-invariant
    # coordinate of the other factor
    for diag in diagonals:
        act = actions[diag]
        anti_coords = [
            n for n in both.coordinates
            if act.image(n) == -both.generator(n)
        ]
        candidates: dict[str, object] = {}
        for name, f in fields.items():
            candidates[name] = f
        for coord in anti_coords:
            g = both.generator(coord)
            for name, f in fields.items():
                label = f"{coord}~{name}"
                candidate = g * f
                if candidate.coefficients != f.coefficients:
                    candidates[label] = candidate
            candidates[f"{coord}~w"] = g * volume
        for label, obj in sorted(candidates.items()):
            try:
                invariant = is_invariant(obj, act, both)
            except VolformError:
                continue
            if not invariant:
                continue
            if label in fields:
                checks.append(CheckDirective("invariant", (label, diag)))
            else:
                coord, _, base = label.partition("~")
                extra = f"{coord}{base}"
                if base == "w":
                    forms[extra] = both.generator(coord) * volume
                else:
                    fields[extra] = both.generator(coord) * fields[base]
                    origin[extra] = origin[base]
                checks.append(CheckDirective("invariant", (extra, diag)))

    return Model(
        name=f"product:{s1.name}|{s2.name}",
        chart=both,
        volume=volume,
        volume_name="w",
        fields=fields,
        forms=forms,
        polys=polys,
        actions=actions,
        checks=tuple(checks),
    )


# ------------------------------------------------------------- addressing

SCENARIO_SUMMARY = (
    ("torus:N", "algebraic torus (C*)^N with scaling fields"),
    ("sl2", "SL2 as a1*b2 - a2*b1 = 1 with the shear pair"),
    ("surface:p=...,q=...", "surface p(x) + q(y) + x*y*z = 1, e.g. surface:p=x,q=y"),
    ("xm1:M", "hypersurface x^M*v - y*u = 1 with its exact volume form"),
    ("product:A|B", "product of two addresses, e.g. product:surface:p=x,q=y|torus:1"),
)


def scenario_by_name(address: str) -> Scenario:
    """Resolve a CLI scenario address."""
    from .dsl import parse_polynomial  # local import keeps modules acyclic

    addr = address.strip()
    if addr.startswith("product:"):
        parts = addr[len("product:"):].split("|")
        if len(parts) < 2:
            raise ChartError(f"product address needs two parts: {address!r}")
        built = scenario_by_name(parts[0])
        for part in parts[1:]:
            built = product(built, scenario_by_name(part))
        return built
    if addr == "sl2":
        return sl2()
    if addr.startswith("torus:"):
        return torus(_address_int(addr, "torus:"))
    if addr.startswith("xm1:"):
        return xm1(_address_int(addr, "xm1:"))
    if addr.startswith("surface:"):
        spec = addr[len("surface:"):]
        if not spec.startswith("p=") or ",q=" not in spec:
            raise ChartError(
                f"surface address must look like surface:p=<poly>,q=<poly>: {address!r}"
            )
        p_text, q_text = spec[2:].split(",q=", 1)
        names = ("x", "y", "z")
        return surface(
            parse_polynomial(p_text, names), parse_polynomial(q_text, names)
        )
    raise ChartError(f"unknown scenario address {address!r}")


def _address_int(addr: str, prefix: str) -> int:
    tail = addr[len(prefix):]
    try:
        return int(tail)
    except ValueError:
        raise ChartError(f"bad numeric parameter {tail!r} in scenario address") from None
