"""volform: exact symbolic calculus for divergence-free vector fields on
explicitly presented affine varieties.

Everything is computed over exact rationals; there is no floating point in
the core.  See the README for the document language and the CLI.
"""

from .algebra import LaurentPoly, Rational
from .avdp import (
    FULL_RING,
    IDEAL_WITNESS,
    UNKNOWN,
    SemicompatVerdict,
    SurfaceDecomposition,
    bracket_potential,
    kernel_basis,
    monomials_up_to,
    semicompat_bounded,
    spans_wedge_square,
    surface_decompose,
    surface_roles,
    verify_bracket_identity,
    verify_flow_jacobian,
    verify_potential,
)
from .calculus import (
    DiffForm,
    VectorField,
    VolumeForm,
    contract_volume,
    diff_form,
    divergence,
    exterior_derivative,
    field_from_free,
    forms_equal,
    interior_product,
    is_invariant,
    is_tangent,
    lie_bracket,
    lie_derivative,
    lnd_flow,
    pullback_form,
    quasi_character,
    scalar_form,
    transform_field,
    vector_field,
    volume_form,
    wedge,
    zero_form,
)
from .checks import RunFlags, execute, run_check
from .dsl import Document, format_document, parse, parse_polynomial
from .errors import VolformError
from .groups import GroupPresentation, adjoint_matrix, group_presentation, submodular
from .model import CheckDirective, Model
from .scenarios import (
    Scenario,
    exactness_field,
    product,
    rename_scenario,
    scenario_by_name,
    sl2,
    surface,
    torus,
    xm1,
)
from .variety import (
    Chart,
    Point,
    SubstitutionAction,
    action,
    chart,
    compose_actions,
    normal_form,
    sample_point,
)

__version__ = "0.1.0"

__all__ = [
    "CheckDirective",
    "Chart",
    "DiffForm",
    "Document",
    "FULL_RING",
    "GroupPresentation",
    "IDEAL_WITNESS",
    "LaurentPoly",
    "Model",
    "Point",
    "Rational",
    "RunFlags",
    "Scenario",
    "SemicompatVerdict",
    "SubstitutionAction",
    "SurfaceDecomposition",
    "UNKNOWN",
    "VectorField",
    "VolformError",
    "VolumeForm",
    "action",
    "adjoint_matrix",
    "bracket_potential",
    "chart",
    "compose_actions",
    "contract_volume",
    "diff_form",
    "divergence",
    "exactness_field",
    "execute",
    "exterior_derivative",
    "field_from_free",
    "format_document",
    "forms_equal",
    "group_presentation",
    "interior_product",
    "is_invariant",
    "is_tangent",
    "kernel_basis",
    "lie_bracket",
    "lie_derivative",
    "lnd_flow",
    "monomials_up_to",
    "normal_form",
    "parse",
    "parse_polynomial",
    "product",
    "pullback_form",
    "quasi_character",
    "rename_scenario",
    "run_check",
    "sample_point",
    "scalar_form",
    "scenario_by_name",
    "semicompat_bounded",
    "sl2",
    "spans_wedge_square",
    "submodular",
    "surface",
    "surface_decompose",
    "surface_roles",
    "torus",
    "transform_field",
    "vector_field",
    "verify_bracket_identity",
    "verify_flow_jacobian",
    "verify_potential",
    "volume_form",
    "wedge",
    "xm1",
    "zero_form",
]
