"""Linear sets of the projective line PG(1, q^n), subspaces of finite-field
extensions and their products."""

from linsets.analysis import (
    classify_min_size_type2,
    count_weight_r,
    critical_pair_check,
    critpair_linset_bridge,
    geometric_basis_recognizer,
    intersection_chain,
    kneser_check,
    power_decompose,
    size_formula_type2,
    vosper_check,
)
from linsets.constructions import (
    dual_basis,
    iclub_lift,
    jvdv,
    lift,
    min_size_family,
    power_span_dual,
    trace_graph,
)
from linsets.equivalence import gamma_l_orbit_equivalent, scalar_frobenius_equivalent
from linsets.field import Element, FieldCtx, make_field, parse_element, parse_field_spec
from linsets.linear_set import LinearSetReport, enumerate_linear_set, weight
from linsets.subspace import (
    Subspace,
    intersect,
    parse_subspace,
    product_space,
    span,
    subfield_linearity,
    trace_dual,
)

__version__ = "0.1.0"
