"""Exact residue calculus on hyperplane arrangements.

Rational functions with poles on a central arrangement are decomposed into a
free part spanned by basis-supported fractions and a torsion complement; the
residue projection onto the top pole layer, its polynomial-twisted variant,
wall residues, a piecewise-polynomial inverse Laplace transform with its
exact forward oracle, jump bookkeeping across walls, and everywhere-defined
stratified cone representatives are all computed in exact rational
arithmetic.
"""

from .core import (
    Arrangement,
    FractionTerm,
    Polynomial,
    RationalElement,
    SplitForm,
    derivative,
    evaluate,
    format_element,
    graded_component,
    jk_residue,
    jk_residue_exp,
    normalize,
    s_part,
    split,
    vanish_order_at_infinity,
)
from .errors import (
    AlphaInSigma,
    ChamberMismatch,
    Degenerate,
    JkresError,
    NotABasis,
    NotRepresentable,
    NotSpanning,
    OnWall,
    ParseError,
    RankTooLarge,
    SingularPoint,
)
from .fourier import (
    ConeFunction,
    a_gamma,
    evaluate_total,
    representative_in_dual_cone,
    stratified_fourier,
)
from .geometry import (
    Chamber,
    SimplicialCone,
    chamber_cone_decomposition,
    chambers,
    cone_contains,
    cprime,
    cutting_forms,
    find_chamber,
    perturbed_chamber_key,
    sigma_delta,
    volume,
)
from .laplace import (
    PiecewisePoly,
    check_jump_formula,
    default_wall_chamber,
    forward_laplace,
    inverse_laplace,
    jump,
    smoothness_class,
)
from .linalg import Q
from .oslomon import (
    NbcBasis,
    WallData,
    apply_differential_operator,
    cauchy_trace,
    express_in_B,
    iterated_residue,
    nbc_basis,
    os_relation,
    separate_variables,
    wall_residue,
    walls,
)

__all__ = [name for name in dir() if not name.startswith("_")]
