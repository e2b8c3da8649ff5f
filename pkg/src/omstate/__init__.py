"""Finite orthomodular lattices, two-valued states and Baer *-semigroups."""

__version__ = "0.1.0"

from .baer import (
    BaerStarSemigroup,
    ClosedProjectionLattice,
    IeStarSemigroup,
    closed_projections,
    extend_internal,
    extend_prestate,
    iestar_product,
    internalize_star,
    pc_as_oml,
    projections,
    semigroup_product,
    verify_baer_axioms,
    verify_bs1,
    verify_iestar_axioms,
)
from .config import RunConfig
from .coordinatize import (
    GeneratedSemigroup,
    ResiduatedFn,
    check_indecomposable_transfer,
    enumerate_full_s,
    generate_s0,
    iso_check,
    lift_homomorphism,
    prime_of,
    product_iso,
    psi_map,
    residual,
    sasaki,
    star_of,
    sub_semigroup_from_sublattice,
)
from .errors import *  # noqa: F401,F403
from .ie import (
    IeLattice,
    check_subvariety,
    coherent_states,
    ie_product,
    internalize,
    is_directly_indecomposable,
    verify_ie_axioms,
)
from .oml import (
    Oml,
    OmlSpec,
    boolean_algebra,
    build_oml,
    center,
    interval_oml,
    mo,
    mo2_times_2,
    orthogonal,
    product,
    verify_oml_axioms,
)
from .report import AxiomReport
from .states import StateClass, StateKind, StateMap, classify, enumerate_states, is_boolean_star_prestate
from .terms import (
    Equation,
    check_equation,
    evaluate,
    parse_equation,
    parse_term,
    registry,
    translate,
    valuation_correspondence_check,
    verify_translation_theorem,
)
