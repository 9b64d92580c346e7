"""Simulator and verification testbed for the three-photon GHZ experiment.

Exact Born predictions for every measurement context, a context-indexed
lookup-table model that reproduces them run by run, and the noncontextual
per-photon assignments that provably cannot.
"""

__version__ = "0.1.0"

from .core import (
    ALL_CONTEXTS,
    CONTEXT_TOKENS,
    HV_TRIPLES,
    MERMIN_CONTEXTS,
    Context,
    ExpansionTable,
    Outcome,
    Setting,
    StateVector,
    SystemOutcome,
    born_distribution,
    born_support,
    context_expectation,
    expand,
    ghz_state,
    mermin_value,
    outcome_parity_product,
    parity,
    single_photon_amplitude,
)
from .lhv import (
    LocalAssignment,
    enumerate_assignments,
    max_mermin_lhv,
    mermin_combination,
    predicted_product,
    satisfies_ghz_constraints,
    summarize_search,
)
from .rng import RandomStream, derive_seed
from .sheets import Sheet, SheetValidation, reveal, sample_sheet, validate_sheet
from .simulate import (
    ComparisonReport,
    FixedContext,
    RoundRobin,
    RunConfig,
    TallyTable,
    UniformRandom,
    compare,
    estimate_mermin,
    merge_tallies,
    policy_from_token,
    policy_token,
    run_contextual,
    run_noncontextual,
)

__all__ = [
    "ALL_CONTEXTS",
    "CONTEXT_TOKENS",
    "ComparisonReport",
    "Context",
    "ExpansionTable",
    "FixedContext",
    "HV_TRIPLES",
    "LocalAssignment",
    "MERMIN_CONTEXTS",
    "Outcome",
    "RandomStream",
    "RoundRobin",
    "RunConfig",
    "Setting",
    "Sheet",
    "SheetValidation",
    "StateVector",
    "SystemOutcome",
    "TallyTable",
    "UniformRandom",
    "born_distribution",
    "born_support",
    "compare",
    "context_expectation",
    "derive_seed",
    "enumerate_assignments",
    "estimate_mermin",
    "expand",
    "ghz_state",
    "max_mermin_lhv",
    "mermin_combination",
    "mermin_value",
    "merge_tallies",
    "outcome_parity_product",
    "parity",
    "policy_from_token",
    "policy_token",
    "predicted_product",
    "reveal",
    "run_contextual",
    "run_noncontextual",
    "sample_sheet",
    "satisfies_ghz_constraints",
    "single_photon_amplitude",
    "summarize_search",
    "validate_sheet",
]
