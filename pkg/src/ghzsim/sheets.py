"""The contextual lookup-table model of the experiment.

In this model, each experimental run carries a *sheet*: one pre-assigned
outcome triple for every one of the 8 possible contexts, fixed before any
measurement is chosen. Per context, the entry is drawn from that context's
Born distribution, and entries for different contexts are drawn
independently (the experiment reveals exactly one context per run, so no
observable statistic depends on how the entries are coupled). Choosing a
measurement then merely looks up the corresponding entry: ``reveal`` reads
one slot and touches nothing else, which is the sense in which the model is
local by construction.

Sampling is inverse-transform over the Born support, with contexts visited
in canonical order, so a fixed stream seed yields a reproducible sheet.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .core import (
    ALL_CONTEXTS,
    SUPPORT_ATOL,
    Context,
    StateVector,
    SystemOutcome,
    born_distribution,
    expand,
)
from .rng import RandomStream


@dataclass(frozen=True)
class Sheet:
    """One pre-assigned outcome triple per context.

    Construction enforces the structural invariants: exactly the 8 contexts,
    each entry basis-consistent with its context. Whether every entry lies in
    the Born support of a given state is a property of that state; check it
    with ``validate_sheet``. Sheets produced by ``sample_sheet`` satisfy it
    by construction.
    """

    entries: Mapping[Context, SystemOutcome]

    def __post_init__(self) -> None:
        entries = dict(self.entries)
        if set(entries) != set(ALL_CONTEXTS):
            raise ValueError("a sheet needs exactly one entry per context (8 total)")
        for context, so in entries.items():
            if not isinstance(so, SystemOutcome) or not so.consistent_with(context):
                raise ValueError(
                    f"entry {so!r} is not basis-consistent with context {context.token!r}"
                )
        # Re-key in canonical order so iteration and serialization are stable.
        object.__setattr__(
            self, "entries", {c: entries[c] for c in ALL_CONTEXTS}
        )

    def to_token_dict(self) -> dict[str, str]:
        """Serializable form: context token -> outcome token triple."""
        return {c.token: so.token for c, so in self.entries.items()}


def support_cumulative(
    distribution: Mapping[SystemOutcome, float],
) -> tuple[tuple[SystemOutcome, ...], np.ndarray]:
    """Support outcomes and their cumulative probabilities, for inverse transform.

    Zero-probability outcomes are excluded outright, so they can never be
    selected. The final cumulative value is forced to exactly 1.0 (the Born
    sum can sit a few ulp below 1), which keeps every draw in range; the
    resulting per-outcome distortion is below the normalization tolerance.
    """
    support = [(so, p) for so, p in distribution.items() if p > SUPPORT_ATOL]
    outcomes = tuple(so for so, _ in support)
    cumulative = np.cumsum([p for _, p in support])
    cumulative[-1] = 1.0
    return outcomes, cumulative


def _draw(outcomes: tuple[SystemOutcome, ...], cumulative: np.ndarray, u: float) -> SystemOutcome:
    return outcomes[int(np.searchsorted(cumulative, u, side="right"))]


def sample_sheet(state: StateVector, rng: RandomStream) -> Sheet:
    """Draw a fresh sheet: one Born-distributed entry per context.

    Contexts are visited in canonical order, consuming exactly one variate
    each, so the result is fully determined by the stream state. Entries are
    independent across contexts.
    """
    entries: dict[Context, SystemOutcome] = {}
    for context in ALL_CONTEXTS:
        dist = born_distribution(expand(state, context))
        outcomes, cumulative = support_cumulative(dist)
        entries[context] = _draw(outcomes, cumulative, rng.uniform())
    return Sheet(entries)


def reveal(sheet: Sheet, chosen: Context) -> SystemOutcome:
    """Look up the pre-assigned entry for the chosen context.

    A pure read of one slot: no other entry is touched, and repeated calls
    return the same value.
    """
    return sheet.entries[chosen]


@dataclass(frozen=True)
class SheetEntryCheck:
    """Validation record for one context's entry."""

    context: Context
    present: bool
    basis_consistent: bool
    born_probability: float | None
    passed: bool


@dataclass(frozen=True)
class SheetValidation:
    """Per-context checks plus the overall verdict."""

    checks: tuple[SheetEntryCheck, ...]
    passed: bool


def validate_sheet(
    sheet: Union[Sheet, Mapping[Context, SystemOutcome]], state: StateVector
) -> SheetValidation:
    """Check a sheet (or raw entry mapping) against a state.

    Per context, reports whether an entry is present, basis-consistent, and
    has nonzero Born probability under ``state``; the overall verdict is the
    conjunction. Accepts a raw mapping so that structurally broken inputs
    (missing contexts, outcomes in the wrong basis) can still be reported on
    rather than rejected at construction.
    """
    entries = sheet.entries if isinstance(sheet, Sheet) else sheet
    checks: list[SheetEntryCheck] = []
    for context in ALL_CONTEXTS:
        so = entries.get(context)
        if so is None:
            checks.append(SheetEntryCheck(context, False, False, None, False))
            continue
        consistent = isinstance(so, SystemOutcome) and so.consistent_with(context)
        probability: float | None = None
        if consistent:
            probability = born_distribution(expand(state, context))[so]
        passed = consistent and probability is not None and probability > SUPPORT_ATOL
        checks.append(SheetEntryCheck(context, True, consistent, probability, passed))
    return SheetValidation(tuple(checks), all(c.passed for c in checks))
