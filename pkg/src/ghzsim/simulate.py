"""Monte Carlo driver and statistical comparison against the Born predictions.

``run_contextual`` executes the lookup-table model at scale: every run draws
a fresh sheet (one Born-distributed entry per context, contexts in canonical
order), selects a context according to the run policy, reveals that entry and
tallies it. ``run_noncontextual`` is the control arm: it tallies what a fixed
per-photon assignment would produce under the same policies. ``compare``
measures a tally against the exact Born distributions with total-variation
distance and a Pearson chi-square over the Born support, and
``estimate_mermin`` turns a tally into an empirical Mermin combination.

Determinism: a run is fully determined by ``(config.seed, config)``. Variates
are consumed in row-major run order, 8 sheet draws per run, plus one extra
draw per run for the context choice under the uniform-random policy (the
context draw happens after the sheet draw). The vectorized implementation
consumes the stream identically to a per-run loop over ``sample_sheet`` and
``reveal``.

Partitioned execution: give partition ``i`` the derived stream seed
``derive_seed(master, i)`` and merge the per-partition tallies with
``merge_tallies``; the merged table is identical to running the partitions
sequentially in one process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .core import (
    ALL_CONTEXTS,
    Context,
    MERMIN_CONTEXTS,
    OUTCOMES_FOR_SETTING,
    StateVector,
    SystemOutcome,
    born_distribution,
    born_support,
    expand,
    outcome_parity_product,
)
from .lhv import LocalAssignment, predicted_product
from .rng import RandomStream
from .sheets import support_cumulative


@dataclass(frozen=True)
class FixedContext:
    """Every run measures the same context."""

    context: Context


@dataclass(frozen=True)
class UniformRandom:
    """Each run picks one of the 8 contexts uniformly at random."""


@dataclass(frozen=True)
class RoundRobin:
    """Run ``i`` measures context ``i mod 8`` in canonical order."""


Policy = Union[FixedContext, UniformRandom, RoundRobin]


def policy_token(policy: Policy) -> str:
    """Render a policy as a flag token: ``fixed:<ctx>``, ``uniform`` or ``round-robin``."""
    if isinstance(policy, FixedContext):
        return f"fixed:{policy.context.token}"
    if isinstance(policy, UniformRandom):
        return "uniform"
    if isinstance(policy, RoundRobin):
        return "round-robin"
    raise ValueError(f"unknown policy {policy!r}")


def policy_from_token(token: str) -> Policy:
    """Parse a policy token produced by ``policy_token``."""
    if token == "uniform":
        return UniformRandom()
    if token == "round-robin":
        return RoundRobin()
    if token.startswith("fixed:"):
        return FixedContext(Context.from_token(token[len("fixed:"):]))
    raise ValueError(
        f"unknown policy token {token!r}; expected fixed:<context>, uniform or round-robin"
    )


@dataclass(frozen=True)
class RunConfig:
    """Parameters of a simulation run."""

    runs: int
    seed: int
    policy: Policy
    tolerance: float = 0.01

    def __post_init__(self) -> None:
        if not isinstance(self.runs, int) or isinstance(self.runs, bool) or self.runs < 1:
            raise ValueError(f"runs must be a positive integer, got {self.runs!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not (
            0 <= self.seed < 2**64
        ):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.policy, (FixedContext, UniformRandom, RoundRobin)):
            raise ValueError(f"unknown policy {self.policy!r}")
        if not (0.0 < self.tolerance < 1.0):
            raise ValueError(f"tolerance must lie in (0, 1), got {self.tolerance!r}")


@dataclass(frozen=True)
class TallyTable:
    """Per-context outcome counts.

    Always carries the full schema: all 8 contexts, each with its 8
    basis-consistent outcomes in canonical order (zero counts included), so
    serialization is stable. Sparse input mappings are filled with zeros.
    """

    counts: Mapping[Context, Mapping[SystemOutcome, int]]

    def __post_init__(self) -> None:
        full: dict[Context, dict[SystemOutcome, int]] = {}
        for context in ALL_CONTEXTS:
            given = dict(self.counts.get(context, {}))
            row: dict[SystemOutcome, int] = {}
            for so in context.outcomes():
                count = given.pop(so, 0)
                if not isinstance(count, (int, np.integer)) or count < 0:
                    raise ValueError(f"counts must be nonnegative integers, got {count!r}")
                row[so] = int(count)
            if given:
                bad = next(iter(given))
                raise ValueError(
                    f"outcome {bad.token!r} is not basis-consistent with context "
                    f"{context.token!r}"
                )
            full[context] = row
        unknown = set(self.counts) - set(ALL_CONTEXTS)
        if unknown:
            raise ValueError(f"unknown context key {next(iter(unknown))!r}")
        object.__setattr__(self, "counts", full)

    @property
    def runs_per_context(self) -> dict[Context, int]:
        return {c: sum(row.values()) for c, row in self.counts.items()}

    @property
    def total_runs(self) -> int:
        return sum(self.runs_per_context.values())


def merge_tallies(*tallies: TallyTable) -> TallyTable:
    """Cellwise sum of tallies; commutative and associative."""
    merged: dict[Context, dict[SystemOutcome, int]] = {
        c: {so: 0 for so in c.outcomes()} for c in ALL_CONTEXTS
    }
    for tally in tallies:
        for context, row in tally.counts.items():
            for so, count in row.items():
                merged[context][so] += count
    return TallyTable(merged)


def _chosen_context_indices(
    policy: Policy, runs: int, context_draws: np.ndarray | None
) -> np.ndarray:
    if isinstance(policy, FixedContext):
        return np.full(runs, ALL_CONTEXTS.index(policy.context), dtype=np.int64)
    if isinstance(policy, RoundRobin):
        return np.arange(runs, dtype=np.int64) % 8
    assert context_draws is not None
    return (context_draws * 8).astype(np.int64)


def run_contextual(config: RunConfig, state: StateVector) -> TallyTable:
    """Tally ``config.runs`` runs of the lookup-table model.

    Each run draws a fresh sheet (entries for all 8 contexts, even though
    only one is revealed; re-using a sheet across runs would correlate
    trials), then tallies the entry of the policy-chosen context.
    """
    sampling = [
        support_cumulative(born_distribution(expand(state, c))) for c in ALL_CONTEXTS
    ]
    rng = RandomStream(config.seed)
    runs = config.runs
    uniform_policy = isinstance(config.policy, UniformRandom)
    width = 9 if uniform_policy else 8
    block = rng.uniforms(runs * width).reshape(runs, width)
    entry_indices = np.empty((runs, 8), dtype=np.int64)
    for j in range(8):
        _, cumulative = sampling[j]
        entry_indices[:, j] = np.searchsorted(cumulative, block[:, j], side="right")
    chosen = _chosen_context_indices(
        config.policy, runs, block[:, 8] if uniform_policy else None
    )

    counts: dict[Context, dict[SystemOutcome, int]] = {}
    for j, context in enumerate(ALL_CONTEXTS):
        outcomes, _ = sampling[j]
        revealed = entry_indices[chosen == j, j]
        tallies = np.bincount(revealed, minlength=len(outcomes))
        counts[context] = {so: int(n) for so, n in zip(outcomes, tallies)}
    return TallyTable(counts)


def _assignment_outcome(assignment: LocalAssignment, context: Context) -> SystemOutcome:
    # Values map back to outcome tokens through the parity encoding:
    # +1 -> H'/R, -1 -> V'/L.
    triple = tuple(
        OUTCOMES_FOR_SETTING[setting][0 if assignment.value(photon, setting) == 1 else 1]
        for photon, setting in zip((1, 2, 3), context.settings)
    )
    return SystemOutcome(triple)


def run_noncontextual(config: RunConfig, assignment: LocalAssignment) -> TallyTable:
    """Tally what a fixed per-photon assignment produces under the run policy.

    The outcome per context is deterministic; variates are consumed only for
    context selection under the uniform-random policy (one per run).
    """
    runs = config.runs
    if isinstance(config.policy, UniformRandom):
        draws = RandomStream(config.seed).uniforms(runs)
        chosen = _chosen_context_indices(config.policy, runs, draws)
    else:
        chosen = _chosen_context_indices(config.policy, runs, None)
    per_context = np.bincount(chosen, minlength=8)
    counts = {
        context: {_assignment_outcome(assignment, context): int(n)}
        for context, n in zip(ALL_CONTEXTS, per_context)
    }
    return TallyTable(counts)


def estimate_mermin(tally: TallyTable) -> tuple[float, float]:
    """Empirical Mermin combination and its standard error.

    Per Mermin context the parity products of the tallied outcomes are
    averaged; the combination is E(xxx) - E(xyy) - E(yxy) - E(yyx) and the
    standard error propagates the four independent per-context means
    (population variance of a +-1 variable: (1 - E^2) / n).

    Raises:
        ValueError: If a Mermin context has no runs, naming the context.
    """
    means = []
    variance_sum = 0.0
    runs_per_context = tally.runs_per_context
    for context in MERMIN_CONTEXTS:
        n = runs_per_context[context]
        if n < 1:
            raise ValueError(
                f"cannot estimate the Mermin combination: context {context.token!r} has no runs"
            )
        signed = sum(
            count * outcome_parity_product(so)
            for so, count in tally.counts[context].items()
        )
        mean = signed / n
        means.append(mean)
        variance_sum += (1.0 - mean * mean) / n
    value = means[0] - means[1] - means[2] - means[3]
    return value, math.sqrt(variance_sum)


@dataclass(frozen=True)
class ContextComparison:
    """Statistical record for one context; ``passed`` is None when not evaluated."""

    context: Context
    runs: int
    df: int
    tv: float | None
    chisq: float | None
    out_of_support: int
    passed: bool | None


@dataclass(frozen=True)
class ComparisonReport:
    """Per-context comparisons plus the overall verdict and Mermin estimate."""

    contexts: tuple[ContextComparison, ...]
    overall_pass: bool
    mermin_estimate: float | None
    mermin_stderr: float | None


def compare(tally: TallyTable, state: StateVector, config: RunConfig) -> ComparisonReport:
    """Measure a tally against the exact Born predictions.

    Per evaluated context (nonzero runs): total-variation distance between
    empirical frequencies and the Born distribution, and a Pearson chi-square
    over the Born support with df = |support| - 1. A context passes iff its
    TV distance is within ``config.tolerance`` and no count falls outside the
    Born support (one impossible outcome falsifies the model regardless of
    statistics, so it is a hard failure rather than part of the statistic).
    Contexts without runs are marked not evaluated and excluded; the overall
    verdict requires at least one evaluated context and all of them passing.
    """
    records: list[ContextComparison] = []
    for context in ALL_CONTEXTS:
        dist = born_distribution(expand(state, context))
        support = set(born_support(dist))
        df = len(support) - 1
        row = tally.counts[context]
        n = sum(row.values())
        if n == 0:
            records.append(ContextComparison(context, 0, df, None, None, 0, None))
            continue
        tv = 0.5 * sum(abs(row[so] / n - p) for so, p in dist.items())
        out_of_support = sum(count for so, count in row.items() if so not in support)
        chisq = sum(
            (row[so] - n * p) ** 2 / (n * p) for so, p in dist.items() if so in support
        )
        passed = tv <= config.tolerance and out_of_support == 0
        records.append(ContextComparison(context, n, df, tv, chisq, out_of_support, passed))

    evaluated = [r for r in records if r.passed is not None]
    overall = bool(evaluated) and all(r.passed for r in evaluated)
    runs_per_context = tally.runs_per_context
    if all(runs_per_context[c] > 0 for c in MERMIN_CONTEXTS):
        mermin_estimate, mermin_stderr = estimate_mermin(tally)
    else:
        mermin_estimate = mermin_stderr = None
    return ComparisonReport(tuple(records), overall, mermin_estimate, mermin_stderr)


def simulation_document(
    config: RunConfig, state: StateVector, tally: TallyTable, report: ComparisonReport
) -> dict:
    """JSON-ready document for a simulation: config echo, tallies, statistics.

    Key order is fixed so that serializing the document is byte-stable for
    identical inputs.
    """
    context_blocks = []
    for record in report.contexts:
        context = record.context
        dist = born_distribution(expand(state, context))
        outcomes = [
            {
                "outcome": so.token,
                "count": tally.counts[context][so],
                "frequency": (tally.counts[context][so] / record.runs)
                if record.runs
                else None,
                "probability": dist[so],
            }
            for so in context.outcomes()
        ]
        context_blocks.append(
            {
                "context": context.token,
                "runs": record.runs,
                "evaluated": record.passed is not None,
                "tv": record.tv,
                "chisq": record.chisq,
                "df": record.df,
                "out_of_support": record.out_of_support,
                "pass": record.passed,
                "outcomes": outcomes,
            }
        )
    return {
        "runs": config.runs,
        "seed": config.seed,
        "policy": policy_token(config.policy),
        "tolerance": config.tolerance,
        "contexts": context_blocks,
        "overall_pass": report.overall_pass,
        "mermin_estimate": report.mermin_estimate,
        "mermin_stderr": report.mermin_stderr,
    }


def simulation_csv_rows(
    config: RunConfig, state: StateVector, tally: TallyTable, report: ComparisonReport
) -> list[list[str]]:
    """Flat delimited form of a simulation: one row per (context, outcome)."""

    def cell(value: object) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    rows = [
        ["context", "outcome", "count", "frequency", "probability",
         "tv", "chisq", "df", "out_of_support", "pass"]
    ]
    for record in report.contexts:
        context = record.context
        dist = born_distribution(expand(state, context))
        for so in context.outcomes():
            count = tally.counts[context][so]
            frequency = count / record.runs if record.runs else None
            rows.append(
                [
                    context.token,
                    so.token,
                    cell(count),
                    cell(frequency),
                    cell(dist[so]),
                    cell(record.tv),
                    cell(record.chisq),
                    cell(record.df),
                    cell(record.out_of_support),
                    cell(record.passed),
                ]
            )
    return rows
