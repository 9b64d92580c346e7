"""Noncontextual per-photon assignments, and why none reproduces the GHZ parities.

A *local assignment* fixes, for each photon, one dichotomic value per setting:
six values total, each +1 or -1, independent of what is measured on the other
photons. Its prediction for a context is just the product of the three values
the context selects. There are 2**6 = 64 such assignments, few enough to
enumerate outright.

The quantum parity constraints for the GHZ state (derived in ``core``) are
product +1 for xxx and -1 for each of xyy, yxy, yyx. The product of the three
mixed-context predictions always equals the xxx prediction, because every
y-value enters exactly twice, so no assignment can satisfy all four. The same
enumeration gives the classical range of the Mermin combination: [-2, 2],
against 4 for the GHZ state.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import Context, MERMIN_CONTEXTS, Setting

#: Quantum parity targets for the four Mermin contexts of the GHZ state.
PARITY_TARGETS: dict[Context, int] = {
    MERMIN_CONTEXTS[0]: +1,  # xxx
    MERMIN_CONTEXTS[1]: -1,  # xyy
    MERMIN_CONTEXTS[2]: -1,  # yxy
    MERMIN_CONTEXTS[3]: -1,  # yyx
}

#: Slot order of the six stored values: (photon, setting) pairs.
SLOTS: tuple[tuple[int, Setting], ...] = tuple(
    (photon, setting) for photon in (1, 2, 3) for setting in (Setting.X, Setting.Y)
)


@dataclass(frozen=True)
class LocalAssignment:
    """Six dichotomic values, one per (photon, setting), in ``SLOTS`` order."""

    values: tuple[int, int, int, int, int, int]

    def __post_init__(self) -> None:
        if len(self.values) != 6 or any(v not in (-1, 1) for v in self.values):
            raise ValueError("a local assignment is six values, each +1 or -1")

    def value(self, photon: int, setting: Setting) -> int:
        """The stored value for one photon under one setting."""
        return self.values[SLOTS.index((photon, setting))]

    @classmethod
    def from_index(cls, index: int) -> "LocalAssignment":
        """Assignment number ``index`` in canonical binary order.

        Bit 5 down to bit 0 correspond to ``SLOTS`` left to right; a 0 bit
        means +1, a 1 bit means -1, so index 0 is the all-+1 assignment.
        """
        if not 0 <= index < 64:
            raise ValueError(f"assignment index must be in [0, 64), got {index}")
        return cls(tuple(-1 if (index >> (5 - k)) & 1 else 1 for k in range(6)))

    @property
    def index(self) -> int:
        return sum((1 << (5 - k)) for k, v in enumerate(self.values) if v == -1)


def enumerate_assignments() -> tuple[LocalAssignment, ...]:
    """All 64 assignments in canonical binary order (all-+1 first)."""
    return tuple(
        LocalAssignment(values) for values in product((1, -1), repeat=6)
    )


def predicted_product(assignment: LocalAssignment, context: Context) -> int:
    """The assignment's parity product for a context: a1[s1] * a2[s2] * a3[s3].

    Reads exactly three of the six values; the values a photon holds for the
    setting *not* chosen never enter.
    """
    result = 1
    for photon, setting in zip((1, 2, 3), context.settings):
        result *= assignment.value(photon, setting)
    return result


def constraints_satisfied(assignment: LocalAssignment) -> int:
    """How many of the four GHZ parity constraints the assignment meets (0..4)."""
    return sum(
        1
        for context, target in PARITY_TARGETS.items()
        if predicted_product(assignment, context) == target
    )


def satisfies_ghz_constraints(assignment: LocalAssignment) -> bool:
    """True iff all four parity constraints hold (no assignment achieves this)."""
    return constraints_satisfied(assignment) == 4


def mermin_combination(assignment: LocalAssignment) -> int:
    """P(xxx) - P(xyy) - P(yxy) - P(yyx) for this assignment."""
    xxx, xyy, yxy, yyx = (predicted_product(assignment, c) for c in MERMIN_CONTEXTS)
    return xxx - xyy - yxy - yyx


def max_mermin_lhv() -> int:
    """Maximum of the Mermin combination over all 64 assignments; equals 2."""
    return max(mermin_combination(a) for a in enumerate_assignments())


@dataclass(frozen=True)
class SearchSummary:
    """Results of the exhaustive search over all assignments."""

    num_assignments: int
    num_satisfying: int
    best_constraints_satisfied: int
    classical_mermin_max: int
    classical_mermin_min: int


def summarize_search() -> SearchSummary:
    """Enumerate all assignments and collect the headline numbers."""
    assignments = enumerate_assignments()
    satisfied_counts = [constraints_satisfied(a) for a in assignments]
    combinations = [mermin_combination(a) for a in assignments]
    return SearchSummary(
        num_assignments=len(assignments),
        num_satisfying=sum(1 for c in satisfied_counts if c == 4),
        best_constraints_satisfied=max(satisfied_counts),
        classical_mermin_max=max(combinations),
        classical_mermin_min=min(combinations),
    )
