"""Exact quantum predictions for the three-photon GHZ polarization experiment.

Each of the three photons is measured in one of two ways: linear polarization
at 45 degrees (setting ``x``, outcomes H'/V') or circular polarization
(setting ``y``, outcomes R/L). A choice of setting for every photon is a
*context*; there are eight. Expanding a three-photon state in the product
basis of a context gives one complex amplitude per outcome triple, and the
Born rule turns those amplitudes into outcome probabilities.

Phase conventions (fixed once, here):

    |H'> = (|H> + |V>) / sqrt2        |V'> = (|H> - |V>) / sqrt2
    |R>  = (|H> + i|V>) / sqrt2       |L>  = (|H> - i|V>) / sqrt2

Swapping R and L globally is an equivalent convention that leaves every
observable statistic unchanged; the one above is used throughout.

Canonical orders, used for indexing, iteration and serialization:

  * H/V product basis: HHH, HHV, HVH, HVV, VHH, VHV, VVH, VVV
    (binary with H=0, photon 1 the most significant position).
  * Contexts: xxx, xxy, xyx, xyy, yxx, yxy, yyx, yyy (binary with x=0).
  * Outcome triples within a context: per slot H' before V' and R before L,
    photon 1 the most significant position.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Mapping

import numpy as np

#: Tolerance for checks whose exact values are dyadic rationals times powers
#: of sqrt(1/2); double precision reproduces them to a few ulp, so 1e-12
#: leaves generous headroom.
NORM_ATOL = 1e-12

#: Probabilities at or below this are treated as exact zeros (outside the
#: Born support).
SUPPORT_ATOL = 1e-12

_SQRT_HALF = math.sqrt(0.5)


class Setting(Enum):
    """Per-photon measurement choice: X is 45-degree linear, Y is circular."""

    X = "x"
    Y = "y"

    @property
    def token(self) -> str:
        return self.value

    @classmethod
    def from_token(cls, token: str) -> "Setting":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"unknown setting token {token!r}; expected 'x' or 'y'") from None


class Outcome(Enum):
    """Single-photon measurement outcome. HP/VP belong to setting X, R/L to Y."""

    HP = "H'"
    VP = "V'"
    R = "R"
    L = "L"

    @property
    def token(self) -> str:
        return self.value

    @property
    def setting(self) -> Setting:
        return Setting.X if self in (Outcome.HP, Outcome.VP) else Setting.Y

    @classmethod
    def from_token(cls, token: str) -> "Outcome":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(
                f"unknown outcome token {token!r}; expected one of H' V' R L"
            ) from None


#: Outcomes of each setting in canonical (bit 0, bit 1) order.
OUTCOMES_FOR_SETTING: Mapping[Setting, tuple[Outcome, Outcome]] = {
    Setting.X: (Outcome.HP, Outcome.VP),
    Setting.Y: (Outcome.R, Outcome.L),
}

_PARITY = {Outcome.HP: 1, Outcome.VP: -1, Outcome.R: 1, Outcome.L: -1}


def parity(outcome: Outcome) -> int:
    """Dichotomic encoding of an outcome: H' and R map to +1, V' and L to -1."""
    return _PARITY[outcome]


@dataclass(frozen=True)
class Context:
    """An ordered choice of setting for photons 1, 2 and 3."""

    settings: tuple[Setting, Setting, Setting]

    def __post_init__(self) -> None:
        if len(self.settings) != 3 or not all(isinstance(s, Setting) for s in self.settings):
            raise ValueError("a context is an ordered triple of Setting values")

    @property
    def token(self) -> str:
        """Three-character string such as ``'yyx'``."""
        return "".join(s.token for s in self.settings)

    @classmethod
    def from_token(cls, token: str) -> "Context":
        if len(token) != 3:
            raise ValueError(
                f"invalid context token {token!r}; expected one of {' '.join(CONTEXT_TOKENS)}"
            )
        return cls(tuple(Setting.from_token(ch) for ch in token))

    def outcomes(self) -> tuple["SystemOutcome", ...]:
        """The 8 basis-consistent outcome triples, in canonical order."""
        slots = (OUTCOMES_FOR_SETTING[s] for s in self.settings)
        return tuple(SystemOutcome(triple) for triple in product(*slots))


@dataclass(frozen=True)
class SystemOutcome:
    """An ordered triple of single-photon outcomes, e.g. R L H'."""

    outcomes: tuple[Outcome, Outcome, Outcome]

    def __post_init__(self) -> None:
        if len(self.outcomes) != 3 or not all(isinstance(o, Outcome) for o in self.outcomes):
            raise ValueError("a system outcome is an ordered triple of Outcome values")

    @property
    def token(self) -> str:
        """Space-separated outcome tokens, e.g. ``\"R L H'\"``."""
        return " ".join(o.token for o in self.outcomes)

    @classmethod
    def from_token(cls, token: str) -> "SystemOutcome":
        parts = token.split()
        if len(parts) != 3:
            raise ValueError(f"invalid outcome token {token!r}; expected three outcome tokens")
        return cls(tuple(Outcome.from_token(p) for p in parts))

    def consistent_with(self, context: Context) -> bool:
        """True when each outcome belongs to the context's setting in its slot."""
        return all(o.setting is s for o, s in zip(self.outcomes, context.settings))


#: All 8 contexts in canonical order (lexicographic with x < y).
ALL_CONTEXTS: tuple[Context, ...] = tuple(
    Context(triple) for triple in product((Setting.X, Setting.Y), repeat=3)
)

CONTEXT_TOKENS: tuple[str, ...] = tuple(c.token for c in ALL_CONTEXTS)

#: The four contexts entering the Mermin combination, in that combination's order.
MERMIN_CONTEXTS: tuple[Context, ...] = tuple(
    Context.from_token(t) for t in ("xxx", "xyy", "yxy", "yyx")
)

#: Canonical H/V product-basis labels for the 8 state-vector slots.
HV_TRIPLES: tuple[str, ...] = tuple("".join(t) for t in product("HV", repeat=3))


class StateVector:
    """A normalized three-photon state in the H/V product basis.

    Amplitudes are stored in the canonical index order of ``HV_TRIPLES``.
    Construction rejects anything that is not a finite, unit-norm vector of
    8 complex amplitudes; nothing is renormalized silently, since a norm
    defect almost always means a construction bug upstream.
    """

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes: Iterable[complex]) -> None:
        arr = np.array(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                       dtype=complex)
        if arr.shape != (8,):
            raise ValueError(f"a state vector has exactly 8 amplitudes, got shape {arr.shape}")
        if not np.all(np.isfinite(arr.view(float))):
            raise ValueError("state amplitudes must be finite")
        norm_sq = float(np.sum(np.abs(arr) ** 2))
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise ValueError(f"state vector is not normalized: squared norm {norm_sq!r}")
        arr.setflags(write=False)
        self._amplitudes = arr

    @property
    def amplitudes(self) -> np.ndarray:
        """Read-only array of the 8 amplitudes in canonical order."""
        return self._amplitudes

    def amplitude(self, hv_token: str) -> complex:
        """Amplitude of one H/V basis triple, e.g. ``state.amplitude("HHH")``."""
        try:
            index = HV_TRIPLES.index(hv_token)
        except ValueError:
            raise ValueError(f"unknown basis triple {hv_token!r}") from None
        return complex(self._amplitudes[index])

    def __repr__(self) -> str:
        return f"StateVector({self._amplitudes.tolist()!r})"


def ghz_state() -> StateVector:
    """The state (|HHH> + |VVV>)/sqrt2."""
    amps = np.zeros(8, dtype=complex)
    amps[0] = _SQRT_HALF
    amps[7] = _SQRT_HALF
    return StateVector(amps)


# <outcome|hv> under the module's phase conventions. The bra rows conjugate
# the ket phases, hence <R|V> = -i/sqrt2.
_SINGLE_AMPLITUDES: Mapping[tuple[Outcome, str], complex] = {
    (Outcome.HP, "H"): complex(_SQRT_HALF, 0.0),
    (Outcome.HP, "V"): complex(_SQRT_HALF, 0.0),
    (Outcome.VP, "H"): complex(_SQRT_HALF, 0.0),
    (Outcome.VP, "V"): complex(-_SQRT_HALF, 0.0),
    (Outcome.R, "H"): complex(_SQRT_HALF, 0.0),
    (Outcome.R, "V"): complex(0.0, -_SQRT_HALF),
    (Outcome.L, "H"): complex(_SQRT_HALF, 0.0),
    (Outcome.L, "V"): complex(0.0, _SQRT_HALF),
}


def single_photon_amplitude(setting: Setting, outcome: Outcome, hv: str) -> complex:
    """Overlap <outcome|hv> for a single photon.

    Args:
        setting: The measurement the outcome belongs to.
        outcome: A measured outcome consistent with ``setting``.
        hv: ``"H"`` or ``"V"``.

    Raises:
        ValueError: If ``outcome`` does not belong to ``setting`` or ``hv``
            is not one of ``"H"``/``"V"``.
    """
    if outcome.setting is not setting:
        raise ValueError(
            f"outcome {outcome.token!r} is not an outcome of setting {setting.token!r}"
        )
    if hv not in ("H", "V"):
        raise ValueError(f"hv must be 'H' or 'V', got {hv!r}")
    return _SINGLE_AMPLITUDES[(outcome, hv)]


@dataclass(frozen=True)
class ExpansionTable:
    """Amplitudes of a state in the measured product basis of one context.

    ``amplitudes`` maps each of the context's 8 basis-consistent outcome
    triples (canonical order) to its complex expansion coefficient.
    """

    context: Context
    amplitudes: Mapping[SystemOutcome, complex]

    def __post_init__(self) -> None:
        expected = self.context.outcomes()
        if tuple(self.amplitudes.keys()) != expected:
            raise ValueError(
                "expansion entries must cover exactly the context's outcomes in canonical order"
            )
        norm_sq = sum(abs(a) ** 2 for a in self.amplitudes.values())
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise ValueError(f"expansion is not normalized: squared norm {norm_sq!r}")


def expand(state: StateVector, context: Context) -> ExpansionTable:
    """Expand a state in the measured basis of a context.

    The entry for an outcome triple is the sum, over the 8 H/V basis triples,
    of the state amplitude times the product of the three single-photon
    overlaps.

    Args:
        state: A normalized state (enforced by ``StateVector``).
        context: The measurement context to expand in.
    """
    entries: dict[SystemOutcome, complex] = {}
    for so in context.outcomes():
        total = 0j
        for index, triple in enumerate(HV_TRIPLES):
            term = complex(state.amplitudes[index])
            if term == 0j:
                continue
            for outcome, setting, ch in zip(so.outcomes, context.settings, triple):
                term *= single_photon_amplitude(setting, outcome, ch)
            total += term
        entries[so] = total
    return ExpansionTable(context, entries)


def born_distribution(table: ExpansionTable) -> dict[SystemOutcome, float]:
    """Outcome probabilities: the squared magnitude of each expansion entry."""
    return {so: abs(a) ** 2 for so, a in table.amplitudes.items()}


def born_support(distribution: Mapping[SystemOutcome, float]) -> tuple[SystemOutcome, ...]:
    """Outcomes with nonzero probability, in the distribution's order."""
    return tuple(so for so, p in distribution.items() if p > SUPPORT_ATOL)


def outcome_parity_product(so: SystemOutcome) -> int:
    """Product of the three single-outcome parities; always +1 or -1."""
    return parity(so.outcomes[0]) * parity(so.outcomes[1]) * parity(so.outcomes[2])


def context_expectation(state: StateVector, context: Context) -> float:
    """Expectation of the outcome parity product under the Born distribution."""
    dist = born_distribution(expand(state, context))
    return sum(p * outcome_parity_product(so) for so, p in dist.items())


def mermin_value(state: StateVector) -> float:
    """E(xxx) - E(xyy) - E(yxy) - E(yyx).

    Bounded by 4 in magnitude for any state; deterministic per-photon
    assignments can reach at most 2 (see the ``lhv`` module).
    """
    e = [context_expectation(state, c) for c in MERMIN_CONTEXTS]
    return e[0] - e[1] - e[2] - e[3]
