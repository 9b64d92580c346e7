"""Independent dense-matrix oracle for three-photon basis changes.

Everything here is deliberately self-contained: the 2x2 change-of-basis
matrices are written out as literal arrays and combined with np.kron, so the
oracle shares no code with the package under test.

Conventions (must stay in sync with the package's documented ones):
  * H/V product-basis index order: HHH, HHV, HVH, HVV, VHH, VHV, VVH, VVV
    (binary, H=0, photon 1 is the most significant bit).
  * Per-slot measured-outcome order: linear-45 gives (H', V'), circular gives
    (R, L); outcome triples are ordered the same binary way.
  * Row k of a 2x2 matrix holds <outcome_k|H>, <outcome_k|V>.
"""

import numpy as np

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# Rows: H', V'.  |H'> = (|H>+|V>)/sqrt2, |V'> = (|H>-|V>)/sqrt2.
LINEAR_45 = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) * _SQRT_HALF

# Rows: R, L.  |R> = (|H>+i|V>)/sqrt2, |L> = (|H>-i|V>)/sqrt2, so the bra
# rows carry the conjugated phases.
CIRCULAR = np.array([[1.0, -1.0j], [1.0, 1.0j]], dtype=complex) * _SQRT_HALF

_SLOT_MATRIX = {"x": LINEAR_45, "y": CIRCULAR}


def change_of_basis(context_token: str) -> np.ndarray:
    """Dense 8x8 matrix mapping H/V amplitudes to measured-basis amplitudes."""
    m1, m2, m3 = (_SLOT_MATRIX[ch] for ch in context_token)
    return np.kron(np.kron(m1, m2), m3)


def expand_amplitudes(hv_amplitudes: np.ndarray, context_token: str) -> np.ndarray:
    """Amplitude vector of the state in the measured basis of the context."""
    return change_of_basis(context_token) @ np.asarray(hv_amplitudes, dtype=complex)


def ghz_amplitudes() -> np.ndarray:
    """H/V amplitudes of (|HHH> + |VVV>)/sqrt2."""
    amps = np.zeros(8, dtype=complex)
    amps[0] = _SQRT_HALF
    amps[7] = _SQRT_HALF
    return amps
