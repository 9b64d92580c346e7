"""Deterministic, splittable source of uniform variates.

The generator is fixed and documented so that results are bit-reproducible
across platforms and sessions:

  * Algorithm: PCG64, seeded through ``numpy.random.SeedSequence(seed)``.
  * Variates: IEEE-754 doubles in [0, 1), one 64-bit generator word each,
    via ``numpy.random.Generator.random``. Drawing a block of ``n`` variates
    consumes the stream exactly like ``n`` scalar draws, so vectorized and
    loop-based consumers see identical sequences.
  * Stream splitting: the child stream for partition ``index`` is seeded with
    the first 8 bytes (little-endian) of SHA-256 over the ASCII string
    ``"{seed}:{index}"``. Child streams are statistically independent of the
    parent and of each other.

A stream is single-owner: do not share one instance across concurrent
samplers; give each worker its own ``derive(index)`` child.
"""

from __future__ import annotations

import hashlib

import numpy as np

_U64 = 2**64


def _check_seed(seed: int) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ValueError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed < _U64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def derive_seed(seed: int, index: int) -> int:
    """Child seed for partition ``index``: SHA-256("{seed}:{index}")[:8], little-endian."""
    _check_seed(seed)
    if not isinstance(index, int) or isinstance(index, bool) or index < 0:
        raise ValueError(f"derivation index must be a nonnegative integer, got {index!r}")
    digest = hashlib.sha256(f"{seed}:{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


class RandomStream:
    """A seeded PCG64 stream of uniform doubles in [0, 1)."""

    __slots__ = ("_seed", "_generator", "_draws")

    def __init__(self, seed: int) -> None:
        self._seed = _check_seed(seed)
        self._generator = np.random.Generator(np.random.PCG64(seed))
        self._draws = 0

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def draws(self) -> int:
        """Number of variates consumed so far."""
        return self._draws

    def uniform(self) -> float:
        """Next variate."""
        self._draws += 1
        return float(self._generator.random())

    def uniforms(self, n: int) -> np.ndarray:
        """Next ``n`` variates as a float64 array; equivalent to ``n`` scalar draws."""
        if n < 0:
            raise ValueError(f"cannot draw {n} variates")
        self._draws += n
        return self._generator.random(n)

    def derive(self, index: int) -> "RandomStream":
        """Independent child stream for partition ``index`` (see module docstring)."""
        return RandomStream(derive_seed(self._seed, index))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self._seed}, draws={self._draws})"
