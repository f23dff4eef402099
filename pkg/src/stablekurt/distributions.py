"""Seeded samplers for symmetric stable, Student-t and Gaussian variates.

The stable law uses the characteristic function

    log phi(t) = -sigma**alpha * |t|**alpha + i*mu*t        (beta = 0)

so alpha = 2 gives a Gaussian with variance ``2 * sigma**2`` and alpha = 1
gives a Cauchy with scale ``sigma``.  Other conventions (e.g. scaling so the
alpha = 2 case has unit variance) differ by a factor of sqrt(2) at alpha = 2.

Random streams come from numpy's counter-based Philox generator keyed by
``(master_seed, stream_id)``.  Distinct keys give independent streams, and the
same key always reproduces the same draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class SeedSpec:
    """Key for one reproducible random stream."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
            if not 0 <= int(value) <= _UINT64_MAX:
                raise ParameterError(f"{name} must fit in 64 unsigned bits, got {value}")
            object.__setattr__(self, name, int(value))

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def as_seed(seed) -> SeedSpec:
    """Accept a SeedSpec, a bare int, or a ``(master, stream)`` pair."""
    if isinstance(seed, SeedSpec):
        return seed
    if isinstance(seed, (tuple, list)) and len(seed) == 2:
        return SeedSpec(seed[0], seed[1])
    return SeedSpec(seed)


@dataclass(frozen=True)
class StableParams:
    """Symmetric stable parameters (alpha, beta, sigma, mu).

    Only beta = 0 is accepted.
    """

    alpha: float
    beta: float = 0.0
    sigma: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and 0.0 < self.alpha <= 2.0):
            raise ParameterError(f"alpha must be in (0, 2], got {self.alpha}")
        if not -1.0 <= self.beta <= 1.0:
            raise ParameterError(f"beta must be in [-1, 1], got {self.beta}")
        if self.beta != 0.0:
            raise ParameterError("only symmetric stable laws (beta = 0) are supported")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        if not math.isfinite(self.mu):
            raise ParameterError(f"mu must be finite, got {self.mu}")


@dataclass(frozen=True)
class StudentTParams:
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu > 0.0):
            raise ParameterError(f"nu must be > 0, got {self.nu}")


def _check_count(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ParameterError(f"n must be a non-negative integer, got {n!r}")
    return int(n)


def standard_symmetric_stable(alpha: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Chambers-Mallows-Stuck draws with sigma = 1, mu = 0, beta = 0.

    Draws all uniforms first, then all exponentials, so the output for a
    given generator state depends only on ``alpha`` and ``n``.
    """
    u = rng.uniform(-np.pi / 2, np.pi / 2, size=n)
    if alpha == 1.0:
        return np.tan(u)
    w = rng.standard_exponential(size=n)
    return (
        np.sin(alpha * u)
        / np.cos(u) ** (1.0 / alpha)
        * (np.cos((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha)
    )


def sample_symmetric_stable(params: StableParams, n: int, seed) -> np.ndarray:
    """Draw ``n`` i.i.d. symmetric stable variates.

    >>> x = sample_symmetric_stable(StableParams(alpha=1.5), 3, seed=1)
    >>> x.shape
    (3,)
    """
    n = _check_count(n)
    x = standard_symmetric_stable(params.alpha, n, as_seed(seed).generator())
    return params.sigma * x + params.mu


def sample_student_t(params: StudentTParams, n: int, seed) -> np.ndarray:
    """Student-t draws built as Z / sqrt(G / nu), G ~ chi-square(nu)."""
    n = _check_count(n)
    return standard_student_t(params.nu, n, as_seed(seed).generator())


def standard_student_t(nu: float, n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(size=n)
    g = rng.chisquare(nu, size=n)
    return z / np.sqrt(g / nu)


def sample_gaussian(sigma: float, n: int, seed) -> np.ndarray:
    """Zero-mean normal draws with standard deviation ``sigma``."""
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    n = _check_count(n)
    return sigma * as_seed(seed).generator().standard_normal(size=n)
