"""Sample moment statistics and prefix (cumulative) kurtosis curves.

Kurtosis here is Pearson's moment ratio with no small-sample correction::

    b2 = m4 / m2**2 = n * sum(d**4) / sum(d**2)**2,   d = x - mean(x)

It is algebraically bounded by ``1 <= b2 <= n`` for any non-constant sample,
so the ratio ``c = b2 / n`` always lies in (0, 1] even when the population
fourth moment is infinite.
"""

from __future__ import annotations

import io
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateSampleError, InsufficientDataError, ParameterError

MIN_SAMPLE_SIZE = 4


@dataclass(frozen=True)
class SampleStats:
    n: int
    mean: float
    m2: float
    m3: float
    m4: float
    b2: float
    g2: float
    g1: float
    c: float

    def to_dict(self) -> dict:
        return asdict(self)


def _as_sample(sample) -> np.ndarray:
    x = np.asarray(sample, dtype=float)
    if x.ndim != 1:
        raise ParameterError(f"sample must be one-dimensional, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ParameterError("sample contains non-finite values")
    return x


def compute_stats(sample) -> SampleStats:
    """Central moments, kurtosis, excess kurtosis, skewness and b2/n.

    Two-pass evaluation about the sample mean, with deviations rescaled by
    their largest magnitude so tiny or huge data keep full precision.

    >>> compute_stats([1, 2, 3, 4, 5]).b2
    1.7
    """
    x = _as_sample(sample)
    n = x.size
    if n < MIN_SAMPLE_SIZE:
        raise InsufficientDataError(
            f"kurtosis needs at least {MIN_SAMPLE_SIZE} observations, got {n}"
        )
    if np.ptp(x) == 0.0:
        raise DegenerateSampleError("sample has zero variance")
    mean = x.mean()
    d = x - mean
    # powers of d/max|d| cannot under- or overflow
    scale = np.abs(d).max()
    z = d / scale
    z2 = z * z
    v2 = z2.mean()
    v3 = (z2 * z).mean()
    v4 = (z2 * z2).mean()
    # 1 <= b2 <= n holds exactly; clip the last-ulp rounding that can escape it
    b2 = min(max(v4 / (v2 * v2), 1.0), float(n))
    with np.errstate(over="ignore"):
        # raw moments of huge data may not be representable; b2 and g1 still are
        m2 = v2 * scale**2
        m3 = v3 * scale**3
        m4 = v4 * scale**4
    return SampleStats(
        n=n,
        mean=float(mean),
        m2=float(m2),
        m3=float(m3),
        m4=float(m4),
        b2=float(b2),
        g2=float(b2 - 3.0),
        g1=float(v3 / v2**1.5),
        c=float(b2 / n),
    )


def excess_kurtosis(sample) -> float:
    return compute_stats(sample).g2


def kurtosis_ratio(sample) -> float:
    """``b2 / n``, bounded above by 1 for every sample."""
    return compute_stats(sample).c


def skewness(sample) -> float:
    return compute_stats(sample).g1


@dataclass(frozen=True)
class GrowthCurve:
    """Excess kurtosis of the leading ``k`` observations for each checkpoint ``k``."""

    checkpoints: np.ndarray
    g2_values: np.ndarray

    def __post_init__(self):
        cp = np.asarray(self.checkpoints, dtype=np.int64)
        g2 = np.asarray(self.g2_values, dtype=float)
        if cp.ndim != 1 or cp.shape != g2.shape:
            raise ParameterError("checkpoints and g2_values must be 1-D and of equal length")
        object.__setattr__(self, "checkpoints", cp)
        object.__setattr__(self, "g2_values", g2)

    def __len__(self):
        return self.checkpoints.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,g2\n")
        for k, g in zip(self.checkpoints.tolist(), self.g2_values.tolist()):
            buf.write(f"{k},{g!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "GrowthCurve":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0].strip() != "n,g2":
            raise ParameterError("growth curve CSV must start with header 'n,g2'")
        ks, gs = [], []
        for ln in lines[1:]:
            k, g = ln.split(",")
            ks.append(int(k))
            gs.append(float(g))
        return cls(np.array(ks, dtype=np.int64), np.array(gs))


def validate_checkpoints(checkpoints, n: int) -> np.ndarray:
    cp = np.asarray(checkpoints)
    if cp.ndim != 1 or cp.size == 0:
        raise ParameterError("checkpoints must be a non-empty list of counts")
    if not np.issubdtype(cp.dtype, np.integer):
        if not np.all(cp == np.round(cp)):
            raise ParameterError("checkpoints must be integers")
    cp = cp.astype(np.int64)
    if np.any(np.diff(cp) <= 0):
        raise ParameterError("checkpoints must be strictly increasing")
    if cp[0] < MIN_SAMPLE_SIZE:
        raise ParameterError(f"first checkpoint must be >= {MIN_SAMPLE_SIZE}, got {cp[0]}")
    if cp[-1] > n:
        raise ParameterError(f"last checkpoint {cp[-1]} exceeds sample size {n}")
    return cp


def growth_curve(sample, checkpoints) -> GrowthCurve:
    """Excess kurtosis of each sample prefix ``sample[:k]``.

    Order matters: the curve follows the observations in the order given.
    A zero-variance prefix raises :class:`DegenerateSampleError` carrying the
    offending checkpoint.
    """
    x = _as_sample(sample)
    cp = validate_checkpoints(checkpoints, x.size)
    values = np.empty(cp.size)
    for i, k in enumerate(cp.tolist()):
        try:
            values[i] = compute_stats(x[:k]).g2
        except DegenerateSampleError as exc:
            raise DegenerateSampleError(
                f"prefix of length {k} has zero variance", checkpoint=k
            ) from exc
    return GrowthCurve(cp, values)


def regular_checkpoints(stop: int, step: int = 50, start: int | None = None) -> np.ndarray:
    """``start, start + step, ..., <= stop``; ``start`` defaults to ``step``."""
    start = step if start is None else start
    if step <= 0 or start < MIN_SAMPLE_SIZE or stop < start:
        raise ParameterError(f"cannot build checkpoints from start={start}, stop={stop}, step={step}")
    return np.arange(start, stop + 1, step, dtype=np.int64)
