"""Tail-index inference from sample kurtosis and the empirical characteristic function.

For symmetric stable data the excess kurtosis grows linearly with sample size,
``E(g2) ~ (1 - alpha/2) * n``, which gives the moment estimator
``alpha_hat = 2 * (1 - g2 / n)``.  The growth-slope helpers fit that linear
trend on prefix kurtosis curves, and :func:`kogon_williams` gives an
independent estimate from the empirical characteristic function.
"""

from __future__ import annotations

import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .distributions import as_seed
from .errors import (
    DegenerateSampleError,
    InsufficientDataError,
    NumericDomainError,
    ParameterError,
)
from .moments import MIN_SAMPLE_SIZE, GrowthCurve, _as_sample, compute_stats

ALPHA_MIN = 0.01
ALPHA_MAX = 2.0

#: stable_like cut on the R^2 gain of a quadratic over a linear fit
LINEARITY_THRESHOLD = 0.005

KW_T_GRID = np.round(np.arange(1, 11) * 0.1, 10)
# (q72 - q28) / 1.654 recovers sigma for symmetric stable laws
_FAMA_ROLL_DIVISOR = 1.654

_BOOTSTRAP_CHUNK = 250
_MAX_REDRAWS = 10


def _clamp(alpha_raw: float) -> tuple[float, bool]:
    alpha_hat = min(max(alpha_raw, ALPHA_MIN), ALPHA_MAX)
    return alpha_hat, alpha_hat != alpha_raw


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class _JsonMixin:
    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


@dataclass(frozen=True)
class AlphaEstimate(_JsonMixin):
    alpha_hat: float
    method: str
    n_used: int
    alpha_raw: float
    clamped: bool = False
    sigma_hat: float | None = None


@dataclass(frozen=True)
class SlopeFit(_JsonMixin):
    slope: float
    intercept: float
    r_squared: float
    residuals: np.ndarray = field(repr=False)

    def to_csv(self) -> str:
        res = np.asarray(self.residuals).tolist()
        header = ["slope", "intercept", "r_squared"] + [f"residual_{i}" for i in range(len(res))]
        row = [self.slope, self.intercept, self.r_squared] + res
        return ",".join(header) + "\n" + ",".join(repr(float(v)) for v in row) + "\n"


@dataclass(frozen=True)
class LinearityReport(_JsonMixin):
    linear_r2: float
    quad_r2: float
    quad_coeff: float
    quad_improvement: float
    threshold: float
    stable_like: bool

    def to_csv(self) -> str:
        d = self.to_dict()
        return ",".join(d) + "\n" + ",".join(repr(v) for v in d.values()) + "\n"


@dataclass(frozen=True)
class BootstrapResult(_JsonMixin):
    alpha_hat: float
    alpha_raw: float
    alpha_ci_low: float
    alpha_ci_high: float
    alpha_upper: float
    alpha_boot_median: float
    alpha_boot_se: float
    B: int
    level: float
    reject_alpha2: bool
    redraws: int = 0


@dataclass(frozen=True)
class EmpiricalCF:
    t_grid: np.ndarray
    modulus: np.ndarray
    log_log_modulus: np.ndarray


def alpha_from_kurtosis(g2: float, n: int) -> AlphaEstimate:
    """Invert ``E(g2) = (1 - alpha/2) * n``.

    >>> alpha_from_kurtosis(0.375 * 1000, 1000).alpha_hat
    1.25
    """
    if n < MIN_SAMPLE_SIZE:
        raise InsufficientDataError(f"need n >= {MIN_SAMPLE_SIZE}, got {n}")
    alpha_raw = 2.0 * (1.0 - g2 / n)
    alpha_hat, clamped = _clamp(alpha_raw)
    return AlphaEstimate(
        alpha_hat=alpha_hat, method="kurtosis-ratio", n_used=int(n),
        alpha_raw=alpha_raw, clamped=clamped,
    )


def alpha_from_sample(sample) -> AlphaEstimate:
    s = compute_stats(sample)
    return alpha_from_kurtosis(s.g2, s.n)


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, np.ndarray, float]:
    xm, ym = x.mean(), y.mean()
    xc, yc = x - xm, y - ym
    slope = float(xc @ yc / (xc @ xc))
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    ss_tot = float(yc @ yc)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(resid @ resid) / ss_tot
    return slope, intercept, resid, min(max(r2, 0.0), 1.0)


def fit_growth_slope(curve: GrowthCurve) -> SlopeFit:
    """Least-squares line (with intercept) of excess kurtosis on prefix size."""
    x = curve.checkpoints.astype(float)
    y = curve.g2_values
    if x.size < 3:
        raise ParameterError(f"need at least 3 checkpoints, got {x.size}")
    if np.ptp(x) == 0.0:
        raise ParameterError("checkpoint sizes have zero variance")
    slope, intercept, resid, r2 = _ols(x, y)
    return SlopeFit(slope=slope, intercept=intercept, r_squared=r2, residuals=resid)


def slope_vs_alpha_regression(points) -> float:
    """Through-origin coefficient of growth slope on ``2 - alpha``.

    Returns ~0.5 when slopes follow ``1 - alpha/2``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
        raise ParameterError("points must be a non-empty list of (alpha, slope) pairs")
    x = 2.0 - pts[:, 0]
    sxx = float(x @ x)
    if sxx == 0.0:
        raise ParameterError("regressor 2 - alpha is identically zero")
    return float(x @ pts[:, 1]) / sxx


def _r_squared(y, fitted):
    yc = y - y.mean()
    ss_tot = float(yc @ yc)
    if ss_tot == 0.0:
        return 1.0
    r = y - fitted
    return 1.0 - float(r @ r) / ss_tot


def linearity_diagnostic(curve: GrowthCurve, threshold: float = LINEARITY_THRESHOLD) -> LinearityReport:
    """Compare linear and quadratic fits of a growth curve.

    Stable samples give near-straight mean curves; Student-t with few degrees
    of freedom bends.  ``stable_like`` is true when the quadratic term buys an
    R^2 gain below ``threshold``.
    """
    x = curve.checkpoints.astype(float)
    y = curve.g2_values
    if x.size < 5:
        raise ParameterError(f"need at least 5 checkpoints, got {x.size}")
    scale = float(np.abs(x).max())
    u = x / scale
    lin = np.polynomial.polynomial.polyfit(u, y, 1)
    quad = np.polynomial.polynomial.polyfit(u, y, 2)
    r2_lin = _r_squared(y, np.polynomial.polynomial.polyval(u, lin))
    r2_quad = _r_squared(y, np.polynomial.polynomial.polyval(u, quad))
    improvement = max(r2_quad - r2_lin, 0.0)
    return LinearityReport(
        linear_r2=float(r2_lin),
        quad_r2=float(r2_quad),
        quad_coeff=float(quad[2] / scale**2),
        quad_improvement=float(improvement),
        threshold=float(threshold),
        stable_like=bool(improvement < threshold),
    )


def _row_excess_kurtosis(xb: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise g2 (same scaling as compute_stats) and a constant-row mask."""
    d = xb - xb.mean(axis=1, keepdims=True)
    scale = np.abs(d).max(axis=1, keepdims=True)
    constant = np.ptp(xb, axis=1) == 0.0
    scale[constant] = 1.0
    z2 = (d / scale) ** 2
    v2 = z2.mean(axis=1)
    v4 = (z2 * z2).mean(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        g2 = v4 / (v2 * v2) - 3.0
    return g2, constant


def bootstrap_alpha_test(sample, B: int = 1000, level: float = 0.05, seed=0) -> BootstrapResult:
    """Percentile bootstrap for ``alpha_raw = 2 * (1 - g2 / n)`` and a test of alpha < 2.

    H0: alpha = 2 is rejected when the ``1 - level`` percentile of the
    bootstrap ``alpha_raw`` values lies below 2.  Resample indices come from a
    single stream keyed by ``seed`` in fixed-size chunks, so the result is a
    function of ``(sample, B, level, seed)`` only.  Zero-variance resamples
    are redrawn (at most 10 times each).
    """
    x = _as_sample(sample)
    n = x.size
    if n < 50:
        raise ParameterError(f"bootstrap test needs n >= 50, got {n}")
    if isinstance(B, bool) or int(B) != B or B < 100:
        raise ParameterError(f"B must be an integer >= 100, got {B}")
    if not 0.0 < level < 0.5:
        raise ParameterError(f"level must be in (0, 0.5), got {level}")
    B = int(B)
    base = compute_stats(x)
    point = alpha_from_kurtosis(base.g2, n)

    rng = as_seed(seed).generator()
    g2 = np.empty(B)
    redraws = 0
    for start in range(0, B, _BOOTSTRAP_CHUNK):
        stop = min(start + _BOOTSTRAP_CHUNK, B)
        idx = rng.integers(0, n, size=(stop - start, n))
        g2_chunk, constant = _row_excess_kurtosis(x[idx])
        for row in np.flatnonzero(constant):
            for _ in range(_MAX_REDRAWS):
                redraws += 1
                g2_row, const_row = _row_excess_kurtosis(x[rng.integers(0, n, size=(1, n))])
                if not const_row[0]:
                    g2_chunk[row] = g2_row[0]
                    break
            else:
                raise DegenerateSampleError(
                    f"bootstrap resample {start + row} stayed degenerate after {_MAX_REDRAWS} redraws"
                )
        g2[start:stop] = g2_chunk

    alpha_boot = 2.0 * (1.0 - g2 / n)
    lo, hi, upper, med = np.quantile(alpha_boot, [level / 2, 1 - level / 2, 1 - level, 0.5])
    return BootstrapResult(
        alpha_hat=point.alpha_hat,
        alpha_raw=point.alpha_raw,
        alpha_ci_low=float(lo),
        alpha_ci_high=float(hi),
        alpha_upper=float(upper),
        alpha_boot_median=float(med),
        alpha_boot_se=float(alpha_boot.std(ddof=1)),
        B=B,
        level=float(level),
        reject_alpha2=bool(upper < 2.0),
        redraws=redraws,
    )


def empirical_cf(sample, t_grid=KW_T_GRID) -> EmpiricalCF:
    """Modulus of the empirical characteristic function and ``ln(-ln|phi|^2)``.

    Raises :class:`NumericDomainError` at the first grid point where
    ``|phi|^2`` is not strictly inside (0, 1).
    """
    x = _as_sample(sample)
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise ParameterError("t_grid must be positive and strictly increasing")
    tx = np.outer(t, x)
    re = np.cos(tx).mean(axis=1)
    im = np.sin(tx).mean(axis=1)
    mod2 = re * re + im * im
    for tk, m in zip(t.tolist(), mod2.tolist()):
        if not 0.0 < m < 1.0:
            raise NumericDomainError(f"|phi(t)|^2 = {m!r} outside (0, 1) at t = {tk}", t=tk)
    return EmpiricalCF(t_grid=t, modulus=np.sqrt(mod2), log_log_modulus=np.log(-np.log(mod2)))


def kogon_williams(sample, t_grid=KW_T_GRID) -> AlphaEstimate:
    """Characteristic-function regression estimate of alpha and sigma.

    Symmetric variant: data are centred at the median, standardised by the
    quantile scale ``(q72 - q28) / 1.654``, then
    ``ln(-ln|phi(t)|^2) = ln(2 sigma^alpha) + alpha * ln(t)``
    is fitted by least squares over ``t_grid``.
    """
    x = _as_sample(sample)
    n = x.size
    if n < 100:
        raise InsufficientDataError(f"Kogon-Williams needs n >= 100, got {n}")
    q28, med, q72 = np.quantile(x, [0.28, 0.5, 0.72])
    sigma0 = (q72 - q28) / _FAMA_ROLL_DIVISOR
    if not sigma0 > 0.0:
        raise DegenerateSampleError("quantile scale is zero (sample is degenerate)")
    ecf = empirical_cf((x - med) / sigma0, t_grid)
    alpha_raw, intercept, _, _ = _ols(np.log(ecf.t_grid), ecf.log_log_modulus)
    sigma_std = (np.exp(intercept) / 2.0) ** (1.0 / alpha_raw)
    alpha_hat, clamped = _clamp(alpha_raw)
    return AlphaEstimate(
        alpha_hat=alpha_hat, method="kogon-williams", n_used=n,
        alpha_raw=alpha_raw, clamped=clamped, sigma_hat=float(sigma_std * sigma0),
    )


def alpha_from_growth_slope(fit: SlopeFit, n_used: int) -> AlphaEstimate:
    """Tail index implied by a growth slope ``b ~ 1 - alpha/2``."""
    alpha_raw = 2.0 * (1.0 - fit.slope)
    alpha_hat, clamped = _clamp(alpha_raw)
    return AlphaEstimate(
        alpha_hat=alpha_hat, method="growth-slope", n_used=int(n_used),
        alpha_raw=alpha_raw, clamped=clamped,
    )
