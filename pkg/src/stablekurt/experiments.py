"""Deterministic Monte Carlo harness for the kurtosis / tail-index study.

Every replicate draws from its own Philox stream keyed by
:func:`derive_replicate_seed`, so any row of a report can be regenerated on
its own (see :func:`replicate_sample`) and reports do not depend on how many
worker threads ran them.

Experiment kinds
----------------
scatter         g2 for random alpha ~ U[1, 2] and random n; no-intercept fit of g2 on (n, n*alpha)
growth-slopes   mean prefix-kurtosis curve per alpha (or nu), its slope and linearity
slope-vs-alpha  mean per-replicate growth slope per alpha and through-origin fit on 2 - alpha
variance-curve  var(b2) / n**2 per alpha at fixed n
mean-ratio      mean of g2 / n per alpha with random sample sizes
ordering        how often the heavier-tailed sample of a pair has larger g2 (and g2 / n)
skewness        mean and variance of g1 over an (alpha, n) grid
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .distributions import SeedSpec, standard_student_t, standard_symmetric_stable
from .errors import ParameterError, StableKurtError
from .moments import (
    GrowthCurve,
    compute_stats,
    growth_curve,
    regular_checkpoints,
    validate_checkpoints,
)
from .tail_inference import (
    LINEARITY_THRESHOLD,
    fit_growth_slope,
    linearity_diagnostic,
    slope_vs_alpha_regression,
)

# Fixed codes: part of the seed derivation, never renumber.
KIND_CODES = {
    "scatter": 1,
    "growth-slopes": 2,
    "slope-vs-alpha": 3,
    "variance-curve": 4,
    "mean-ratio": 5,
    "ordering": 6,
    "skewness": 7,
}
FAMILIES = ("stable", "student-t", "gaussian")

_GRID_BITS = 24
_REPLICATE_BITS = 32
_CHUNK = 250


def derive_replicate_seed(master_seed: int, kind: str, grid_index: int, replicate_index: int) -> SeedSpec:
    """Map a replicate to its own Philox stream.

    ``stream_id = kind_code << 56 | grid_index << 32 | replicate_index``.
    The packing is injective over the allowed ranges (grid < 2**24,
    replicate < 2**32), and Philox streams with different keys do not overlap.
    """
    if kind not in KIND_CODES:
        raise ParameterError(f"unknown experiment kind {kind!r}")
    if not 0 <= grid_index < 2**_GRID_BITS:
        raise ParameterError(f"grid_index out of range: {grid_index}")
    if not 0 <= replicate_index < 2**_REPLICATE_BITS:
        raise ParameterError(f"replicate_index out of range: {replicate_index}")
    stream = (KIND_CODES[kind] << (_GRID_BITS + _REPLICATE_BITS)) | (grid_index << _REPLICATE_BITS) | replicate_index
    return SeedSpec(master_seed, stream)


def _alpha_grid(lo, hi, step):
    return tuple(float(round(a, 10)) for a in np.arange(lo, hi + step / 2, step))


_DEFAULTS = {
    "scatter": dict(m=500, size_range=(200, 1500), alpha_range=(1.0, 2.0)),
    "growth-slopes": dict(m=5000, alphas=(1.0, 1.5, 2.0), nus=(3.0, 4.0, 5.0), checkpoints_to=500),
    "slope-vs-alpha": dict(m=5000, alphas=_alpha_grid(1.0, 2.0, 0.1), n=250),
    "variance-curve": dict(m=5000, alphas=_alpha_grid(1.0, 2.0, 0.1), n=500),
    "mean-ratio": dict(m=5000, alphas=(1.25, 1.5, 1.75), size_range=(200, 1500)),
    "ordering": dict(m=5000, alphas=(1.25, 1.75), size_range=(200, 1500)),
    "skewness": dict(m=5000, alphas=(1.5,), sizes=(100, 500)),
}
_STABLE_ONLY = {"scatter", "slope-vs-alpha", "ordering"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration of one experiment.

    Unset fields (``None``) take the kind's defaults in :meth:`resolved`:
    m = 5000 replicates, checkpoints 50, 100, ..., 500, n = 250 for
    slope-vs-alpha and n = 500 for variance-curve, random sizes on [200, 1500].
    Set either ``n`` (fixed size) or ``size_range`` (discrete uniform sizes).
    """

    kind: str
    family: str = "stable"
    alphas: tuple | None = None
    nus: tuple | None = None
    m: int | None = None
    n: int | None = None
    size_range: tuple | None = None
    checkpoints: tuple | None = None
    sizes: tuple | None = None
    alpha_range: tuple | None = None
    sigma: float = 1.0
    linearity_threshold: float = LINEARITY_THRESHOLD
    master_seed: int = 0

    def resolved(self) -> "ExperimentConfig":
        """Fill defaults and validate."""
        if self.kind not in KIND_CODES:
            raise ParameterError(f"unknown experiment kind {self.kind!r}; choose from {sorted(KIND_CODES)}")
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.kind in _STABLE_ONLY and self.family != "stable":
            raise ParameterError(f"kind {self.kind!r} requires the stable family")
        d = _DEFAULTS[self.kind]
        cfg = {f: getattr(self, f) for f in self.__dataclass_fields__}
        cfg["m"] = d["m"] if self.m is None else self.m

        if self.family == "stable" and self.kind != "scatter":
            cfg["alphas"] = tuple(float(a) for a in (self.alphas if self.alphas is not None else d["alphas"]))
            cfg["nus"] = None
        elif self.family == "student-t":
            cfg["nus"] = tuple(float(v) for v in (self.nus if self.nus is not None else d.get("nus", (3.0,))))
            cfg["alphas"] = None
        elif self.family == "gaussian":
            cfg["alphas"] = cfg["nus"] = None

        if self.kind == "scatter":
            cfg["alphas"] = None
            cfg["alpha_range"] = tuple(float(a) for a in (self.alpha_range or d["alpha_range"]))
        else:
            cfg["alpha_range"] = None

        if self.kind in ("growth-slopes", "slope-vs-alpha"):
            if self.checkpoints is None:
                stop = self.n if self.n is not None else d.get("n", d.get("checkpoints_to"))
                cfg["checkpoints"] = tuple(regular_checkpoints(stop, 50).tolist())
            else:
                cfg["checkpoints"] = tuple(int(k) for k in self.checkpoints)
            cfg["n"] = cfg["checkpoints"][-1] if self.n is None else int(self.n)
            cfg["size_range"] = None
        elif self.kind == "variance-curve":
            cfg["n"] = int(self.n if self.n is not None else d["n"])
            cfg["size_range"] = cfg["checkpoints"] = None
        elif self.kind == "skewness":
            cfg["sizes"] = tuple(int(k) for k in (self.sizes or d["sizes"]))
            cfg["n"] = cfg["size_range"] = cfg["checkpoints"] = None
        else:
            if self.n is not None and self.size_range is None:
                cfg["n"] = int(self.n)
                cfg["size_range"] = None
            else:
                cfg["size_range"] = tuple(int(v) for v in (self.size_range or d["size_range"]))
                cfg["n"] = None
            cfg["checkpoints"] = None
        if self.kind != "skewness":
            cfg["sizes"] = None

        out = ExperimentConfig(**cfg)
        out._validate()
        return out

    def _validate(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise ParameterError(f"m must be a positive integer, got {self.m!r}")
        if self.m > 2**_REPLICATE_BITS:
            raise ParameterError("m too large for seed derivation")
        for a in self.alphas or ():
            if not 0.0 < a <= 2.0:
                raise ParameterError(f"alpha must be in (0, 2], got {a}")
        for v in self.nus or ():
            if not v > 0.0:
                raise ParameterError(f"nu must be > 0, got {v}")
        if self.alpha_range is not None:
            lo, hi = self.alpha_range
            if not 0.0 < lo <= hi <= 2.0:
                raise ParameterError(f"alpha_range must satisfy 0 < lo <= hi <= 2, got {self.alpha_range}")
        if self.size_range is not None:
            lo, hi = self.size_range
            if not 4 <= lo <= hi:
                raise ParameterError(f"size_range must satisfy 4 <= lo <= hi, got {self.size_range}")
        if self.n is not None and self.n < 4:
            raise ParameterError(f"n must be >= 4, got {self.n}")
        if self.sizes is not None and (len(self.sizes) == 0 or min(self.sizes) < 4):
            raise ParameterError("sizes must be a non-empty list of counts >= 4")
        if self.checkpoints is not None:
            cp = validate_checkpoints(self.checkpoints, self.n)
            if cp.size < 3:
                raise ParameterError("growth kinds need at least 3 checkpoints")
        if self.kind == "ordering" and len(self.alphas) != 2:
            raise ParameterError("ordering needs exactly two alphas")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        SeedSpec(self.master_seed)

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        if "kind" not in data:
            raise ParameterError("config needs a 'kind'")
        vals = {k: (tuple(v) if isinstance(v, list) else v) for k, v in data.items()}
        return cls(**vals)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    columns: list
    rows: list
    summary: dict
    runtime: dict = field(default_factory=dict)

    def rows_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def summary_json(self) -> str:
        doc = {"config": self.config.to_dict(), "package_version": __version__, "summary": self.summary}
        return json.dumps(doc, indent=2) + "\n"

    def figure_csvs(self) -> dict:
        return _FIGURES[self.config.kind](self)

    def write(self, outdir) -> list:
        """Write replicates.csv, summary.json, runtime.json and figure CSVs; return paths."""
        os.makedirs(outdir, exist_ok=True)
        files = {"replicates.csv": self.rows_csv(), "summary.json": self.summary_json()}
        files.update(self.figure_csvs())
        files["runtime.json"] = json.dumps(self.runtime, indent=2) + "\n"
        paths = []
        for name, text in files.items():
            path = os.path.join(outdir, name)
            with open(path, "w", newline="") as fh:
                fh.write(text)
            paths.append(path)
        return paths


def _grid(cfg: ExperimentConfig) -> list:
    """Parameter value per grid index."""
    if cfg.kind == "scatter":
        return [None]
    if cfg.kind == "skewness":
        params = _family_params(cfg)
        return [(p, n) for p in params for n in cfg.sizes]
    return _family_params(cfg)


def _family_params(cfg):
    if cfg.family == "stable":
        return list(cfg.alphas)
    if cfg.family == "student-t":
        return list(cfg.nus)
    return [2.0]


def _draw(cfg: ExperimentConfig, param, n: int, rng: np.random.Generator) -> np.ndarray:
    if cfg.family == "stable":
        x = standard_symmetric_stable(param, n, rng)
    elif cfg.family == "student-t":
        x = standard_student_t(param, n, rng)
    else:
        x = rng.standard_normal(size=n)
    return cfg.sigma * x


def _replicate(cfg: ExperimentConfig, grid_index: int, replicate_index: int, param):
    """Return (seed, param, sample) for one replicate; draw order is fixed."""
    seed = derive_replicate_seed(cfg.master_seed, cfg.kind, grid_index, replicate_index)
    rng = seed.generator()
    if cfg.kind == "scatter":
        lo, hi = cfg.alpha_range
        param = float(rng.uniform(lo, hi))
    if cfg.kind == "skewness":
        param, n = param
    elif cfg.size_range is not None:
        n = int(rng.integers(cfg.size_range[0], cfg.size_range[1] + 1))
    else:
        n = cfg.n
    return seed, param, _draw(cfg, param, n, rng)


def replicate_sample(config: ExperimentConfig, grid_index: int, replicate_index: int):
    """Regenerate the exact sample behind one report row.

    Returns ``(seed, parameter, sample)``.
    """
    cfg = config.resolved()
    grid = _grid(cfg)
    if not 0 <= grid_index < len(grid):
        raise ParameterError(f"grid_index {grid_index} out of range")
    return _replicate(cfg, grid_index, replicate_index, grid[grid_index])


def _param_name(cfg):
    if cfg.family == "student-t":
        return "nu"
    return "alpha"


def _columns(cfg: ExperimentConfig) -> list:
    base = ["grid_index", "replicate", "stream_id"]
    p = _param_name(cfg)
    kind = cfg.kind
    if kind == "scatter":
        return base + ["alpha", "n", "g2", "b2"]
    if kind == "growth-slopes":
        return base + [p, "n"] + [f"g2_{k}" for k in cfg.checkpoints] + ["slope"]
    if kind == "slope-vs-alpha":
        return base + ["alpha", "n", "slope", "intercept"]
    if kind == "variance-curve":
        return base + [p, "n", "b2", "g2"]
    if kind in ("mean-ratio", "ordering"):
        return base + [p, "n", "g2", "ratio"]
    if kind == "skewness":
        return base + [p, "n", "g1"]
    raise AssertionError(kind)


def _row(cfg: ExperimentConfig, gi: int, ri: int, param) -> tuple:
    seed, param, x = _replicate(cfg, gi, ri, param)
    head = (gi, ri, seed.stream_id)
    kind = cfg.kind
    if kind in ("growth-slopes", "slope-vs-alpha"):
        curve = growth_curve(x, cfg.checkpoints)
        fit = fit_growth_slope(curve)
        if kind == "slope-vs-alpha":
            return head + (param, x.size, fit.slope, fit.intercept)
        return head + (param, x.size) + tuple(curve.g2_values.tolist()) + (fit.slope,)
    s = compute_stats(x)
    if kind == "scatter":
        return head + (param, s.n, s.g2, s.b2)
    if kind == "variance-curve":
        return head + (param, s.n, s.b2, s.g2)
    if kind in ("mean-ratio", "ordering"):
        return head + (param, s.n, s.g2, s.g2 / s.n)
    if kind == "skewness":
        return head + (param, s.n, s.g1)
    raise AssertionError(kind)


def _run_chunk(cfg, gi, param, start, stop):
    rows = []
    for ri in range(start, stop):
        try:
            rows.append(_row(cfg, gi, ri, param))
        except StableKurtError as exc:
            seed = derive_replicate_seed(cfg.master_seed, cfg.kind, gi, ri)
            raise type(exc)(
                f"{exc} (kind={cfg.kind}, grid_index={gi}, replicate={ri}, "
                f"master_seed={seed.master_seed}, stream_id={seed.stream_id})"
            ) from exc
    return rows


def run_experiment(
    config: ExperimentConfig,
    workers: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> ExperimentReport:
    """Run all replicates of ``config`` and aggregate.

    Rows come back in (grid_index, replicate) order whatever ``workers`` is,
    and every aggregate is computed from that ordered table, so reports are
    byte-identical across worker counts.
    """
    cfg = config.resolved()
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    grid = _grid(cfg)
    tasks = [
        (gi, param, start, min(start + _CHUNK, cfg.m))
        for gi, param in enumerate(grid)
        for start in range(0, cfg.m, _CHUNK)
    ]
    t0 = time.perf_counter()
    rows = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = pool.map(lambda t: _run_chunk(cfg, *t), tasks)
        for done, chunk in enumerate(results, 1):
            rows.extend(chunk)
            if progress is not None:
                progress(done, len(tasks))
    summary = _SUMMARIES[cfg.kind](cfg, grid, rows)
    runtime = {
        "seconds": time.perf_counter() - t0,
        "workers": workers,
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    return ExperimentReport(cfg, _columns(cfg), rows, summary, runtime)


def _by_grid(rows, n_grid, col):
    out = [[] for _ in range(n_grid)]
    for r in rows:
        out[r[0]].append(r[col])
    return [np.array(v, dtype=float) for v in out]


def _mean_se(v: np.ndarray) -> tuple[float, float]:
    se = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else float("nan")
    return float(v.mean()), se


def _summary_scatter(cfg, grid, rows):
    alpha = np.array([r[3] for r in rows])
    n = np.array([r[4] for r in rows], dtype=float)
    g2 = np.array([r[5] for r in rows])
    no_int, *_ = np.linalg.lstsq(np.column_stack([n, n * alpha]), g2, rcond=None)
    with_int, *_ = np.linalg.lstsq(np.column_stack([np.ones_like(n), n, n * alpha]), g2, rcond=None)
    return {
        "regressors": ["n", "n*alpha"],
        "coefficients": [float(c) for c in no_int],
        "with_intercept": {
            "regressors": ["1", "n", "n*alpha"],
            "coefficients": [float(c) for c in with_int],
        },
        "expected": [1.0, -0.5],
    }


def _summary_growth(cfg, grid, rows):
    k = len(cfg.checkpoints)
    table = np.array([r[5:5 + k] for r in rows], dtype=float)
    gis = np.array([r[0] for r in rows])
    name = _param_name(cfg)
    out = []
    for gi, param in enumerate(grid):
        mean_curve = table[gis == gi].mean(axis=0)
        curve = GrowthCurve(np.array(cfg.checkpoints), mean_curve)
        fit = fit_growth_slope(curve)
        lin = linearity_diagnostic(curve, cfg.linearity_threshold)
        entry = {
            name: param,
            "checkpoints": list(cfg.checkpoints),
            "mean_g2": mean_curve.tolist(),
            "slope_fit": fit.to_dict(),
            "linearity": lin.to_dict(),
        }
        if cfg.family == "stable":
            entry["expected_slope"] = 1.0 - param / 2.0
        out.append(entry)
    return {"curves": out}


def _summary_slope_alpha(cfg, grid, rows):
    slopes = _by_grid(rows, len(grid), 5)
    per = []
    for a, s in zip(grid, slopes):
        mean, se = _mean_se(s)
        per.append({"alpha": a, "mean_slope": mean, "se": se, "expected_slope": 1.0 - a / 2.0})
    points = [(p["alpha"], p["mean_slope"]) for p in per]
    try:
        coef = slope_vs_alpha_regression(points)
    except ParameterError:
        coef = None
    return {"per_alpha": per, "through_origin_coefficient": coef}


def _summary_variance(cfg, grid, rows):
    b2 = _by_grid(rows, len(grid), 5)
    name = _param_name(cfg)
    per = []
    for p, v in zip(grid, b2):
        var = float(v.var(ddof=1)) if v.size > 1 else float("nan")
        per.append({name: p, "n": cfg.n, "mean_b2": float(v.mean()), "var_b2": var,
                    "var_b2_over_n2": var / cfg.n**2})
    return {"per_param": per}


def _summary_mean_ratio(cfg, grid, rows):
    ratio = _by_grid(rows, len(grid), 6)
    name = _param_name(cfg)
    per = []
    for p, v in zip(grid, ratio):
        mean, se = _mean_se(v)
        entry = {name: p, "mean_ratio": mean, "se": se}
        if name == "alpha":
            entry["expected"] = 1.0 - p / 2.0
        per.append(entry)
    return {"per_param": per}


def _summary_ordering(cfg, grid, rows):
    g2 = _by_grid(rows, 2, 5)
    ratio = _by_grid(rows, 2, 6)
    # the heavier-tailed sample has the smaller alpha; ties go to grid index 0
    heavy, light = (0, 1) if grid[0] <= grid[1] else (1, 0)
    return {
        "heavier_alpha": grid[heavy],
        "lighter_alpha": grid[light],
        "pairs": cfg.m,
        "fraction_correct_g2": float(np.mean(g2[heavy] > g2[light])),
        "fraction_correct_ratio": float(np.mean(ratio[heavy] > ratio[light])),
    }


def _summary_skewness(cfg, grid, rows):
    g1 = _by_grid(rows, len(grid), 5)
    name = _param_name(cfg)
    per = []
    for (p, n), v in zip(grid, g1):
        mean, se = _mean_se(v)
        per.append({name: p, "n": n, "mean_g1": mean, "se": se,
                    "var_g1": float(v.var(ddof=1)) if v.size > 1 else float("nan")})
    return {"per_point": per}


_SUMMARIES = {
    "scatter": _summary_scatter,
    "growth-slopes": _summary_growth,
    "slope-vs-alpha": _summary_slope_alpha,
    "variance-curve": _summary_variance,
    "mean-ratio": _summary_mean_ratio,
    "ordering": _summary_ordering,
    "skewness": _summary_skewness,
}


def _two_col(header, xs, ys) -> str:
    lines = [",".join(header)]
    lines += [f"{x!r},{y!r}" for x, y in zip(xs, ys)]
    return "\n".join(lines) + "\n"


def _plot_scatter(rep):
    n = [float(r[4]) for r in rep.rows]
    a = [r[3] for r in rep.rows]
    g2 = [r[5] for r in rep.rows]
    return {"scatter_n_g2.csv": _two_col(["n", "g2"], n, g2),
            "scatter_alpha_g2.csv": _two_col(["alpha", "g2"], a, g2)}


def _plot_growth(rep):
    cfg = rep.config
    name = _param_name(cfg)
    out = {}
    for c in rep.summary["curves"]:
        out[f"growth_{name}{c[name]!r}.csv"] = _two_col(
            ["n", "mean_g2"], [float(k) for k in c["checkpoints"]], c["mean_g2"])
    return out


def _plot_slope_alpha(rep):
    per = rep.summary["per_alpha"]
    return {"slope_vs_2_minus_alpha.csv": _two_col(
        ["two_minus_alpha", "mean_slope"], [2.0 - p["alpha"] for p in per], [p["mean_slope"] for p in per])}


def _plot_variance(rep):
    name = _param_name(rep.config)
    per = rep.summary["per_param"]
    return {"var_b2_over_n2.csv": _two_col(
        [name, "var_b2_over_n2"], [p[name] for p in per], [p["var_b2_over_n2"] for p in per])}


def _plot_mean_ratio(rep):
    name = _param_name(rep.config)
    per = rep.summary["per_param"]
    return {"mean_ratio.csv": _two_col([name, "mean_ratio"], [p[name] for p in per], [p["mean_ratio"] for p in per])}


def _plot_skewness(rep):
    name = _param_name(rep.config)
    out = {}
    params = sorted({p[name] for p in rep.summary["per_point"]})
    for val in params:
        pts = [p for p in rep.summary["per_point"] if p[name] == val]
        out[f"skewness_var_{name}{val!r}.csv"] = _two_col(
            ["n", "var_g1"], [float(p["n"]) for p in pts], [p["var_g1"] for p in pts])
    return out


_FIGURES = {
    "scatter": _plot_scatter,
    "growth-slopes": _plot_growth,
    "slope-vs-alpha": _plot_slope_alpha,
    "variance-curve": _plot_variance,
    "mean-ratio": _plot_mean_ratio,
    "ordering": lambda rep: {},
    "skewness": _plot_skewness,
}
