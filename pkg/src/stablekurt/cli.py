"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 on data or numeric errors.
Every output embeds the resolved configuration: JSON documents carry a
``config`` key, CSV outputs start with a ``# config: {...}`` comment line.
Output paths are not part of the embedded configuration, so piping to stdout
and writing with ``--out`` produce the same bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .distributions import (
    SeedSpec,
    StableParams,
    StudentTParams,
    sample_gaussian,
    sample_student_t,
    sample_symmetric_stable,
)
from .errors import IngestionError, ParameterError, StableKurtError
from .experiments import FAMILIES, KIND_CODES, ExperimentConfig, run_experiment
from .moments import compute_stats, growth_curve, regular_checkpoints
from .returns_ingest import (
    DEFAULT_STEP,
    load_price_csv,
    log_returns,
    rolling_kurtosis,
    window_estimates,
)
from .tail_inference import (
    LINEARITY_THRESHOLD,
    alpha_from_kurtosis,
    bootstrap_alpha_test,
    fit_growth_slope,
    kogon_williams,
    linearity_diagnostic,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _int_pair(text):
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    return vals


def _windows(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            a, b = part.split(":")
            out.append([int(a), int(b)])
        except ValueError:
            raise argparse.ArgumentTypeError(f"windows look like START:END,START:END, got {text!r}") from None
    return out


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stablekurt", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("simulate", help="draw a sample, one value per line")
    s.add_argument("--dist", choices=["stable", "t", "gaussian"], required=True)
    s.add_argument("--alpha", type=float)
    s.add_argument("--nu", type=float)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--mu", type=float, default=0.0)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=_seed, required=True)
    s.add_argument("--stream", type=_seed, default=0)
    s.add_argument("--out")

    s = sub.add_parser("stats", help="sample moment statistics as JSON")
    s.add_argument("input")
    s.add_argument("--out")

    s = sub.add_parser("estimate", help="tail-index estimate as JSON")
    s.add_argument("input")
    s.add_argument("--method", choices=["kurtosis", "kw"], default="kurtosis")
    s.add_argument("--out")

    s = sub.add_parser("growth", help="prefix kurtosis curve (CSV) plus slope/linearity (JSON)")
    s.add_argument("input")
    s.add_argument("--checkpoints", type=_int_list)
    s.add_argument("--step", type=int, default=50)
    s.add_argument("--threshold", type=float, default=LINEARITY_THRESHOLD)
    s.add_argument("--out", help="growth curve CSV (default stdout)")
    s.add_argument("--report", help="slope fit and linearity JSON")

    s = sub.add_parser("test", help="bootstrap test of alpha < 2")
    s.add_argument("input")
    s.add_argument("--bootstrap", type=int, default=1000, metavar="B")
    s.add_argument("--level", type=float, default=0.05)
    s.add_argument("--seed", type=_seed, required=True)
    s.add_argument("--out")

    s = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    s.add_argument("--kind", choices=sorted(KIND_CODES))
    s.add_argument("--config", help="JSON or TOML file with ExperimentConfig fields")
    s.add_argument("--family", choices=FAMILIES)
    s.add_argument("--alphas", type=_float_list)
    s.add_argument("--nus", type=_float_list)
    s.add_argument("--m", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--size-range", type=_int_pair)
    s.add_argument("--checkpoints", type=_int_list)
    s.add_argument("--sizes", type=_int_list)
    s.add_argument("--threshold", type=float)
    s.add_argument("--seed", type=_seed)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out", help="output directory (default: summary JSON on stdout)")

    s = sub.add_parser("ingest", help="log-return kurtosis workflow on a price CSV")
    s.add_argument("input")
    s.add_argument("--date-column", default="date")
    s.add_argument("--close-column", default="close")
    s.add_argument("--windows", type=_windows, default=[])
    s.add_argument("--step", type=int, default=DEFAULT_STEP)
    s.add_argument("--out", help="output directory (default: window report JSON on stdout)")
    return p


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _config(args, *exclude) -> dict:
    skip = {"out", "report", "threads", *exclude}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _config_line(cfg) -> str:
    return "# config: " + json.dumps(cfg, sort_keys=True) + "\n"


def read_sample(path: str) -> np.ndarray:
    """One value per line (first CSV field); ``#`` comments and a text header are skipped."""
    fh = sys.stdin if path == "-" else open(path)
    try:
        values = []
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            field = line.split(",")[0]
            try:
                values.append(float(field))
            except ValueError:
                if not values:
                    continue  # header
                raise IngestionError(f"{path}: line {lineno}: cannot parse {field!r}", line=lineno) from None
    finally:
        if fh is not sys.stdin:
            fh.close()
    return np.array(values)


def _cmd_simulate(args):
    if args.dist == "stable":
        if args.alpha is None:
            raise UsageError("simulate --dist stable needs --alpha")
        x = sample_symmetric_stable(StableParams(args.alpha, 0.0, args.sigma, args.mu), args.n, SeedSpec(args.seed, args.stream))
    elif args.dist == "t":
        if args.nu is None:
            raise UsageError("simulate --dist t needs --nu")
        x = sample_student_t(StudentTParams(args.nu), args.n, SeedSpec(args.seed, args.stream))
    else:
        x = sample_gaussian(args.sigma, args.n, SeedSpec(args.seed, args.stream))
    body = "".join(f"{v!r}\n" for v in x.tolist())
    _emit(_config_line(_config(args)) + body, args.out)


def _cmd_stats(args):
    doc = {"config": _config(args)}
    doc.update(compute_stats(read_sample(args.input)).to_dict())
    _emit(_json(doc), args.out)


def _cmd_estimate(args):
    x = read_sample(args.input)
    if args.method == "kw":
        est = kogon_williams(x)
    else:
        s = compute_stats(x)
        est = alpha_from_kurtosis(s.g2, s.n)
    doc = {"config": _config(args)}
    doc.update(est.to_dict())
    _emit(_json(doc), args.out)


def _cmd_growth(args):
    x = read_sample(args.input)
    checkpoints = args.checkpoints
    if checkpoints is None:
        checkpoints = regular_checkpoints(x.size, args.step).tolist()
    cfg = _config(args)
    cfg["checkpoints"] = list(checkpoints)
    curve = growth_curve(x, checkpoints)
    _emit(_config_line(cfg) + curve.to_csv(), args.out)
    if args.report:
        doc = {"config": cfg, "slope_fit": fit_growth_slope(curve).to_dict()}
        doc["linearity"] = (
            linearity_diagnostic(curve, args.threshold).to_dict() if len(curve) >= 5 else None
        )
        _emit(_json(doc), args.report)


def _cmd_test(args):
    res = bootstrap_alpha_test(read_sample(args.input), args.bootstrap, args.level, SeedSpec(args.seed))
    doc = {"config": _config(args)}
    doc.update(res.to_dict())
    _emit(_json(doc), args.out)


def _load_config_file(path: str) -> dict:
    with open(path, "rb") as fh:
        raw = fh.read()
    if path.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        return tomllib.loads(raw.decode())
    return json.loads(raw)


def _cmd_experiment(args):
    data = _load_config_file(args.config) if args.config else {}
    if isinstance(data.get("config"), dict):
        data = data["config"]  # accept a summary.json directly
    overrides = {
        "kind": args.kind, "family": args.family, "alphas": args.alphas, "nus": args.nus,
        "m": args.m, "n": args.n, "size_range": args.size_range, "checkpoints": args.checkpoints,
        "sizes": args.sizes, "linearity_threshold": args.threshold, "master_seed": args.seed,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if "kind" not in data:
        raise UsageError("experiment needs --kind (or a config file with 'kind')")
    if "master_seed" not in data:
        raise UsageError("experiment needs an explicit --seed (or master_seed in the config file)")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    cfg = ExperimentConfig.from_dict(data)

    interactive = sys.stderr.isatty()

    def progress(done, total):
        if interactive:
            print(f"\r[{cfg.kind}] {done}/{total} chunks", end="" if done < total else "\n", file=sys.stderr)
        else:
            print(f"[{cfg.kind}] {done}/{total} chunks", file=sys.stderr)

    report = run_experiment(cfg, workers=args.threads, progress=progress)
    if args.out:
        for path in report.write(args.out):
            print(path, file=sys.stderr)
    else:
        _emit(report.summary_json(), None)


def _cmd_ingest(args):
    prices = load_price_csv(args.input, args.date_column, args.close_column)
    returns = log_returns(prices)
    curve = rolling_kurtosis(returns, args.step)
    fit = fit_growth_slope(curve)
    est = window_estimates(returns, args.windows)
    cfg = _config(args)
    doc = {
        "config": cfg,
        "n_prices": len(prices),
        "n_returns": len(returns),
        "first_date": prices.dates[0].isoformat(),
        "last_date": prices.dates[-1].isoformat(),
        "warnings": list(prices.warnings),
        "growth_slope": fit.to_dict(),
        "windows": [e.to_dict() for e in est],
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _emit(_config_line(cfg) + curve.to_csv(), os.path.join(args.out, "growth.csv"))
        _emit(_json(doc), os.path.join(args.out, "windows.json"))
    else:
        _emit(_json(doc), None)


_COMMANDS = {
    "simulate": _cmd_simulate,
    "stats": _cmd_stats,
    "estimate": _cmd_estimate,
    "growth": _cmd_growth,
    "test": _cmd_test,
    "experiment": _cmd_experiment,
    "ingest": _cmd_ingest,
}


def main(argv=None) -> int:
    args = None
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (StableKurtError, OSError, json.JSONDecodeError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("line", "checkpoint", "t"):
            if getattr(exc, attr, None) is not None:
                err[attr] = getattr(exc, attr)
        if getattr(exc, "filename", None):
            err["input"] = exc.filename
        elif getattr(args, "input", None):
            err["input"] = args.input
        print(json.dumps(err), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
