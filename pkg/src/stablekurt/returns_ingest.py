"""Price CSV ingestion, log-returns, and the cumulative-kurtosis workflow on returns.

Price files need a header row, ISO-8601 dates, '.' as decimal point and ','
as delimiter.  Column names are configurable.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import logging
from dataclasses import dataclass

import numpy as np

from .errors import IngestionError, InsufficientDataError, ParameterError
from .moments import MIN_SAMPLE_SIZE, GrowthCurve, SampleStats, compute_stats, growth_curve
from .tail_inference import AlphaEstimate, alpha_from_kurtosis, kogon_williams

log = logging.getLogger(__name__)

DEFAULT_STEP = 10
MIN_WINDOW = 100


@dataclass(frozen=True)
class PriceSeries:
    dates: tuple
    closes: np.ndarray
    source: str = ""
    warnings: tuple = ()

    def __post_init__(self):
        closes = np.asarray(self.closes, dtype=float)
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != closes.size:
            raise ParameterError("dates and closes differ in length")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ParameterError("dates must be strictly increasing")
        if np.any(~(closes > 0)):
            raise ParameterError("all closes must be positive")

    def __len__(self):
        return self.closes.size

    def to_csv(self, date_column: str = "date", close_column: str = "close") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([date_column, close_column])
        for d, c in zip(self.dates, self.closes.tolist()):
            w.writerow([d.isoformat(), repr(c)])
        return buf.getvalue()


@dataclass(frozen=True)
class ReturnSeries:
    returns: np.ndarray
    dates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "returns", np.asarray(self.returns, dtype=float))
        object.__setattr__(self, "dates", tuple(self.dates))

    def __len__(self):
        return self.returns.size


def _parse_date(text: str) -> dt.date:
    text = text.strip()
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        return dt.datetime.fromisoformat(text).date()


def load_price_csv(path, date_column: str = "date", close_column: str = "close", source: str | None = None) -> PriceSeries:
    """Read, validate and date-sort a price file.

    Unsorted files are sorted and a warning is recorded on the result;
    duplicate dates, non-positive or unparseable closes raise
    :class:`IngestionError` naming the file line.
    """
    with open(path, newline="") as fh:
        text = fh.read()
    return parse_price_csv(text, date_column, close_column, source=str(path) if source is None else source)


def parse_price_csv(text: str, date_column: str = "date", close_column: str = "close", source: str = "") -> PriceSeries:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise IngestionError("price file is empty", line=1) from None
    missing = [c for c in (date_column, close_column) if c not in header]
    if missing:
        raise IngestionError(f"missing column(s) {missing}; header is {header}", line=1)
    di, ci = header.index(date_column), header.index(close_column)

    records = []
    seen = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(di, ci):
            raise IngestionError(f"line {line}: expected at least {max(di, ci) + 1} fields, got {len(row)}", line=line)
        try:
            date = _parse_date(row[di])
        except ValueError:
            raise IngestionError(f"line {line}: cannot parse date {row[di]!r}", line=line) from None
        try:
            close = float(row[ci])
        except ValueError:
            raise IngestionError(f"line {line}: cannot parse close {row[ci]!r}", line=line) from None
        if not np.isfinite(close) or close <= 0:
            raise IngestionError(f"line {line}: close must be positive, got {row[ci]!r}", line=line)
        if date in seen:
            raise IngestionError(f"line {line}: duplicate date {date} (first on line {seen[date]})", line=line)
        seen[date] = line
        records.append((date, close))

    warnings = []
    if any(b[0] < a[0] for a, b in zip(records, records[1:])):
        msg = f"{source or 'price file'}: dates not in ascending order; sorted"
        log.warning(msg)
        warnings.append(msg)
        records.sort(key=lambda r: r[0])
    return PriceSeries(
        dates=tuple(r[0] for r in records),
        closes=np.array([r[1] for r in records]),
        source=source,
        warnings=tuple(warnings),
    )


def log_returns(prices: PriceSeries) -> ReturnSeries:
    """``r_t = ln(p_t / p_{t-1})``, dated by the later observation."""
    if len(prices) < 2:
        raise InsufficientDataError(f"need at least 2 prices, got {len(prices)}")
    p = prices.closes
    return ReturnSeries(np.log(p[1:] / p[:-1]), prices.dates[1:])


def _values(returns) -> np.ndarray:
    if isinstance(returns, ReturnSeries):
        return returns.returns
    return np.asarray(returns, dtype=float)


def rolling_kurtosis(returns, step: int = DEFAULT_STEP) -> GrowthCurve:
    """Excess kurtosis of the first 4 + step, 4 + 2*step, ... returns.

    The full length is always the last checkpoint.
    """
    r = _values(returns)
    if step < 1:
        raise ParameterError(f"step must be >= 1, got {step}")
    if r.size < MIN_SAMPLE_SIZE + step:
        raise InsufficientDataError(f"need at least {MIN_SAMPLE_SIZE + step} returns, got {r.size}")
    cps = np.arange(MIN_SAMPLE_SIZE + step, r.size + 1, step)
    if cps[-1] != r.size:
        cps = np.append(cps, r.size)
    return growth_curve(r, cps)


@dataclass(frozen=True)
class WindowEstimate:
    start: int
    end: int
    kurtosis: AlphaEstimate
    kogon_williams: AlphaEstimate
    stats: SampleStats

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "kurtosis": self.kurtosis.to_dict(),
            "kogon_williams": self.kogon_williams.to_dict(),
            "stats": self.stats.to_dict(),
        }


def window_estimates(returns, windows) -> list:
    """Kurtosis-ratio and Kogon-Williams estimates on each ``[start, end)`` window.

    Indices are 0-based into the return series; each window needs at least
    100 returns.  Results are sorted by window start.
    """
    r = _values(returns)
    out = []
    for w in sorted((tuple(int(v) for v in w) for w in windows), key=lambda w: w):
        start, end = w
        if not 0 <= start < end <= r.size:
            raise ParameterError(f"window {w} out of range for {r.size} returns")
        if end - start < MIN_WINDOW:
            raise ParameterError(f"window {w} shorter than {MIN_WINDOW} returns")
        x = r[start:end]
        stats = compute_stats(x)
        out.append(WindowEstimate(
            start=start,
            end=end,
            kurtosis=alpha_from_kurtosis(stats.g2, stats.n),
            kogon_williams=kogon_williams(x),
            stats=stats,
        ))
    return out


def window_report_json(estimates, **extra) -> str:
    doc = dict(extra)
    doc["windows"] = [e.to_dict() for e in estimates]
    return json.dumps(doc, indent=2) + "\n"
