"""Frequency distributions, CCDFs and log-log power-law fits.

Exponents come from ordinary least squares on (log10 m, log10 ccdf(m)) over
distinct values m. A CCDF falling as m^-(gamma - 1) gives gamma = 1 - slope.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .ingest import Catalog
from .netbuild import DataNetwork

KINDS = ("variable_occurrence", "variables_per_dataset", "degree", "sample")


class FitError(ValueError):
    """No window satisfied the fit criterion. Carries the best candidate found."""

    def __init__(self, message: str, best_window: tuple[int, int] | None = None, best_r2: float | None = None):
        super().__init__(message)
        self.best_window = best_window
        self.best_r2 = best_r2


@dataclass(frozen=True)
class FrequencyDistribution:
    counts: Mapping[int, int]
    kind: str = "sample"
    total_items: int = field(init=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if any(c < 1 for c in self.counts.values()):
            raise ValueError("counts must be >= 1")
        object.__setattr__(self, "counts", dict(sorted(self.counts.items())))
        object.__setattr__(self, "total_items", sum(self.counts.values()))

    @classmethod
    def from_values(cls, values: Iterable[int], kind: str = "sample") -> FrequencyDistribution:
        return cls(Counter(int(v) for v in values), kind)


@dataclass(frozen=True)
class CcdfPoints:
    """Distinct values ``m`` (ascending) with the fraction of items at or above each."""

    m: tuple[float, ...]
    ccdf: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.m) != len(self.ccdf):
            raise ValueError("m and ccdf lengths differ")
        if any(b <= a for a, b in zip(self.m, self.m[1:])):
            raise ValueError("m must be strictly ascending")
        if any(b >= a for a, b in zip(self.ccdf, self.ccdf[1:])):
            raise ValueError("ccdf must be strictly decreasing")
        if self.ccdf and not (0 < self.ccdf[-1] and self.ccdf[0] <= 1):
            raise ValueError("ccdf values must lie in (0, 1]")

    def __len__(self) -> int:
        return len(self.m)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "ccdf"])
        for m, p in zip(self.m, self.ccdf):
            w.writerow([_num(m), repr(float(p))])
        return buf.getvalue()


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


@dataclass(frozen=True)
class PowerLawFit:
    gamma: float
    slope: float
    intercept: float
    r_squared: float
    window: tuple[int, int]  # half-open index range into the fitted points
    m_range: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "window_start": self.window[0],
            "window_stop": self.window[1],
            "m_min": self.m_range[0],
            "m_max": self.m_range[1],
        }


@dataclass(frozen=True)
class TwoRegimeFit:
    head: PowerLawFit
    tail: PowerLawFit
    breakpoint: float
    break_index: int
    sse: float

    def to_dict(self) -> dict:
        return {
            "breakpoint": self.breakpoint,
            "break_index": self.break_index,
            "sse": self.sse,
            "head": self.head.to_dict(),
            "tail": self.tail.to_dict(),
        }


def variable_occurrence_distribution(catalog: Catalog) -> FrequencyDistribution:
    """How many labels are held by exactly m datasets, for each m."""
    if len(catalog) == 0:
        raise ValueError("empty catalog")
    return FrequencyDistribution.from_values((len(ids) for ids in catalog.index.values()), "variable_occurrence")


def variables_per_dataset_distribution(catalog: Catalog) -> FrequencyDistribution:
    if len(catalog) == 0:
        raise ValueError("empty catalog")
    return FrequencyDistribution.from_values((len(r.variables) for r in catalog.records), "variables_per_dataset")


def degree_distribution(network: DataNetwork) -> FrequencyDistribution:
    if network.n_nodes == 0:
        raise ValueError("empty network")
    return FrequencyDistribution.from_values(network.degrees(), "degree")


def ccdf(dist: FrequencyDistribution) -> CcdfPoints:
    if not dist.counts:
        raise ValueError("empty distribution")
    values = list(dist.counts)
    tail = dist.total_items
    out = []
    for v in values:
        out.append(tail / dist.total_items)
        tail -= dist.counts[v]
    return CcdfPoints(tuple(values), tuple(out))


def cumulative_share(dist: FrequencyDistribution, m: float) -> float:
    """Fraction of items whose value is at most ``m``."""
    if not dist.counts:
        raise ValueError("empty distribution")
    below = sum(c for v, c in dist.counts.items() if v <= m)
    return float(Fraction(below, dist.total_items))


def _log_points(points: CcdfPoints) -> tuple[np.ndarray, np.ndarray]:
    x = np.log10(np.asarray(points.m, dtype=float))
    y = np.log10(np.asarray(points.ccdf, dtype=float))
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("log-log fit needs m > 0 and ccdf > 0")
    return x, y


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Slope, intercept, R^2 and SSE of a least-squares line, two-pass centered."""
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx, syy, sxy = float(dx @ dx), float(dy @ dy), float(dx @ dy)
    slope = sxy / sxx
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    sse = float(resid @ resid)
    r2 = 1.0 - sse / syy if syy > 0 else 1.0
    return slope, intercept, min(max(r2, 0.0), 1.0), sse


def _make_fit(points: CcdfPoints, x: np.ndarray, y: np.ndarray, lo: int, hi: int) -> PowerLawFit:
    slope, intercept, r2, _ = _ols(x[lo:hi], y[lo:hi])
    return PowerLawFit(
        gamma=1.0 - slope,
        slope=slope,
        intercept=intercept,
        r_squared=r2,
        window=(lo, hi),
        m_range=(float(points.m[lo]), float(points.m[hi - 1])),
    )


def _window_r2(x: np.ndarray, y: np.ndarray, length: int) -> np.ndarray:
    """R^2 of the line fit for every contiguous window of ``length`` points."""
    # center globally to keep the running sums well conditioned
    x = x - x.mean()
    y = y - y.mean()
    zero = np.zeros(1)
    cx, cy = np.concatenate([zero, np.cumsum(x)]), np.concatenate([zero, np.cumsum(y)])
    cxx = np.concatenate([zero, np.cumsum(x * x)])
    cyy = np.concatenate([zero, np.cumsum(y * y)])
    cxy = np.concatenate([zero, np.cumsum(x * y)])

    def win(c: np.ndarray) -> np.ndarray:
        return c[length:] - c[:-length]

    sx, sy = win(cx), win(cy)
    sxx = win(cxx) - sx * sx / length
    syy = win(cyy) - sy * sy / length
    sxy = win(cxy) - sx * sy / length
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = np.where((sxx > 0) & (syy > 0), sxy * sxy / (sxx * syy), 0.0)
    return np.clip(r2, 0.0, 1.0)


def fit_power_law(points: CcdfPoints, r2_min: float = 0.97, min_window: int = 10) -> PowerLawFit:
    """Fit the longest contiguous window of points whose R^2 reaches ``r2_min``.

    Among windows of the longest qualifying length the highest R^2 wins, then
    the earliest start. The chosen window is reported on the result.
    """
    n = len(points)
    if min_window < 2:
        raise ValueError("min_window must be >= 2")
    if n < min_window:
        raise FitError(f"need at least {min_window} points, got {n}")
    x, y = _log_points(points)

    best: tuple[float, tuple[int, int]] | None = None
    for length in range(n, min_window - 1, -1):
        r2 = _window_r2(x, y, length)
        start = int(np.argmax(r2))  # first maximum gives the earliest start on ties
        if best is None or r2[start] > best[0]:
            best = (float(r2[start]), (start, start + length))
        if r2[start] >= r2_min:
            return _make_fit(points, x, y, start, start + length)
    assert best is not None
    raise FitError(
        f"no window of >= {min_window} points reaches R^2 >= {r2_min} "
        f"(best {best[0]:.4f} on {best[1]})",
        best_window=best[1],
        best_r2=best[0],
    )


def fit_two_regime(points: CcdfPoints, min_segment: int = 5) -> TwoRegimeFit:
    """Split the points into a head and a tail line, minimizing total squared residual.

    The head covers indices ``[0, b]`` and the tail ``[b, n)``: both segments
    share the break point. Every candidate ``b`` leaving each segment at least
    ``min_segment`` points is tried; the earliest split wins ties.
    """
    n = len(points)
    if min_segment < 2:
        raise ValueError("min_segment must be >= 2")
    if n < 2 * min_segment:
        raise FitError(f"need at least {2 * min_segment} points, got {n}")
    x, y = _log_points(points)

    best_b, best_sse = -1, np.inf
    for b in range(min_segment - 1, n - min_segment + 1):
        sse = _ols(x[: b + 1], y[: b + 1])[3] + _ols(x[b:], y[b:])[3]
        if sse < best_sse:
            best_b, best_sse = b, sse
    return TwoRegimeFit(
        head=_make_fit(points, x, y, 0, best_b + 1),
        tail=_make_fit(points, x, y, best_b, n),
        breakpoint=float(points.m[best_b]),
        break_index=best_b,
        sse=float(best_sse),
    )
