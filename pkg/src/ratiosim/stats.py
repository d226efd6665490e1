"""Nonparametric statistics: percentile bootstrap, two-sample KS test,
ECDF, histogram binning, and summary moments."""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple

import numpy as np

from .rng import substream

__all__ = [
    "BootstrapConfig",
    "IntervalEstimate",
    "KsResult",
    "Ecdf",
    "SummaryStats",
    "bootstrap_mean_diff_ci",
    "ks_two_sample",
    "kolmogorov_sf",
    "ecdf",
    "histogram",
    "summary",
]


@dataclass(frozen=True)
class BootstrapConfig:
    resamples: int = 500
    confidence: float = 0.95
    seed: int = 0

    def __post_init__(self):
        if self.resamples < 1:
            raise ValueError(f"need at least one resample, got {self.resamples}")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"confidence must lie in (0, 1), got {self.confidence}")


@dataclass(frozen=True)
class IntervalEstimate:
    """Percentile bootstrap interval; ``point`` is the full-sample estimate."""

    lower: float
    upper: float
    point: float
    confidence: float


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    n1: int
    n2: int


def bootstrap_mean_diff_ci(pairs, cfg: BootstrapConfig) -> IntervalEstimate:
    """Percentile bootstrap CI for mean(AoR) - mean(RoA) over paired replications.

    Pairs are resampled jointly (with replacement) so the within-replication
    coupling of the two statistics is preserved.  The sign convention is
    fixed: positive values mean AoR exceeds RoA.
    """
    pairs = np.asarray(pairs, dtype=np.float64)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ValueError("pairs must be a sequence of (aor, roa) values")
    m = pairs.shape[0]
    if m < 2:
        raise ValueError("bootstrap needs at least two pairs")
    aor = pairs[:, 0]
    roa = pairs[:, 1]
    rng = substream(cfg.seed)
    idx = rng.integers(0, m, size=(cfg.resamples, m))
    diffs = aor[idx].mean(axis=1) - roa[idx].mean(axis=1)
    half = (1.0 - cfg.confidence) / 2.0
    lower, upper = np.quantile(diffs, [half, 1.0 - half])
    return IntervalEstimate(
        lower=float(lower),
        upper=float(upper),
        point=float(aor.mean() - roa.mean()),
        confidence=cfg.confidence,
    )


def kolmogorov_sf(lam: float) -> float:
    """Asymptotic KS survival function Q(lam) = 2 sum_j (-1)**(j-1) exp(-2 j^2 lam^2).

    The series is truncated once a term drops below 1e-12; Q -> 1 as lam -> 0.
    """
    if lam <= 1e-10:
        return 1.0
    total = 0.0
    sign = 1.0
    j = 1
    while True:
        term = np.exp(-2.0 * j * j * lam * lam)
        total += sign * term
        if term < 1e-12:
            break
        sign = -sign
        j += 1
    return min(1.0, max(0.0, 2.0 * total))


def _pooled_counts(xs: np.ndarray, ys: np.ndarray):
    """Distinct pooled values with per-sample multiplicities."""
    grid = np.unique(np.concatenate([xs, ys]))
    cx = np.diff(np.searchsorted(xs, grid, side="right"), prepend=0)
    cy = np.diff(np.searchsorted(ys, grid, side="right"), prepend=0)
    return grid, cx.astype(np.int64), cy.astype(np.int64)


def _exact_pvalue(cx, cy, h_obs: int, n1: int, n2: int) -> float:
    """P(D >= observed) over all label assignments of the pooled multiset.

    Counts, with exact integer arithmetic, the assignments whose ECDF gap
    stays strictly inside the band |i*n2 - j*n1| < h_obs at every distinct
    pooled value; the p-value is the complementary fraction.
    """
    dp = {0: 1}
    seen = 0
    for a, b in zip(cx, cy):
        c = int(a + b)
        seen += c
        new = defaultdict(int)
        for i, ways in dp.items():
            for t in range(0, min(c, n1 - i) + 1):
                j = i + t
                if seen - j > n2:
                    continue
                new[j] += ways * comb(c, t)
        dp = {
            j: w
            for j, w in new.items()
            if abs(j * n2 - (seen - j) * n1) < h_obs
        }
        if not dp:
            return 1.0
    inside = dp.get(n1, 0)
    total = comb(n1 + n2, n1)
    return float(Fraction(total - inside, total))


def ks_two_sample(x, y, method: str = "asymptotic") -> KsResult:
    """Two-sample Kolmogorov-Smirnov test.

    The statistic is the exact sup over pooled distinct values of
    |ECDF_x - ECDF_y| (ties handled by evaluating only at value
    boundaries).  ``method='asymptotic'`` uses the Kolmogorov distribution
    with the small-sample correction lam = (sqrt(ne) + 0.12 +
    0.11/sqrt(ne)) * D, ne = n1*n2/(n1+n2).  ``method='exact'`` computes
    the permutation p-value conditional on the pooled multiset and is
    available for n1*n2 <= 10**4.
    """
    xs = np.sort(np.asarray(x, dtype=np.float64))
    ys = np.sort(np.asarray(y, dtype=np.float64))
    n1, n2 = len(xs), len(ys)
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be nonempty")
    _, cx, cy = _pooled_counts(xs, ys)
    ix = np.cumsum(cx)
    iy = np.cumsum(cy)
    h = np.abs(ix * n2 - iy * n1)
    h_obs = int(h.max())
    d = h_obs / (n1 * n2)
    if method == "asymptotic":
        ne = n1 * n2 / (n1 + n2)
        lam = (np.sqrt(ne) + 0.12 + 0.11 / np.sqrt(ne)) * d
        p = kolmogorov_sf(float(lam))
    elif method == "exact":
        if n1 * n2 > 10_000:
            raise ValueError("exact p-value offered only for n1*n2 <= 10**4")
        p = 1.0 if h_obs == 0 else _exact_pvalue(cx, cy, h_obs, n1, n2)
    else:
        raise ValueError(f"unknown method {method!r}")
    return KsResult(statistic=d, p_value=p, n1=n1, n2=n2)


@dataclass(frozen=True, eq=False)
class Ecdf:
    """Right-continuous empirical distribution step function."""

    points: np.ndarray
    heights: np.ndarray

    def __call__(self, t: float) -> float:
        idx = int(np.searchsorted(self.points, t, side="right"))
        return 0.0 if idx == 0 else float(self.heights[idx - 1])


def ecdf(sample) -> Ecdf:
    """ECDF of a sample: distinct sorted points with cumulative heights."""
    arr = np.sort(np.asarray(sample, dtype=np.float64))
    if arr.size == 0:
        raise ValueError("sample is empty")
    points, counts = np.unique(arr, return_counts=True)
    heights = np.cumsum(counts) / arr.size
    heights[-1] = 1.0
    points.flags.writeable = False
    heights.flags.writeable = False
    return Ecdf(points=points, heights=heights)


def histogram(sample, bin_count: int):
    """Equal-width bins over [min, max], rightmost bin closed.

    Returns a list of (bin_left, bin_right, count); counts always sum to
    the sample size.
    """
    arr = np.asarray(sample, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("sample is empty")
    if bin_count < 1:
        raise ValueError(f"bin_count must be >= 1, got {bin_count}")
    counts, edges = np.histogram(arr, bins=bin_count)
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i]))
        for i in range(bin_count)
    ]


class SummaryStats(NamedTuple):
    mean: float
    variance: float | None
    minimum: float
    maximum: float


def summary(sample) -> SummaryStats:
    """Mean, unbiased (n-1) variance, min, max; variance is None for n = 1."""
    arr = np.asarray(sample, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("sample is empty")
    variance = float(arr.var(ddof=1)) if arr.size > 1 else None
    return SummaryStats(
        mean=float(arr.mean()),
        variance=variance,
        minimum=float(arr.min()),
        maximum=float(arr.max()),
    )
