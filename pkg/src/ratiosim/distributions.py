"""Probability laws used by the simulation.

Three families cover everything: a truncated zeta (discrete Pareto) law for
publication counts per researcher, an empirical discrete law for citations
per publication, and the log-logistic family for ratio statistics, together
with the ratio-of-correlated-Paretos cdf it generalizes.

All distribution objects are immutable after construction; samplers take
the uniform draw as an argument so that randomness stays with the caller.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import expit, logit

__all__ = [
    "TruncatedZeta",
    "EmpiricalDiscrete",
    "LogLogisticParams",
    "ParetoRatioParams",
    "riemann_zeta",
    "build_truncated_zeta",
    "zeta_theoretical_mean",
    "sample_truncated_zeta",
    "build_empirical",
    "sample_empirical",
    "loglogistic_pdf",
    "loglogistic_logpdf",
    "loglogistic_cdf",
    "loglogistic_quantile",
    "loglogistic_mean",
    "pareto_ratio_cdf",
    "convert_logistic_form",
    "invert_logistic_form",
]

_ZETA_TOL = 1e-10
_CHUNK = 1 << 21


def riemann_zeta(gamma: float) -> float:
    """Evaluate sum_{k>=1} k**-gamma to absolute accuracy 1e-10.

    Partial summation up to K plus the midpoint of the integral bracket
    for the tail: integral_{K+1}^inf x**-gamma dx <= tail <=
    integral_K^inf x**-gamma dx.  K is grown until the bracket is
    narrower than the tolerance, so the midpoint is within 5e-11.

    Raises
    ------
    ValueError
        If ``gamma <= 1`` (within 1e-9), where the series diverges.
    """
    gamma = float(gamma)
    if not gamma > 1.0 + 1e-9:
        raise ValueError(f"zeta series requires gamma > 1, got {gamma}")
    # Bracket width behaves like K**-gamma, so this start value is close;
    # the loop below enforces the bound exactly.
    k_stop = max(16, int(10.0 ** (10.0 / gamma)) + 1)
    while True:
        tail_lo = (k_stop + 1.0) ** (1.0 - gamma) / (gamma - 1.0)
        tail_hi = float(k_stop) ** (1.0 - gamma) / (gamma - 1.0)
        if tail_hi - tail_lo < _ZETA_TOL:
            break
        k_stop *= 2
    chunk_sums = []
    for start in range(1, k_stop + 1, _CHUNK):
        stop = min(start + _CHUNK, k_stop + 1)
        chunk_sums.append(float(np.sum(np.arange(start, stop, dtype=np.float64) ** -gamma)))
    return math.fsum(chunk_sums) + 0.5 * (tail_lo + tail_hi)


def zeta_theoretical_mean(gamma: float) -> float:
    """Mean of the (untruncated) zeta law: zeta(gamma-1)/zeta(gamma), gamma > 2."""
    if not gamma > 2.0:
        raise ValueError(f"zeta mean is finite only for gamma > 2, got {gamma}")
    return riemann_zeta(gamma - 1.0) / riemann_zeta(gamma)


@dataclass(frozen=True, eq=False)
class TruncatedZeta:
    """Zeta law p(k) proportional to k**-gamma on k = 1..k_max, renormalized.

    ``pmf_table[i]`` is P(k = i+1); ``cum_table`` is its cumulative sum with
    the last entry forced to exactly 1.
    """

    gamma: float
    k_max: int
    pmf_table: np.ndarray
    cum_table: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(1, self.k_max + 1), self.pmf_table))


def build_truncated_zeta(gamma: float, k_max: int) -> TruncatedZeta:
    """Construct the truncated zeta law with exponent ``gamma`` and cutoff ``k_max``.

    The support starts at k = 1: a zero publication count has no density
    under the power law and would break the citations/publications ratio.
    """
    gamma = float(gamma)
    k_max = int(k_max)
    if not gamma > 1.0:
        raise ValueError(f"truncated zeta requires gamma > 1, got {gamma}")
    if k_max < 1:
        raise ValueError(f"truncation cutoff must be >= 1, got {k_max}")
    weights = np.arange(1, k_max + 1, dtype=np.float64) ** -gamma
    pmf = weights / weights.sum()
    cum = np.cumsum(pmf)
    cum[-1] = 1.0
    pmf.flags.writeable = False
    cum.flags.writeable = False
    return TruncatedZeta(gamma=gamma, k_max=k_max, pmf_table=pmf, cum_table=cum)


def sample_truncated_zeta(dist: TruncatedZeta, uniform_draw):
    """Inverse-cdf sample: the k whose cumulative bracket contains the draw.

    Accepts a scalar in [0, 1) or an array of such draws; returns an int or
    an int64 array of the same shape.  Under a uniform input, P(k) equals
    ``pmf_table[k-1]`` exactly.
    """
    idx = np.searchsorted(dist.cum_table, uniform_draw, side="right")
    if np.ndim(uniform_draw) == 0:
        return int(idx) + 1
    return idx.astype(np.int64) + 1


@dataclass(frozen=True, eq=False)
class EmpiricalDiscrete:
    """Discrete law estimated from (value, count) rows of citation data."""

    values: np.ndarray
    counts: np.ndarray
    probs: np.ndarray
    cum: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def mean(self) -> float:
        return float(np.dot(self.values, self.probs))


def build_empirical(values_counts) -> EmpiricalDiscrete:
    """Build an :class:`EmpiricalDiscrete` from ``(value, count)`` pairs.

    Values must be distinct nonnegative integers and counts positive
    integers; probabilities are count/total.
    """
    rows = list(values_counts)
    if not rows:
        raise ValueError("empirical law needs at least one (value, count) row")
    values = np.array([v for v, _ in rows], dtype=np.int64)
    counts = np.array([c for _, c in rows], dtype=np.int64)
    if np.any(values < 0):
        raise ValueError("citation values must be nonnegative integers")
    if np.any(counts < 1):
        raise ValueError("counts must be positive integers")
    order = np.argsort(values, kind="stable")
    values = values[order]
    counts = counts[order]
    if np.any(np.diff(values) == 0):
        dup = int(values[np.flatnonzero(np.diff(values) == 0)[0]])
        raise ValueError(f"duplicate citation value {dup}")
    probs = counts / counts.sum()
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    for arr in (values, counts, probs, cum):
        arr.flags.writeable = False
    return EmpiricalDiscrete(values=values, counts=counts, probs=probs, cum=cum)


def sample_empirical(dist: EmpiricalDiscrete, uniform_draw):
    """Inverse-cdf sample from the empirical law (scalar or array draws)."""
    idx = np.searchsorted(dist.cum, uniform_draw, side="right")
    if np.ndim(uniform_draw) == 0:
        return int(dist.values[idx])
    return dist.values[idx]


@dataclass(frozen=True)
class LogLogisticParams:
    """Shape ``alpha`` and scale ``beta`` of a log-logistic law (both > 0)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0.0 and self.beta > 0.0):
            raise ValueError(
                f"log-logistic parameters must be positive, got "
                f"alpha={self.alpha}, beta={self.beta}"
            )


def loglogistic_logpdf(x, p: LogLogisticParams):
    """Log-density at x > 0, stable for extreme (x/beta)**alpha.

    log f = log(alpha) - log(x) + z - 2*softplus(z) with z = alpha*log(x/beta).
    """
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0):
        raise ValueError("log-density requires x > 0")
    z = p.alpha * np.log(x / p.beta)
    out = math.log(p.alpha) - np.log(x) + z - 2.0 * np.logaddexp(0.0, z)
    return float(out) if out.ndim == 0 else out


def loglogistic_pdf(x, p: LogLogisticParams):
    """Density (alpha/beta)(x/beta)**(alpha-1) / (1 + (x/beta)**alpha)**2, x >= 0."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise ValueError("log-logistic density is defined for x >= 0")
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    pos = x > 0.0
    out[pos] = np.exp(loglogistic_logpdf(x[pos], p))
    if p.alpha > 1.0:
        at_zero = 0.0
    elif p.alpha == 1.0:
        at_zero = 1.0 / p.beta
    else:
        at_zero = math.inf
    out[~pos] = at_zero
    return float(out[0]) if scalar else out


def loglogistic_cdf(x, p: LogLogisticParams):
    """Distribution function (x/beta)**alpha / (1 + (x/beta)**alpha), x >= 0."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise ValueError("log-logistic cdf is defined for x >= 0")
    with np.errstate(divide="ignore"):
        out = expit(p.alpha * np.log(x / p.beta))
    return float(out) if out.ndim == 0 else out


def loglogistic_quantile(q, p: LogLogisticParams):
    """Inverse cdf: beta * (q/(1-q))**(1/alpha) for q in [0, 1)."""
    q = np.asarray(q, dtype=np.float64)
    if np.any((q < 0.0) | (q >= 1.0)):
        raise ValueError("quantile level must lie in [0, 1)")
    with np.errstate(divide="ignore"):
        out = p.beta * np.exp(logit(q) / p.alpha)
    return float(out) if out.ndim == 0 else out


def loglogistic_mean(p: LogLogisticParams) -> float:
    """Mean (pi/alpha) * beta / sin(pi/alpha); finite only for alpha > 1."""
    if not p.alpha > 1.0:
        raise ValueError(
            f"log-logistic mean is infinite for alpha <= 1, got alpha={p.alpha}"
        )
    t = math.pi / p.alpha
    return t * p.beta / math.sin(t)


@dataclass(frozen=True)
class ParetoRatioParams:
    """Scales of the two correlated Pareto variables whose ratio is studied."""

    k1: float
    k2: float

    def __post_init__(self):
        if not (self.k1 > 0.0 and self.k2 > 0.0):
            raise ValueError(f"scales must be positive, got k1={self.k1}, k2={self.k2}")


def pareto_ratio_cdf(x, p: ParetoRatioParams):
    """cdf of the ratio of two correlated Paretos: 1 - k1/(x*k2 + k1).

    Identical to the log-logistic cdf with alpha = 1, beta = k1/k2 (the
    generalized-Pareto index-1 special case).
    """
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise ValueError("ratio cdf is defined for x >= 0")
    out = 1.0 - p.k1 / (x * p.k2 + p.k1)
    return float(out) if out.ndim == 0 else out


def convert_logistic_form(p: LogLogisticParams) -> tuple[float, float]:
    """(location, scale) = (log beta, 1/alpha) of the logistic law of log X.

    This is the parameterization most fitting software reports.
    """
    return math.log(p.beta), 1.0 / p.alpha


def invert_logistic_form(location: float, scale: float) -> LogLogisticParams:
    """Inverse of :func:`convert_logistic_form`."""
    if not scale > 0.0:
        raise ValueError(f"logistic scale must be positive, got {scale}")
    return LogLogisticParams(alpha=1.0 / scale, beta=math.exp(location))
