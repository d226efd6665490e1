"""Cohort simulation engine.

One replication simulates a cohort of n researchers: each draws a
publication count from the truncated zeta law, then one citation count per
publication from the empirical law.  The cohort yields its average of
ratios (AoR), ratio of averages (RoA), and the Pearson correlation between
the per-researcher ratios and their publication counts.  The experiment
repeats this m times with fully deterministic, order-independent random
streams.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import (
    EmpiricalDiscrete,
    TruncatedZeta,
    build_truncated_zeta,
    sample_empirical,
    sample_truncated_zeta,
)
from .rng import substream

__all__ = [
    "ExperimentConfig",
    "ResearcherOutcome",
    "CohortStats",
    "ReplicationSet",
    "researcher_stream",
    "simulate_researcher",
    "cohort_aor",
    "cohort_roa",
    "cohort_correlation",
    "run_replications",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment bit-for-bit."""

    n_researchers: int
    gamma: float
    k_max: int
    m_replications: int
    master_seed: int
    citation_law: EmpiricalDiscrete

    def __post_init__(self):
        if self.n_researchers < 1:
            raise ValueError(f"need at least one researcher, got {self.n_researchers}")
        if self.m_replications < 1:
            raise ValueError(f"need at least one replication, got {self.m_replications}")
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class ResearcherOutcome:
    publications: int
    citations: int
    ratio: float


@dataclass(frozen=True)
class CohortStats:
    """Per-replication summary; ``corr`` is None when a variance is zero."""

    aor: float
    roa: float
    corr: float | None
    n: int


@dataclass(frozen=True)
class ReplicationSet:
    """All m per-replication summaries plus the config that produced them."""

    stats: tuple
    config: ExperimentConfig = field(repr=False)

    def __len__(self) -> int:
        return len(self.stats)

    @property
    def aor_values(self) -> np.ndarray:
        return np.array([s.aor for s in self.stats])

    @property
    def roa_values(self) -> np.ndarray:
        return np.array([s.roa for s in self.stats])

    @property
    def correlations(self) -> list:
        """Per-replication correlations, None where undefined."""
        return [s.corr for s in self.stats]

    @property
    def defined_correlations(self) -> np.ndarray:
        return np.array([s.corr for s in self.stats if s.corr is not None])

    @property
    def undefined_correlation_count(self) -> int:
        return sum(1 for s in self.stats if s.corr is None)


def researcher_stream(master_seed: int, replication: int, researcher: int):
    """Philox stream for one researcher in one replication.

    Keyed by the avalanche mix of (master_seed, replication, researcher),
    so draws can never be reordered by parallel scheduling at either level.
    """
    return substream(master_seed, replication, researcher)


def simulate_researcher(
    zeta: TruncatedZeta, citations: EmpiricalDiscrete, rng_stream
) -> ResearcherOutcome:
    """Draw one researcher: publications ~ zeta, then i.i.d. citations per paper.

    Consumes 1 + publications uniforms from ``rng_stream``, in that order.
    """
    pubs = sample_truncated_zeta(zeta, rng_stream.random())
    cites = sample_empirical(citations, rng_stream.random(pubs))
    total = int(cites.sum())
    return ResearcherOutcome(publications=pubs, citations=total, ratio=total / pubs)


def cohort_aor(outcomes) -> float:
    """Average of ratios: mean over researchers of citations/publications."""
    if not outcomes:
        raise ValueError("cohort is empty")
    return float(np.mean([o.ratio for o in outcomes]))


def cohort_roa(outcomes) -> float:
    """Ratio of averages: total citations over total publications."""
    if not outcomes:
        raise ValueError("cohort is empty")
    total_c = sum(o.citations for o in outcomes)
    total_p = sum(o.publications for o in outcomes)
    return total_c / total_p


def cohort_correlation(outcomes) -> float | None:
    """Pearson correlation between ratios and publication counts.

    Returns None when either sample variance is zero (the correlation is
    undefined, not zero).
    """
    if len(outcomes) < 2:
        raise ValueError("correlation needs at least two researchers")
    x = np.array([o.ratio for o in outcomes])
    y = np.array([o.publications for o in outcomes], dtype=np.float64)
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(np.dot(xc, xc))
    syy = float(np.dot(yc, yc))
    if sxx == 0.0 or syy == 0.0:
        return None
    r = float(np.dot(xc, yc)) / np.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def _simulate_cohort(config: ExperimentConfig, zeta: TruncatedZeta, rep: int) -> CohortStats:
    outcomes = [
        simulate_researcher(
            zeta,
            config.citation_law,
            researcher_stream(config.master_seed, rep, i),
        )
        for i in range(config.n_researchers)
    ]
    corr = cohort_correlation(outcomes) if config.n_researchers >= 2 else None
    return CohortStats(
        aor=cohort_aor(outcomes),
        roa=cohort_roa(outcomes),
        corr=corr,
        n=config.n_researchers,
    )


def _replicate_block(config: ExperimentConfig, start: int, stop: int) -> list:
    zeta = build_truncated_zeta(config.gamma, config.k_max)
    return [_simulate_cohort(config, zeta, rep) for rep in range(start, stop)]


def run_replications(config: ExperimentConfig, workers: int | None = None) -> ReplicationSet:
    """Run the m-replication experiment described by ``config``.

    The result is a pure function of the config: replication ``j`` uses
    researcher streams keyed by (master_seed, j, i), so serial and parallel
    execution (any ``workers`` count) produce identical output.
    """
    m = config.m_replications
    if workers is None or workers <= 1:
        stats = _replicate_block(config, 0, m)
    else:
        block = -(-m // workers)
        bounds = [(lo, min(lo + block, m)) for lo in range(0, m, block)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_replicate_block, config, lo, hi) for lo, hi in bounds]
            stats = [s for f in futures for s in f.result()]
    return ReplicationSet(stats=tuple(stats), config=config)
