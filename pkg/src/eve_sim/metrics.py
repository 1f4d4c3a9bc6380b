"""Ecological and topological statistics.

Per-epoch reports plus the analysis routines used on end-of-run populations:
Shannon diversity, a log-normal shape check on species abundances, the
species-area curve and cross-habitat genetic divergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from rapidfuzz.distance import Levenshtein
from rapidfuzz.process import cdist

from eve_sim.genome import Agent, species_partition
from eve_sim.network import (DisconnectedGraphError, HabitatNetwork, MigrationEvent,
                             characteristic_path_length, clustering_coefficient,
                             components_at)

CSV_COLUMNS = (
    "epoch", "best_fitness_mean", "mean_fitness_mean", "species_count", "shannon",
    "migrations", "accepted", "mean_weight", "clustering", "path_length_or_blank",
    "components", "feedback_active",
)


@dataclass
class EpochReport:
    epoch: int
    best_fitness: list[float]
    mean_fitness: list[float]
    species_count: int
    abundances: list[int]
    shannon: float
    migrations: int
    accepted: int
    mean_weight: float
    clustering: float
    path_length: float | None
    components: int
    feedback_active: bool
    effective_mutation_rates: list[float] = field(default_factory=list)
    events: list[MigrationEvent] = field(default_factory=list, repr=False)

    def row(self) -> dict:
        return {
            "epoch": self.epoch,
            "best_fitness_mean": _mean(self.best_fitness),
            "mean_fitness_mean": _mean(self.mean_fitness),
            "species_count": self.species_count,
            "shannon": self.shannon,
            "migrations": self.migrations,
            "accepted": self.accepted,
            "mean_weight": self.mean_weight,
            "clustering": self.clustering,
            "path_length_or_blank": self.path_length,
            "components": self.components,
            "feedback_active": int(self.feedback_active),
        }


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs) if xs else math.nan


def shannon_diversity(abundances: Sequence[int]) -> float:
    """Shannon index ``H = -sum p ln p`` (natural log)."""
    if len(abundances) == 0:
        raise ValueError("abundances must be non-empty")
    if any(c <= 0 for c in abundances):
        raise ValueError("abundances must all be positive")
    total = math.fsum(abundances)
    return -math.fsum((c / total) * math.log(c / total) for c in abundances)


@dataclass(frozen=True)
class LogNormalCheck:
    skewness: float | None
    passed: bool | None  # None when inconclusive
    n_species: int

    @property
    def conclusive(self) -> bool:
        return self.passed is not None


MIN_SPECIES_FOR_SHAPE = 10
MAX_LOG_SKEW = 1.0


def lognormal_shape_check(abundances: Sequence[int]) -> LogNormalCheck:
    """Weak test for a roughly log-normal abundance distribution.

    Passes when the sample skewness of the log-abundances is within ``±1``.
    Fewer than ten species is reported as inconclusive.
    """
    n = len(abundances)
    if n < MIN_SPECIES_FOR_SHAPE:
        return LogNormalCheck(None, None, n)
    x = np.log(np.asarray(abundances, dtype=float))
    d = x - x.mean()
    m2 = np.mean(d ** 2)
    if m2 == 0.0:
        skew = 0.0
    else:
        skew = float(np.mean(d ** 3) / m2 ** 1.5)
    return LogNormalCheck(skew, abs(skew) <= MAX_LOG_SKEW, n)


def fit_power_law(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares fit of ``log S = log c + z log a``; returns ``(z, c)``."""
    if len(points) < 2:
        raise ValueError("need at least two points")
    lx = [math.log(a) for a, _ in points]
    ly = [math.log(s) for _, s in points]
    mx, my = _mean(lx), _mean(ly)
    sxx = math.fsum((x - mx) ** 2 for x in lx)
    if sxx == 0.0:
        raise ValueError("need at least two distinct areas")
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(lx, ly))
    z = sxy / sxx
    return z, math.exp(my - z * mx)


@dataclass(frozen=True)
class SpeciesArea:
    curve: list[tuple[int, float]]
    z: float | None
    c: float | None


def default_area_sizes(n_habitats: int) -> list[int]:
    sizes, a = [], 1
    while a < n_habitats:
        sizes.append(a)
        a *= 2
    sizes.append(n_habitats)
    return sizes


def species_area(populations: Sequence[Sequence[Agent]], sizes: Sequence[int], rng,
                 theta: float = 0.1, replicates: int = 20) -> SpeciesArea:
    """Mean species count of pooled random habitat subsets, by subset size.

    ``populations`` holds one agent list per habitat; the "area" of a sample is the
    number of habitats pooled. The exponent is fitted on the points with a
    positive mean species count.
    """
    n = len(populations)
    curve = []
    for a in sizes:
        if not 1 <= a <= n:
            raise ValueError(f"sample size {a} not in [1, {n}]")
        counts = []
        for _ in range(replicates):
            pooled = [ag for i in rng.sample(range(n), a) for ag in populations[i]]
            counts.append(len(species_partition(pooled, theta)) if pooled else 0)
        curve.append((a, _mean(counts)))
    pts = [(a, s) for a, s in curve if s > 0]
    if len({a for a, _ in pts}) < 2:
        return SpeciesArea(curve, None, None)
    z, c = fit_power_law(pts)
    return SpeciesArea(curve, z, c)


def divergence(pop_a: Sequence[Agent], pop_b: Sequence[Agent]) -> float:
    """Mean normalized distance over all cross pairs of two populations."""
    if not pop_a or not pop_b:
        raise ValueError("divergence needs two non-empty populations")
    d = cdist([a.genome for a in pop_a], [b.genome for b in pop_b],
              scorer=Levenshtein.normalized_distance, dtype=np.float64)
    return float(d.mean())


def topology_stats(net: HabitatNetwork, tau: float) -> tuple[float, float | None, int]:
    """Clustering, path length (None if disconnected) and component count at ``tau``."""
    sub = net.thresholded(tau)
    comps = components_at(net, tau)
    cc = clustering_coefficient(sub)
    pl = None
    if len(comps) == 1 and net.n >= 2:
        try:
            pl = characteristic_path_length(sub)
        except DisconnectedGraphError:
            pl = None
    return cc, pl, len(comps)
