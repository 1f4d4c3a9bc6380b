"""Genomes, agents, genome-space distance and species partitioning.

A genome is a tuple of integer service ids in ``[0, alphabet_size)``; its order
matters (it encodes a composition of services). Distance is normalized
Levenshtein distance, and species are single-linkage clusters under a distance
threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from rapidfuzz.distance import Levenshtein
from rapidfuzz.process import cdist
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

Genome = tuple  # tuple[int, ...]

DEFAULT_ALPHABET = 16
DEFAULT_MAX_LENGTH = 64


class Agent(NamedTuple):
    id: int
    genome: Genome
    birth_epoch: int = 0
    home_habitat: int = 0


@dataclass(frozen=True)
class SpeciesPartition:
    clusters: list[frozenset[int]]
    threshold: float

    def __len__(self) -> int:
        return len(self.clusters)

    def abundances(self) -> list[int]:
        return [len(c) for c in self.clusters]


def validate_genome(g: Sequence[int], alphabet_size: int = DEFAULT_ALPHABET,
                    max_length: int = DEFAULT_MAX_LENGTH) -> Genome:
    """Return ``g`` as a tuple, raising ValueError if it breaks the genome invariants."""
    g = tuple(g)
    if not 1 <= len(g) <= max_length:
        raise ValueError(f"genome length {len(g)} outside [1, {max_length}]")
    for s in g:
        if not (isinstance(s, (int, np.integer)) and 0 <= s < alphabet_size):
            raise ValueError(f"symbol {s!r} outside [0, {alphabet_size})")
    return tuple(int(s) for s in g)


def random_genome(length: int, alphabet_size: int, rng) -> Genome:
    return tuple(int(rng.random() * alphabet_size) for _ in range(length))


def distance(a: Genome, b: Genome) -> float:
    """Levenshtein distance divided by the longer length; 0.0 for two empty genomes."""
    return Levenshtein.normalized_distance(a, b)


def genome_fitness(g: Genome, target: Genome) -> float:
    return 1.0 - Levenshtein.normalized_distance(g, target)


def fitness(agent: Agent, request) -> float:
    """Conformance of an agent to a request, in [0, 1]."""
    return 1.0 - Levenshtein.normalized_distance(agent.genome, request.target)


def point_mutate(g: Genome, rate: float, alphabet_size: int, rng) -> Genome:
    """Resample each symbol with probability ``rate`` to a different symbol.

    Positions are found by geometric skipping, which draws the same per-position
    Bernoulli(rate) pattern as testing every position but costs one draw per hit
    instead of one per symbol.
    """
    if rate <= 0.0 or alphabet_size < 2 or not g:
        return g
    if rate >= 1.0:
        return _resample(g, range(len(g)), alphabet_size, rng.random)
    return skip_mutate(g, math.log1p(-rate), alphabet_size, rng.random)


def skip_mutate(g: Genome, log_q: float, alphabet_size: int, random) -> Genome:
    # point_mutate for 0 < rate < 1 with log_q = log(1 - rate) precomputed
    n = len(g)
    i = int(math.log(1.0 - random()) / log_q)
    if i >= n:
        return g
    hits = []
    while i < n:
        hits.append(i)
        i += 1 + int(math.log(1.0 - random()) / log_q)
    return _resample(g, hits, alphabet_size, random)


def _resample(g: Genome, hits: Iterable[int], alphabet_size: int, random) -> Genome:
    out = list(g)
    for i in hits:
        out[i] = (out[i] + 1 + int(random() * (alphabet_size - 1))) % alphabet_size
    return tuple(out)


def species_partition(pop: Iterable[Agent], theta: float) -> SpeciesPartition:
    """Single-linkage clusters of ``pop`` under ``distance <= theta``.

    Clusters are ordered by size (largest first), then by smallest member id.
    """
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must be in [0, 1), got {theta}")
    by_genome: dict[Genome, list[int]] = {}
    for a in pop:
        by_genome.setdefault(a.genome, []).append(a.id)
    genomes = list(by_genome)

    if theta == 0.0 or len(genomes) < 2:
        groups = [by_genome[g] for g in genomes]
    else:
        # entries above the cutoff come back as 1.0
        d = cdist(genomes, genomes, scorer=Levenshtein.normalized_distance,
                  score_cutoff=theta, dtype=np.float64)
        _, labels = connected_components(csr_matrix(d <= theta), directed=False)
        merged: dict[int, list[int]] = {}
        for g, lab in zip(genomes, labels):
            merged.setdefault(int(lab), []).extend(by_genome[g])
        groups = list(merged.values())

    clusters = sorted((frozenset(ids) for ids in groups), key=lambda c: (-len(c), min(c)))
    return SpeciesPartition(clusters=clusters, threshold=theta)
