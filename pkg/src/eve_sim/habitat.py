"""A habitat: one agent population and its local genetic algorithm.

The GA is generational with elitism and tournament selection. Habitats are
treated as values; every operation returns a new ``Habitat`` and leaves its
input untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from rapidfuzz.distance import Levenshtein
from rapidfuzz.process import cdist

from eve_sim.genome import Agent, Genome, point_mutate, skip_mutate
from eve_sim.requests import Request

HABITAT_ID_BITS = 16
MAX_HABITATS = 1 << HABITAT_ID_BITS


@dataclass(frozen=True)
class GAParams:
    pop_capacity: int = 50
    tournament_size: int = 3
    crossover_prob: float = 0.7
    mutation_rate: float = 0.02
    indel_rate: float = 0.01
    elitism: int = 1
    alphabet_size: int = 16
    max_length: int = 64

    def __post_init__(self):
        errors = self.problems()
        if errors:
            raise ValueError("; ".join(errors))

    def problems(self) -> list[str]:
        errs = []
        for name in ("crossover_prob", "mutation_rate", "indel_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                errs.append(f"{name}: must be in [0, 1], got {v}")
        if self.pop_capacity < 1:
            errs.append(f"pop_capacity: must be >= 1, got {self.pop_capacity}")
        if not 1 <= self.tournament_size <= max(self.pop_capacity, 1):
            errs.append(f"tournament_size: must be in [1, pop_capacity], got {self.tournament_size}")
        if not 0 <= self.elitism <= self.pop_capacity:
            errs.append(f"elitism: must be in [0, pop_capacity], got {self.elitism}")
        if self.alphabet_size < 2:
            errs.append(f"alphabet_size: must be >= 2, got {self.alphabet_size}")
        if self.max_length < 1:
            errs.append(f"max_length: must be >= 1, got {self.max_length}")
        return errs


def agent_id(habitat_id: int, serial: int) -> int:
    # serial in the high bits, so a lower id means an older agent
    return (serial << HABITAT_ID_BITS) | habitat_id


@dataclass(frozen=True)
class Habitat:
    id: int
    population: list[Agent]
    params: GAParams = field(default_factory=GAParams)
    inbox: list[Agent] = field(default_factory=list)
    current_request: Request | None = None
    effective_mutation_rate: float | None = None
    next_serial: int = 0

    def __post_init__(self):
        if not 0 <= self.id < MAX_HABITATS:
            raise ValueError(f"habitat id must be in [0, {MAX_HABITATS}), got {self.id}")
        if self.effective_mutation_rate is None:
            object.__setattr__(self, "effective_mutation_rate", self.params.mutation_rate)

    @classmethod
    def seeded(cls, habitat_id: int, genomes, params: GAParams | None = None,
               request: Request | None = None, epoch: int = 0) -> "Habitat":
        """Build a habitat whose population holds ``genomes`` with fresh ids."""
        pop = [Agent(agent_id(habitat_id, i), tuple(g), epoch, habitat_id)
               for i, g in enumerate(genomes)]
        return cls(id=habitat_id, population=pop, params=params or GAParams(),
                   current_request=request, next_serial=len(pop))


def evaluate(h: Habitat) -> list[tuple[int, float]]:
    """(agent id, fitness) for every member, ordered by agent id."""
    if h.current_request is None:
        raise ValueError(f"habitat {h.id} has no current request")
    target = h.current_request.target
    score = Levenshtein.normalized_distance
    return sorted((a.id, 1.0 - score(a.genome, target)) for a in h.population)


def tournament_select(fits: list[tuple[int, float]], k: int, rng) -> int:
    """Winner among ``k`` distinct entrants drawn uniformly; ties go to the lower id."""
    n = len(fits)
    if n == 0:
        raise ValueError("tournament over an empty population")
    if not 1 <= k <= n:
        raise ValueError(f"tournament size {k} not in [1, {n}]")
    if k == n:
        entrants = range(n)
    else:
        entrants = rng.sample(range(n), k) if k > 4 else _distinct_indices(n, k, rng)
    best_id, best_fit = fits[next(iter(entrants))]
    for i in entrants:
        aid, f = fits[i]
        if f > best_fit or (f == best_fit and aid < best_id):
            best_id, best_fit = aid, f
    return best_id


def _distinct_indices(n: int, k: int, rng) -> list[int]:
    # rejection sampling; much cheaper than rng.sample for tiny k
    picked: list[int] = []
    while len(picked) < k:
        i = int(rng.random() * n)
        if i not in picked:
            picked.append(i)
    return picked


def crossover(g1: Genome, g2: Genome, cut: int, max_length: int = 64) -> tuple[Genome, Genome]:
    if not 1 <= cut <= min(len(g1), len(g2)) - 1:
        raise ValueError(f"cut {cut} out of range for lengths {len(g1)}, {len(g2)}")
    c1 = g1[:cut] + g2[cut:]
    c2 = g2[:cut] + g1[cut:]
    return c1[:max_length], c2[:max_length]


def mutate(g: Genome, rate: float, indel: float, rng, alphabet_size: int = 16,
           max_length: int = 64) -> Genome:
    """Point mutation at ``rate`` per symbol, then one insert or delete with probability ``indel``.

    An insert that would exceed ``max_length`` or a delete that would empty the
    genome is skipped.
    """
    return _indel(point_mutate(g, rate, alphabet_size, rng), indel, rng.random,
                  alphabet_size, max_length)


def _indel(g: Genome, indel: float, random, alphabet_size: int, max_length: int) -> Genome:
    if indel > 0.0 and random() < indel:
        n = len(g)
        if random() < 0.5:
            if n < max_length:
                pos = int(random() * (n + 1))
                sym = int(random() * alphabet_size)
                g = g[:pos] + (sym,) + g[pos:]
        elif n > 1:
            pos = int(random() * n)
            g = g[:pos] + g[pos + 1:]
    return g


def _tournament_by_rank(size: int, k: int, rng) -> int:
    # entrants are positions in a best-first ranking, so the winner is the minimum
    if k >= size:
        return 0
    if k == 1:
        return int(rng.random() * size)
    return min(_distinct_indices(size, k, rng))


def rank_population(population: list[Agent], target: Genome) -> list[Agent]:
    """Population sorted best first: fitness descending, then agent id ascending."""
    if not population:
        return []
    d = cdist([target], [a.genome for a in population],
              scorer=Levenshtein.normalized_distance, dtype=np.float64)[0].tolist()
    order = sorted(range(len(population)), key=lambda i: (d[i], population[i].id))
    return [population[i] for i in order]


def evolve_generation(h: Habitat, rng, epoch: int = 0) -> Habitat:
    """One GA generation; the next population has the same size as the current one."""
    if not h.population:
        raise ValueError(f"habitat {h.id} has an empty population")
    if h.current_request is None:
        raise ValueError(f"habitat {h.id} has no current request")
    p = h.params
    ranked = rank_population(h.population, h.current_request.target)
    genomes = [a.genome for a in ranked]
    size = len(ranked)
    nxt = ranked[:min(p.elitism, size)]

    k = min(p.tournament_size, size)
    rate, indel, alpha, max_len = h.effective_mutation_rate, p.indel_rate, p.alphabet_size, p.max_length
    cx_prob = p.crossover_prob
    serial = h.next_serial
    hid = h.id
    random = rng.random
    if 0.0 < rate < 1.0 and alpha >= 2:
        log_q = math.log1p(-rate)

        def mut(g):
            return _indel(skip_mutate(g, log_q, alpha, random), indel, random, alpha, max_len)
    else:
        def mut(g):
            return mutate(g, rate, indel, rng, alpha, max_len)
    while len(nxt) < size:
        if k == 3 and size > 3:
            # the default tournament size, inlined: three distinct uniform ranks
            a = int(random() * size)
            b = int(random() * size)
            while b == a:
                b = int(random() * size)
            c = int(random() * size)
            while c == a or c == b:
                c = int(random() * size)
            g1 = genomes[min(a, b, c)]
            a = int(random() * size)
            b = int(random() * size)
            while b == a:
                b = int(random() * size)
            c = int(random() * size)
            while c == a or c == b:
                c = int(random() * size)
            g2 = genomes[min(a, b, c)]
        else:
            g1 = genomes[_tournament_by_rank(size, k, rng)]
            g2 = genomes[_tournament_by_rank(size, k, rng)]
        shortest = min(len(g1), len(g2))
        if random() < cx_prob and shortest >= 2:
            cut = 1 + int(random() * (shortest - 1))
            g1, g2 = crossover(g1, g2, cut, max_len)
        nxt.append(Agent((serial << HABITAT_ID_BITS) | hid,
                         mut(g1), epoch, hid))
        serial += 1
        c2 = mut(g2)
        if len(nxt) < size:
            nxt.append(Agent((serial << HABITAT_ID_BITS) | hid, c2, epoch, hid))
            serial += 1
    return replace(h, population=nxt, next_serial=serial)


def absorb_inbox(h: Habitat) -> tuple[Habitat, list[int]]:
    """Merge pending migrants into the population, truncating to capacity by fitness.

    Returns the new habitat and the ids of migrants that survived truncation.
    """
    if not h.inbox:
        return h, []
    merged = h.population + h.inbox
    cap = h.params.pop_capacity
    if len(merged) > cap:
        target = h.current_request.target if h.current_request else None
        if target is None:
            raise ValueError(f"habitat {h.id} must have a request to truncate its population")
        score = Levenshtein.normalized_distance
        merged.sort(key=lambda a: (score(a.genome, target), a.id))
        merged = merged[:cap]
    merged.sort(key=lambda a: a.id)
    kept = {a.id for a in merged}
    accepted = sorted(a.id for a in h.inbox if a.id in kept)
    return replace(h, population=merged, inbox=[]), accepted


def best_and_mean(h: Habitat) -> tuple[float, float]:
    fits = [f for _, f in evaluate(h)]
    if not fits:
        return math.nan, math.nan
    return max(fits), sum(fits) / len(fits)
