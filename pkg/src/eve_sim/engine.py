"""The epoch loop.

One epoch runs, in order: sector drift, per-habitat request draw and local GA,
migration, inbox absorption, Hebbian update, the global diversity feedback
check, and metrics. Every random draw comes from a stream derived from
``(seed, entity, epoch, phase)`` so results do not depend on worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from eve_sim.config import SimConfig
from eve_sim.genome import Agent, SpeciesPartition, random_genome, species_partition
from eve_sim.habitat import Habitat, absorb_inbox, best_and_mean, evolve_generation
from eve_sim.metrics import EpochReport, shannon_diversity, topology_stats
from eve_sim.network import HabitatNetwork, hebbian_update, migrate, watts_strogatz
from eve_sim.requests import SectorProfile, drift, make_sectors, next_request
from eve_sim.rng import stream

log = logging.getLogger(__name__)

MAX_BOOSTED_RATE = 0.5


class SimulationError(RuntimeError):
    """A run aborted; ``reports`` holds every report produced before the failure."""

    def __init__(self, msg: str, reports: list[EpochReport]):
        super().__init__(msg)
        self.reports = reports


@dataclass
class SimState:
    config: SimConfig
    epoch: int
    habitats: list[Habitat]
    network: HabitatNetwork
    sectors: list[SectorProfile]
    feedback_active: bool = False

    def sector_of(self, habitat_id: int) -> SectorProfile:
        for s in self.sectors:
            if habitat_id in s.members:
                return s
        raise KeyError(habitat_id)

    def union_population(self) -> list[Agent]:
        return [a for h in self.habitats for a in h.population]


def build_network(cfg: SimConfig) -> HabitatNetwork:
    t = cfg.topology
    if t.kind == "watts_strogatz":
        return watts_strogatz(cfg.n_habitats, t.k, t.p, stream(cfg.seed, "network", 0, 0, "build"),
                              w_init=cfg.w_init, w_max=cfg.w_max)
    if t.kind == "complete":
        return HabitatNetwork.complete(cfg.n_habitats, w_max=cfg.w_max, w_init=cfg.w_init)
    return HabitatNetwork.from_edges(cfg.n_habitats, t.edges, w_max=cfg.w_max, w_init=cfg.w_init)


def initial_state(cfg: SimConfig) -> SimState:
    cfg.validate()
    s = cfg.sectors
    ga = cfg.ga
    sectors = make_sectors(
        cfg.n_habitats, s.count, s.archetype_length, ga.alphabet_size, s.noise_rate,
        s.drift_rate, (stream(cfg.seed, "sector", i, 0, "init") for i in range(s.count)))
    state = SimState(cfg, 0, [], build_network(cfg), sectors)
    habitats = []
    for h in range(cfg.n_habitats):
        rng = stream(cfg.seed, "habitat", h, 0, "init")
        genomes = [random_genome(s.archetype_length, ga.alphabet_size, rng)
                   for _ in range(ga.pop_capacity)]
        req = next_request(state.sector_of(h), h, 0, stream(cfg.seed, "habitat", h, 0, "request"))
        habitats.append(Habitat.seeded(h, genomes, ga, request=req))
    state.habitats = habitats
    return state


def feedback_check(state: SimState, species_count: int, floor: int, boost: float) -> SimState:
    """Boost every habitat's mutation rate while global species count is under ``floor``."""
    active = species_count < floor
    habitats = []
    for h in state.habitats:
        base = h.params.mutation_rate
        rate = min(base * boost, MAX_BOOSTED_RATE) if active else base
        habitats.append(replace(h, effective_mutation_rate=rate))
    return replace(state, habitats=habitats, feedback_active=active)


def make_report(state: SimState, partition: SpeciesPartition, events, accepted: int,
                pmap: Callable = map) -> EpochReport:
    fits = list(pmap(best_and_mean, state.habitats))
    abundances = partition.abundances()
    cc, pl, ncomp = topology_stats(state.network, state.config.metrics_tau)
    return EpochReport(
        epoch=state.epoch,
        best_fitness=[b for b, _ in fits],
        mean_fitness=[m for _, m in fits],
        species_count=len(abundances),
        abundances=abundances,
        shannon=shannon_diversity(abundances) if abundances else 0.0,
        migrations=len(events),
        accepted=accepted,
        mean_weight=state.network.mean_weight(),
        clustering=cc,
        path_length=pl,
        components=ncomp,
        feedback_active=state.feedback_active,
        effective_mutation_rates=[h.effective_mutation_rate for h in state.habitats],
        events=list(events),
    )


def _local_phase(state: SimState, e: int) -> Callable[[Habitat], Habitat]:
    cfg = state.config
    sector_by_habitat = {h: s for s in state.sectors for h in s.members}

    def run(h: Habitat) -> Habitat:
        req = next_request(sector_by_habitat[h.id], h.id, e,
                           stream(cfg.seed, "habitat", h.id, e, "request"))
        h = replace(h, current_request=req)
        rng = stream(cfg.seed, "habitat", h.id, e, "ga")
        for _ in range(cfg.generations_per_epoch):
            h = evolve_generation(h, rng, epoch=e)
        return h

    return run


def step_epoch(state: SimState, pmap: Callable = map) -> tuple[SimState, EpochReport]:
    """Advance one epoch. ``pmap`` fans out the per-habitat phases (e.g. ``executor.map``)."""
    cfg = state.config
    e = state.epoch + 1
    sectors = [drift(s, e, stream(cfg.seed, "sector", s.id, e, "drift")) for s in state.sectors]
    state = replace(state, epoch=e, sectors=sectors)

    habitats = list(pmap(_local_phase(state, e), state.habitats))

    habitats, events = migrate(state.network, habitats, cfg.p_mig,
                               stream(cfg.seed, "network", 0, e, "migrate"), epoch=e)

    route = {ev.agent_id: (ev.source, ev.destination) for ev in events}
    successes = []
    absorbed = []
    for h in habitats:
        h, accepted = absorb_inbox(h)
        absorbed.append(h)
        successes += [route[aid] for aid in accepted]

    network = hebbian_update(state.network, successes, cfg.eta, cfg.decay)
    state = replace(state, habitats=absorbed, network=network)

    partition = species_partition(state.union_population(), cfg.theta)
    state = feedback_check(state, len(partition), cfg.feedback_floor, cfg.feedback_boost)

    return state, make_report(state, partition, events, len(successes), pmap)


def initial_report(state: SimState) -> EpochReport:
    partition = species_partition(state.union_population(), state.config.theta)
    return make_report(state, partition, [], 0)


def simulate(cfg: SimConfig, threads: int = 1,
             state: SimState | None = None) -> tuple[list[EpochReport], SimState]:
    """Run ``cfg.epochs`` epochs, returning all ``epochs + 1`` reports and the final state."""
    if state is None:
        state = initial_state(cfg)
    reports = [initial_report(state)]
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    pmap = executor.map if executor else map
    try:
        for _ in range(cfg.epochs):
            try:
                state, report = step_epoch(state, pmap)
            except Exception as exc:
                log.error("epoch %d failed: %s", state.epoch + 1, exc)
                raise SimulationError(f"epoch {state.epoch + 1}: {exc}", reports) from exc
            reports.append(report)
    finally:
        if executor:
            executor.shutdown()
    return reports, state


def run(cfg: SimConfig, threads: int = 1) -> list[EpochReport]:
    return simulate(cfg, threads)[0]


def populations(state: SimState) -> Sequence[list[Agent]]:
    return [h.population for h in state.habitats]
