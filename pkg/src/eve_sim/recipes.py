"""Canned multi-run experiments with pass/fail verdicts.

Each recipe returns a JSON-ready dict holding the measured statistics, the
thresholds applied and an overall ``"pass"`` flag. The acceptance tests and
``eve-sim recipe`` both call these functions.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import replace

from eve_sim.config import SectorsConfig, SimConfig, TopologyConfig
from eve_sim.engine import initial_state, simulate, step_epoch
from eve_sim.genome import random_genome
from eve_sim.habitat import GAParams, Habitat, best_and_mean, evolve_generation
from eve_sim.metrics import divergence
from eve_sim.network import characteristic_path_length, clustering_coefficient, watts_strogatz
from eve_sim.requests import Request
from eve_sim.rng import stream


def smallworld(n: int = 200, k: int = 8, p: float = 0.1, seeds: int = 10,
               min_c_ratio: float = 0.6, max_l_ratio: float = 0.5) -> dict:
    t0 = time.perf_counter()
    lattice = watts_strogatz(n, k, 0.0, stream(0, "network", 0, 0, "build"))
    c0 = clustering_coefficient(lattice)
    l0 = characteristic_path_length(lattice)
    cs, ls = [], []
    for seed in range(seeds):
        g = watts_strogatz(n, k, p, stream(seed, "network", 0, 0, "build"))
        cs.append(clustering_coefficient(g))
        ls.append(characteristic_path_length(g))
    c_ratio = statistics.fmean(cs) / c0
    l_ratio = statistics.fmean(ls) / l0
    return {
        "recipe": "smallworld",
        "n": n, "k": k, "p": p, "seeds": seeds,
        "C0": c0, "L0": l0, "C_p": statistics.fmean(cs), "L_p": statistics.fmean(ls),
        "C_ratio": c_ratio, "L_ratio": l_ratio,
        "C_ratio_pass": c_ratio >= min_c_ratio,
        "L_ratio_pass": l_ratio <= max_l_ratio,
        "pass": c_ratio >= min_c_ratio and l_ratio <= max_l_ratio,
        "seconds": time.perf_counter() - t0,
    }


def generations_to_optimum(seed: int, generations: int = 200, length: int = 12,
                           params: GAParams | None = None) -> int | None:
    """Generations a lone habitat needs to hit fitness 1.0 on a fixed random request."""
    params = params or GAParams()
    init = stream(seed, "habitat", 0, 0, "init")
    target = random_genome(length, params.alphabet_size, stream(seed, "sector", 0, 0, "init"))
    genomes = [random_genome(length, params.alphabet_size, init) for _ in range(params.pop_capacity)]
    h = Habitat.seeded(0, genomes, params, request=Request(target))
    rng = stream(seed, "habitat", 0, 0, "ga")
    for gen in range(generations + 1):
        if best_and_mean(h)[0] == 1.0:
            return gen
        if gen < generations:
            h = evolve_generation(h, rng, epoch=gen + 1)
    return None


def convergence(seeds: int = 20, generations: int = 200, min_fraction: float = 0.9) -> dict:
    t0 = time.perf_counter()
    hits = [generations_to_optimum(s, generations) for s in range(seeds)]
    frac = sum(h is not None for h in hits) / seeds
    return {
        "recipe": "convergence",
        "seeds": seeds, "generations": generations,
        "generations_to_optimum": hits,
        "success_fraction": frac,
        "min_fraction": min_fraction,
        "pass": frac >= min_fraction,
        "seconds": time.perf_counter() - t0,
    }


def _static_config(seed: int, n: int, edges, **kw) -> SimConfig:
    return SimConfig(seed=seed, n_habitats=n, epochs=0,
                     sectors=SectorsConfig(count=1, noise_rate=0.0, drift_rate=0.0),
                     topology=TopologyConfig(kind="edges", edges=tuple(edges)), **kw)


def epochs_to_target(seed: int, connected: bool, target: float = 0.95,
                     pre_generations: int = 200, max_epochs: int = 200) -> int | None:
    """Epochs until habitat 0 reaches ``target`` fitness beside a pre-evolved habitat 1.

    Both habitats serve the same static archetype. Habitat 1 first evolves alone
    for ``pre_generations``; habitat 0 then starts from its random population,
    linked to habitat 1 by a fresh ``w_init`` edge when ``connected``.
    """
    cfg = _static_config(seed, 2, [(0, 1)] if connected else [])
    state = initial_state(cfg)
    neighbour = state.habitats[1]
    rng = stream(seed, "habitat", 1, 0, "pre-evolve")
    for _ in range(pre_generations):
        neighbour = evolve_generation(neighbour, rng)
    state.habitats = [state.habitats[0], neighbour]
    for epoch in range(1, max_epochs + 1):
        state, report = step_epoch(state)
        if report.best_fitness[0] >= target:
            return epoch
    return None


def prior_sampling(seeds: int = 20, target: float = 0.95, max_epochs: int = 200) -> dict:
    t0 = time.perf_counter()
    inf = max_epochs + 1  # never reached counts as slower than the cap
    joined = [epochs_to_target(s, True, target, max_epochs=max_epochs) for s in range(seeds)]
    alone = [epochs_to_target(s, False, target, max_epochs=max_epochs) for s in range(seeds)]
    med_joined = statistics.median(inf if e is None else e for e in joined)
    med_alone = statistics.median(inf if e is None else e for e in alone)
    return {
        "recipe": "prior-sampling",
        "seeds": seeds, "target_fitness": target,
        "epochs_connected": joined, "epochs_isolated": alone,
        "median_connected": med_joined, "median_isolated": med_alone,
        "pass": med_joined < med_alone,
        "seconds": time.perf_counter() - t0,
    }


def sector_weights(state) -> tuple[float, float]:
    """Mean intra-sector and inter-sector edge weight (NaN when a class is empty)."""
    sector = {h: s.id for s in state.sectors for h in s.members}
    intra, inter = [], []
    for (i, j), w in state.network.weights.items():
        (intra if sector[i] == sector[j] else inter).append(w)
    nan = float("nan")
    return (statistics.fmean(intra) if intra else nan, statistics.fmean(inter) if inter else nan)


def sectors(seeds: int = 20, epochs: int = 300, min_wins: int = 18) -> dict:
    t0 = time.perf_counter()
    rows = []
    for seed in range(seeds):
        cfg = SimConfig(seed=seed, n_habitats=10, epochs=epochs,
                        sectors=SectorsConfig(count=2), topology=TopologyConfig(kind="complete"))
        _, state = simulate(cfg)
        intra, inter = sector_weights(state)
        rows.append({"seed": seed, "intra": intra, "inter": inter, "win": intra > inter})
    wins = sum(r["win"] for r in rows)
    return {
        "recipe": "sectors",
        "seeds": seeds, "epochs": epochs, "runs": rows,
        "wins": wins, "min_wins": min_wins,
        "pass": wins >= min_wins,
        "seconds": time.perf_counter() - t0,
    }


def final_divergence(seed: int, connected: bool, epochs: int = 200, p_mig: float = 0.05) -> float:
    """Cross-habitat divergence after ``epochs`` for two same-sector habitats.

    The connected case pins its single edge at ``w_max`` by switching off Hebbian
    reinforcement and decay.
    """
    base = SimConfig(seed=seed, n_habitats=2, epochs=epochs, sectors=SectorsConfig(count=1),
                     p_mig=p_mig)
    if connected:
        cfg = replace(base, topology=TopologyConfig(kind="edges", edges=((0, 1, base.w_max),)),
                      eta=0.0, decay=0.0)
    else:
        cfg = replace(base, topology=TopologyConfig(kind="edges", edges=()))
    _, state = simulate(cfg.validate())
    return divergence(state.habitats[0].population, state.habitats[1].population)


def fragmentation(seeds: int = 20, epochs: int = 200) -> dict:
    t0 = time.perf_counter()
    isolated = [final_divergence(s, False, epochs) for s in range(seeds)]
    connected = [final_divergence(s, True, epochs) for s in range(seeds)]
    med_iso, med_con = statistics.median(isolated), statistics.median(connected)
    return {
        "recipe": "fragmentation",
        "seeds": seeds, "epochs": epochs,
        "divergence_isolated": isolated, "divergence_connected": connected,
        "median_isolated": med_iso, "median_connected": med_con,
        "pass": med_iso > med_con,
        "seconds": time.perf_counter() - t0,
    }


def feedback(seed: int = 0, epochs: int = 50, boost: float = 2.0) -> dict:
    """Diversity feedback switches on under a high species floor and never at floor 0."""
    t0 = time.perf_counter()
    base = SimConfig(seed=seed, epochs=epochs, feedback_boost=boost)
    off, _ = simulate(base)
    equilibrium = max(r.species_count for r in off[len(off) // 2:])
    floor = equilibrium + 1
    on, _ = simulate(replace(base, feedback_floor=floor))
    first = next((r.epoch for r in on if r.feedback_active), None)
    expected = min(base.ga.mutation_rate * boost, 0.5)
    rates_ok = all(
        all(abs(x - (expected if r.feedback_active else base.ga.mutation_rate)) < 1e-12
            for x in r.effective_mutation_rates)
        for r in on)
    never_off = not any(r.feedback_active for r in off)
    off_rates_ok = all(x == base.ga.mutation_rate for r in off for x in r.effective_mutation_rates)
    ok = first is not None and first <= epochs and rates_ok and never_off and off_rates_ok
    return {
        "recipe": "feedback",
        "epochs": epochs, "equilibrium_species": equilibrium, "floor": floor, "boost": boost,
        "first_active_epoch": first, "expected_boosted_rate": expected,
        "rates_match": rates_ok, "never_active_at_zero_floor": never_off and off_rates_ok,
        "pass": ok,
        "seconds": time.perf_counter() - t0,
    }


RECIPES = {
    "convergence": convergence,
    "prior-sampling": prior_sampling,
    "sectors": sectors,
    "fragmentation": fragmentation,
    "smallworld": smallworld,
    "feedback": feedback,
}
