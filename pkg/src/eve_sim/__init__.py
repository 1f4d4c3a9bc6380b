"""Deterministic simulator of an evolutionary service ecosystem.

Agent populations evolve under per-habitat genetic algorithms, migrate over a
weighted habitat graph whose weights adapt by Hebbian reinforcement, and are
measured with ecological statistics.
"""

from eve_sim.genome import Agent, distance, fitness, species_partition
from eve_sim.habitat import GAParams, Habitat
from eve_sim.network import HabitatNetwork, watts_strogatz
from eve_sim.requests import Request, SectorProfile

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "GAParams",
    "Habitat",
    "HabitatNetwork",
    "Request",
    "SectorProfile",
    "distance",
    "fitness",
    "species_partition",
    "watts_strogatz",
]
