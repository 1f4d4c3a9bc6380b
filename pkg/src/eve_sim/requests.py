"""Request streams: the moving fitness landscape each habitat is scored against.

Each sector has an archetype genome that drifts slowly; each member habitat
sees a noisy copy of it as its request for the epoch.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from eve_sim.genome import Genome, point_mutate, random_genome


@dataclass(frozen=True)
class Request:
    target: Genome
    epoch: int = 0


@dataclass(frozen=True)
class SectorProfile:
    id: int
    archetype: Genome
    members: frozenset[int]
    noise_rate: float = 0.05
    drift_rate: float = 0.005
    alphabet_size: int = 16


def next_request(s: SectorProfile, habitat_id: int, epoch: int, rng) -> Request:
    """Noisy copy of the sector archetype for one habitat and epoch.

    ``rng`` should be the stream derived for ``(habitat, epoch, "request")`` so the
    draw is reproducible independently of other habitats.
    """
    if habitat_id not in s.members:
        raise ValueError(f"habitat {habitat_id} is not a member of sector {s.id}")
    target = point_mutate(s.archetype, s.noise_rate, s.alphabet_size, rng)
    return Request(target=target, epoch=epoch)


def drift(s: SectorProfile, epoch: int, rng) -> SectorProfile:
    return replace(s, archetype=point_mutate(s.archetype, s.drift_rate, s.alphabet_size, rng))


def make_sectors(n_habitats: int, n_sectors: int, length: int, alphabet_size: int,
                 noise_rate: float, drift_rate: float, rngs) -> list[SectorProfile]:
    """Split habitats ``0..n_habitats-1`` into contiguous blocks, one per sector.

    ``rngs`` yields one stream per sector for its random archetype.
    """
    if not 1 <= n_sectors <= n_habitats:
        raise ValueError(f"need 1 <= n_sectors <= n_habitats, got {n_sectors}, {n_habitats}")
    members: list[set[int]] = [set() for _ in range(n_sectors)]
    for h in range(n_habitats):
        members[h * n_sectors // n_habitats].add(h)
    return [
        SectorProfile(id=i, archetype=random_genome(length, alphabet_size, rng),
                      members=frozenset(m), noise_rate=noise_rate,
                      drift_rate=drift_rate, alphabet_size=alphabet_size)
        for i, (m, rng) in enumerate(zip(members, rngs))
    ]
