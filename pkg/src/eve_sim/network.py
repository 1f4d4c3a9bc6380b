"""Weighted habitat graph: generation, migration, Hebbian adaptation, statistics.

Edges are undirected and carry one shared weight in ``[0, w_max]``. The edge set
is fixed at construction; only weights change.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from eve_sim.genome import Agent
from eve_sim.habitat import Habitat, agent_id


class DisconnectedGraphError(ValueError):
    pass


class EdgeListError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class HabitatNetwork:
    n: int
    weights: dict[tuple[int, int], float]
    w_max: float = 1.0
    w_init: float = 0.1
    _adj: list[list[int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for (i, j), w in self.weights.items():
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge ({i}, {j}) for n={self.n}")
            if not 0.0 <= w <= self.w_max:
                raise ValueError(f"weight {w} of edge ({i}, {j}) outside [0, {self.w_max}]")
            adj[i].append(j)
            adj[j].append(i)
        for a in adj:
            a.sort()
        object.__setattr__(self, "_adj", adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], w_max: float = 1.0,
                   w_init: float = 0.1) -> "HabitatNetwork":
        """Build from ``(i, j)`` or ``(i, j, w)`` tuples; missing weights use ``w_init``."""
        weights = {}
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            k = _key(i, j)
            if k in weights:
                raise ValueError(f"duplicate edge {k}")
            weights[k] = float(e[2]) if len(e) > 2 else w_init
        return cls(n, weights, w_max, w_init)

    @classmethod
    def complete(cls, n: int, w_max: float = 1.0, w_init: float = 0.1) -> "HabitatNetwork":
        return cls(n, {(i, j): w_init for i in range(n) for j in range(i + 1, n)}, w_max, w_init)

    def neighbors(self, i: int) -> list[int]:
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def weight(self, i: int, j: int) -> float:
        return self.weights[_key(i, j)]

    def has_edge(self, i: int, j: int) -> bool:
        return _key(i, j) in self.weights

    def edges(self) -> list[tuple[int, int, float]]:
        return [(i, j, w) for (i, j), w in sorted(self.weights.items())]

    def thresholded(self, tau: float) -> "HabitatNetwork":
        return replace(self, weights={k: w for k, w in self.weights.items() if w >= tau})

    def mean_weight(self) -> float:
        if not self.weights:
            return math.nan
        return math.fsum(self.weights.values()) / len(self.weights)


@dataclass(frozen=True)
class MigrationEvent:
    agent_id: int
    source: int
    destination: int
    epoch: int


def watts_strogatz(n: int, k: int, p: float, rng, w_init: float = 0.1,
                   w_max: float = 1.0) -> HabitatNetwork:
    """Ring lattice of ``n`` nodes with ``k`` nearest neighbours, each edge rewired with prob ``p``.

    A rewired edge keeps its first endpoint and gets a new uniform endpoint that is
    neither the node itself nor an existing neighbour, so the edge count stays
    ``n*k/2``.
    """
    if k < 2 or k % 2 or n <= k:
        raise ValueError(f"need n > k >= 2 with k even, got n={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    adj = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if v not in adj[u] or rng.random() >= p:
                continue
            if len(adj[u]) >= n - 1:
                continue
            w = int(rng.random() * n)
            while w == u or w in adj[u]:
                w = int(rng.random() * n)
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)
    weights = {(u, v): w_init for u in range(n) for v in adj[u] if u < v}
    return HabitatNetwork(n, weights, w_max, w_init)


def clustering_coefficient(net: HabitatNetwork) -> float:
    """Mean local clustering; nodes of degree < 2 count as 0."""
    if net.n == 0:
        return 0.0
    nbrs = [set(net.neighbors(i)) for i in range(net.n)]
    total = 0.0
    for i in range(net.n):
        d = len(nbrs[i])
        if d < 2:
            continue
        links = sum(len(nbrs[u] & nbrs[i]) for u in nbrs[i]) / 2
        total += links / (d * (d - 1) / 2)
    return total / net.n


def _bfs(net: HabitatNetwork, src: int) -> list[int]:
    dist = [-1] * net.n
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for v in net.neighbors(u):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def characteristic_path_length(net: HabitatNetwork) -> float:
    """Mean hop distance over unordered node pairs; raises on a disconnected graph."""
    if net.n < 2:
        raise ValueError("path length needs at least two nodes")
    total = 0
    for s in range(net.n):
        dist = _bfs(net, s)
        if min(dist) < 0:
            raise DisconnectedGraphError("graph is disconnected")
        total += sum(dist[s + 1:])
    return total / (net.n * (net.n - 1) / 2)


def components_at(net: HabitatNetwork, tau: float) -> list[frozenset[int]]:
    """Connected components keeping only edges with weight >= tau.

    Ordered by size (largest first), then smallest member.
    """
    sub = net.thresholded(tau)
    seen = [False] * net.n
    comps = []
    for s in range(net.n):
        if seen[s]:
            continue
        members = [i for i, d in enumerate(_bfs(sub, s)) if d >= 0]
        for i in members:
            seen[i] = True
        comps.append(frozenset(members))
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def migrate(net: HabitatNetwork, habitats: Sequence[Habitat], p_mig: float, rng,
            epoch: int = 0) -> tuple[list[Habitat], list[MigrationEvent]]:
    """Copy agents along weighted edges into neighbouring inboxes.

    Each agent of habitat ``i`` emigrates with probability
    ``p_mig * sum_j w_ij / (deg_i * w_max)`` to a neighbour picked in proportion to
    ``w_ij``. The copy gets a fresh id minted by its destination; the original
    stays home.
    """
    if len(habitats) != net.n:
        raise ValueError(f"{len(habitats)} habitats for a {net.n}-node network")
    inboxes = [list(h.inbox) for h in habitats]
    serials = [h.next_serial for h in habitats]
    events: list[MigrationEvent] = []
    if p_mig > 0.0:
        for h in habitats:
            i = h.id
            nbrs = net.neighbors(i)
            if not nbrs:
                continue
            ws = [net.weight(i, j) for j in nbrs]
            total = math.fsum(ws)
            if total <= 0.0:
                continue
            prob = p_mig * total / (len(nbrs) * net.w_max)
            for a in sorted(h.population, key=lambda a: a.id):
                if rng.random() >= prob:
                    continue
                u = rng.random() * total
                dest = nbrs[-1]
                acc = 0.0
                for j, w in zip(nbrs, ws):
                    acc += w
                    if u < acc:
                        dest = j
                        break
                copy = Agent(agent_id(dest, serials[dest]), a.genome, epoch, a.home_habitat)
                serials[dest] += 1
                inboxes[dest].append(copy)
                events.append(MigrationEvent(copy.id, i, dest, epoch))
    out = [replace(h, inbox=inboxes[h.id], next_serial=serials[h.id]) for h in habitats]
    return out, events


def hebbian_update(net: HabitatNetwork, successes: Iterable[tuple[int, int]], eta: float,
                   decay: float) -> HabitatNetwork:
    """Strengthen edges that carried a surviving migrant, then decay every edge.

    Each success adds ``eta`` to its edge (clamped at ``w_max``); afterwards every
    weight is multiplied by ``1 - decay``.
    """
    if eta < 0 or not 0.0 <= decay < 1.0:
        raise ValueError(f"need eta >= 0 and 0 <= decay < 1, got {eta}, {decay}")
    weights = dict(net.weights)
    for i, j in sorted(_key(i, j) for i, j in successes):
        if (i, j) not in weights:
            raise KeyError(f"success on unknown edge ({i}, {j})")
        weights[(i, j)] = min(weights[(i, j)] + eta, net.w_max)
    if decay:
        weights = {k: w * (1.0 - decay) for k, w in weights.items()}
    return replace(net, weights=weights)


# --- file formats -----------------------------------------------------------

def to_edge_list(net: HabitatNetwork) -> str:
    """Edge list, one ``i j w`` line per edge, preceded by a ``# nodes N`` header."""
    lines = [f"# nodes {net.n}"]
    lines += [f"{i} {j} {w!r}" for i, j, w in net.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, w_max: float = 1.0) -> HabitatNetwork:
    """Parse the ``i j w`` edge-list format.

    Blank lines and ``#`` comments are ignored, except a ``# nodes N`` header, which
    fixes the node count. Without it the count is the largest node id plus one.
    """
    n_declared = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "nodes":
                try:
                    n_declared = int(parts[1])
                except ValueError:
                    raise EdgeListError(lineno, f"bad node count {parts[1]!r}") from None
            continue
        parts = line.split()
        if len(parts) != 3:
            raise EdgeListError(lineno, f"expected 'i j w', got {raw!r}")
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise EdgeListError(lineno, f"expected 'i j w', got {raw!r}") from None
        if i < 0 or j < 0 or i == j:
            raise EdgeListError(lineno, f"invalid endpoints {i} {j}")
        if not (math.isfinite(w) and 0.0 <= w):
            raise EdgeListError(lineno, f"invalid weight {parts[2]}")
        edges.append((lineno, i, j, w))
    n = n_declared if n_declared is not None else 1 + max((max(i, j) for _, i, j, _ in edges), default=-1)
    weights = {}
    for lineno, i, j, w in edges:
        if max(i, j) >= n:
            raise EdgeListError(lineno, f"node id beyond declared count {n}")
        if _key(i, j) in weights:
            raise EdgeListError(lineno, f"duplicate edge {i} {j}")
        weights[_key(i, j)] = w
    w_max = max([w_max, *weights.values()])
    return HabitatNetwork(n, weights, w_max=w_max)


def to_json_adjacency(net: HabitatNetwork) -> str:
    adj = {str(i): {str(j): net.weight(i, j) for j in net.neighbors(i)} for i in range(net.n)}
    return json.dumps({"n": net.n, "w_max": net.w_max, "adjacency": adj}, indent=2) + "\n"
