"""Run configuration: dataclasses, JSON parsing and validation.

A run config file is a JSON object mirroring :class:`SimConfig`. Unknown keys
are rejected and every problem is reported, not just the first.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any

from eve_sim.habitat import MAX_HABITATS, GAParams

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class SectorsConfig:
    count: int = 2
    archetype_length: int = 12
    noise_rate: float = 0.05
    drift_rate: float = 0.005


@dataclass(frozen=True)
class TopologyConfig:
    """``kind`` is ``watts_strogatz``, ``complete`` or ``edges``.

    ``k``/``p`` apply to Watts-Strogatz; ``edges`` holds ``[i, j]`` or ``[i, j, w]``
    entries for an explicit graph.
    """
    kind: str = "watts_strogatz"
    k: int = 4
    p: float = 0.1
    edges: tuple = ()


@dataclass(frozen=True)
class AnalysisConfig:
    species_area_sizes: tuple = ()  # empty: powers of two up to n_habitats
    species_area_replicates: int = 20


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    n_habitats: int = 10
    epochs: int = 50
    generations_per_epoch: int = 5
    sectors: SectorsConfig = field(default_factory=SectorsConfig)
    ga: GAParams = field(default_factory=GAParams)
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    p_mig: float = 0.05
    eta: float = 0.05
    decay: float = 0.01
    w_init: float = 0.1
    w_max: float = 1.0
    theta: float = 0.1
    feedback_floor: int = 0
    feedback_boost: float = 2.0
    metrics_tau: float = 0.05
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    def problems(self) -> list[str]:
        errs = []
        if not 1 <= self.n_habitats <= MAX_HABITATS:
            errs.append(f"n_habitats: must be in [1, {MAX_HABITATS}], got {self.n_habitats}")
        if self.epochs < 0:
            errs.append(f"epochs: must be >= 0, got {self.epochs}")
        if self.generations_per_epoch < 1:
            errs.append(f"generations_per_epoch: must be >= 1, got {self.generations_per_epoch}")
        s = self.sectors
        if not 1 <= s.count <= max(self.n_habitats, 1):
            errs.append(f"sectors.count: must be in [1, n_habitats], got {s.count}")
        if not 1 <= s.archetype_length <= self.ga.max_length:
            errs.append(f"sectors.archetype_length: must be in [1, ga.max_length], got {s.archetype_length}")
        for name in ("noise_rate", "drift_rate"):
            v = getattr(s, name)
            if not 0.0 <= v <= 1.0:
                errs.append(f"sectors.{name}: must be in [0, 1], got {v}")
        errs += [f"ga.{e}" for e in self.ga.problems()]
        t = self.topology
        if t.kind == "watts_strogatz":
            if t.k < 2 or t.k % 2 or self.n_habitats <= t.k:
                errs.append(f"topology.k: need n_habitats > k >= 2 and k even, got k={t.k}")
            if not 0.0 <= t.p <= 1.0:
                errs.append(f"topology.p: must be in [0, 1], got {t.p}")
        elif t.kind == "edges":
            seen = set()
            for e in t.edges:
                if len(e) not in (2, 3) or not all(isinstance(x, int) for x in e[:2]):
                    errs.append(f"topology.edges: bad entry {list(e)}")
                    continue
                i, j = e[0], e[1]
                if i == j or not (0 <= i < self.n_habitats and 0 <= j < self.n_habitats):
                    errs.append(f"topology.edges: invalid endpoints {list(e)}")
                elif (min(i, j), max(i, j)) in seen:
                    errs.append(f"topology.edges: duplicate edge {list(e)}")
                else:
                    seen.add((min(i, j), max(i, j)))
                if len(e) == 3 and not (isinstance(e[2], (int, float)) and 0.0 <= e[2] <= self.w_max):
                    errs.append(f"topology.edges: weight outside [0, w_max] in {list(e)}")
        elif t.kind != "complete":
            errs.append(f"topology.kind: must be watts_strogatz, complete or edges, got {t.kind!r}")
        for name in ("p_mig",):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                errs.append(f"{name}: must be in [0, 1], got {v}")
        if self.eta < 0:
            errs.append(f"eta: must be >= 0, got {self.eta}")
        if not 0.0 <= self.decay < 1.0:
            errs.append(f"decay: must be in [0, 1), got {self.decay}")
        if self.w_max <= 0:
            errs.append(f"w_max: must be > 0, got {self.w_max}")
        if not 0.0 <= self.w_init <= self.w_max:
            errs.append(f"w_init: must be in [0, w_max], got {self.w_init}")
        if not 0.0 <= self.theta < 1.0:
            errs.append(f"theta: must be in [0, 1), got {self.theta}")
        if self.feedback_floor < 0:
            errs.append(f"feedback_floor: must be >= 0, got {self.feedback_floor}")
        if self.feedback_boost < 0:
            errs.append(f"feedback_boost: must be >= 0, got {self.feedback_boost}")
        if not 0.0 <= self.metrics_tau <= self.w_max:
            errs.append(f"metrics_tau: must be in [0, w_max], got {self.metrics_tau}")
        a = self.analysis
        if any(not isinstance(x, int) or not 1 <= x <= self.n_habitats for x in a.species_area_sizes):
            errs.append("analysis.species_area_sizes: entries must be integers in [1, n_habitats]")
        if a.species_area_replicates < 1:
            errs.append(f"analysis.species_area_replicates: must be >= 1, got {a.species_area_replicates}")
        return errs

    def validate(self) -> "SimConfig":
        errs = self.problems()
        if errs:
            raise ConfigError(errs)
        return self


_NESTED = {"sectors": SectorsConfig, "ga": GAParams, "topology": TopologyConfig,
           "analysis": AnalysisConfig}


def _coerce(prefix: str, name: str, value: Any, default: Any, problems: list[str]) -> Any:
    where = f"{prefix}{name}"
    if isinstance(default, bool):
        if not isinstance(value, bool):
            problems.append(f"{where}: expected a boolean, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            problems.append(f"{where}: expected an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            problems.append(f"{where}: expected a number, got {value!r}")
            return value
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            problems.append(f"{where}: expected a string, got {value!r}")
        return value
    if isinstance(default, tuple):
        if not isinstance(value, (list, tuple)):
            problems.append(f"{where}: expected a list, got {value!r}")
            return value
        return tuple(tuple(v) if isinstance(v, list) else v for v in value)
    return value


def _build(cls, data: Any, prefix: str, problems: list[str]):
    """Instantiate ``cls`` from ``data``, appending every problem found; None on failure."""
    if not isinstance(data, dict):
        problems.append(f"{prefix.rstrip('.') or 'config'}: expected an object")
        return None
    known = {f.name: f for f in fields(cls)}
    kwargs = {}
    ok = True
    for key, value in data.items():
        if key not in known:
            problems.append(f"{prefix}{key}: unknown key")
            continue
        if cls is SimConfig and key in _NESTED:
            sub = _build(_NESTED[key], value, f"{key}.", problems)
            if sub is None:
                ok = False
            else:
                kwargs[key] = sub
            continue
        f = known[key]
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        before = len(problems)
        coerced = _coerce(prefix, key, value, default, problems)
        if len(problems) == before:
            kwargs[key] = coerced
        else:
            ok = False
    try:
        obj = cls(**kwargs)
    except ValueError as exc:  # GAParams validates itself
        problems.extend(f"{prefix}{p}" for p in str(exc).split("; "))
        return None
    return obj if ok else None


def config_from_dict(data: Any) -> SimConfig:
    """Parse and validate a config mapping, raising ConfigError listing every problem."""
    problems: list[str] = []
    if isinstance(data, dict):
        data = dict(data)
        version = data.pop("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            problems.append(f"schema_version: unsupported version {version!r}")
    cfg = _build(SimConfig, data, "", problems)
    if cfg is not None:
        problems += cfg.problems()
    if problems or cfg is None:
        raise ConfigError(problems or ["config: invalid"])
    return cfg


def load_config(path) -> SimConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config: not valid JSON ({exc})"]) from None
    return config_from_dict(data)


def config_to_dict(cfg: SimConfig) -> dict:
    d = asdict(cfg)
    d["topology"]["edges"] = [list(e) for e in cfg.topology.edges]
    d["analysis"]["species_area_sizes"] = list(cfg.analysis.species_area_sizes)
    return {"schema_version": SCHEMA_VERSION, **d}


def dump_config(cfg: SimConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"


def with_overrides(cfg: SimConfig, **dotted) -> SimConfig:
    """Copy of ``cfg`` with dotted-path overrides, e.g. ``**{"ga.mutation_rate": 0.1}``."""
    d = config_to_dict(cfg)
    for path, value in dotted.items():
        node = d
        *parents, leaf = path.split(".")
        for p in parents:
            node = node[p]
        if leaf not in node:
            raise ConfigError([f"{path}: unknown key"])
        node[leaf] = value
    return config_from_dict(d)


def sweepable_keys() -> dict[str, type]:
    """Numeric config leaves addressable by dotted name."""
    out = {}
    for f in fields(SimConfig):
        if f.name in _NESTED:
            for g in fields(_NESTED[f.name]):
                if type(g.default) in (int, float):
                    out[f"{f.name}.{g.name}"] = type(g.default)
        elif type(f.default) in (int, float):
            out[f.name] = type(f.default)
    return out
