"""Run output files.

``report.csv`` has a fixed column order and writes floats as their shortest
round-trip decimal (``repr``), so equal runs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence

from eve_sim.config import SimConfig, dump_config
from eve_sim.engine import SimState
from eve_sim.genome import species_partition
from eve_sim.metrics import (CSV_COLUMNS, EpochReport, default_area_sizes, divergence,
                             lognormal_shape_check, species_area)
from eve_sim.network import to_edge_list, to_json_adjacency
from eve_sim.rng import stream


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def report_csv(rows: Sequence[dict], columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


def dump_json(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n"


def analysis(state: SimState) -> dict:
    """Species-area, log-normal and divergence summaries of the final populations."""
    cfg = state.config
    pops = [h.population for h in state.habitats]
    sizes = list(cfg.analysis.species_area_sizes) or default_area_sizes(cfg.n_habitats)
    sa = species_area(pops, sizes, stream(cfg.seed, "analysis", 0, state.epoch, "species-area"),
                      theta=cfg.theta, replicates=cfg.analysis.species_area_replicates)
    part = species_partition(state.union_population(), cfg.theta)
    ln = lognormal_shape_check(part.abundances())

    n = len(pops)
    sector = {h: s.id for s in state.sectors for h in s.members}
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            matrix[i][j] = matrix[j][i] = divergence(pops[i], pops[j])
    intra = [matrix[i][j] for i in range(n) for j in range(i + 1, n) if sector[i] == sector[j]]
    inter = [matrix[i][j] for i in range(n) for j in range(i + 1, n) if sector[i] != sector[j]]
    pairs = intra + inter

    def mean(xs):
        return math.fsum(xs) / len(xs) if xs else None

    return {
        "epoch": state.epoch,
        "species_area": {"curve": [list(p) for p in sa.curve], "z": sa.z, "c": sa.c,
                         "theta": cfg.theta},
        "lognormal": {"n_species": ln.n_species, "skewness": ln.skewness,
                      "pass": ln.passed, "conclusive": ln.conclusive},
        "divergence": {"mean_pairwise": mean(pairs), "intra_sector_mean": mean(intra),
                       "inter_sector_mean": mean(inter), "matrix": matrix},
    }


def write_run(out: Path, cfg: SimConfig, reports: Sequence[EpochReport],
              state: SimState | None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "config_resolved.json").write_text(dump_config(cfg))
    (out / "report.csv").write_text(report_csv([r.row() for r in reports]))
    if state is not None:
        (out / "network_final.edges").write_text(to_edge_list(state.network))
        (out / "network_final.json").write_text(to_json_adjacency(state.network))
        (out / "analysis.json").write_text(dump_json(analysis(state)))
