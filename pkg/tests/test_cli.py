import csv
import json

import pytest

from eve_sim.cli import main
from eve_sim.config import config_from_dict, config_to_dict, dump_config, load_config

SMALL = {"schema_version": 1, "n_habitats": 4, "epochs": 10, "generations_per_epoch": 1,
         "ga": {"pop_capacity": 8}, "topology": {"k": 2}}


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(SMALL))
    return p


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_run_writes_outputs(cfg_path, tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg_path), "--out", str(out)]) == 0
    assert len(rows(out / "report.csv")) == 11
    for name in ("config_resolved.json", "network_final.edges", "network_final.json", "analysis.json"):
        assert (out / name).exists()
    header = (out / "report.csv").read_text().splitlines()[0]
    assert header == ("epoch,best_fitness_mean,mean_fitness_mean,species_count,shannon,migrations,"
                      "accepted,mean_weight,clustering,path_length_or_blank,components,feedback_active")


def test_run_is_byte_identical_across_threads(cfg_path, tmp_path):
    outs = []
    for i, threads in enumerate(["1", "1", "4"]):
        out = tmp_path / f"o{i}"
        assert main(["run", "--config", str(cfg_path), "--out", str(out), "--threads", threads]) == 0
        outs.append(out)
    texts = {(o / "report.csv").read_bytes() for o in outs}
    assert len(texts) == 1
    assert len({(o / "network_final.edges").read_bytes() for o in outs}) == 1


def test_seed_flag_overrides(cfg_path, tmp_path):
    main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "a")])
    main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "b"), "--seed", "9"])
    assert (tmp_path / "a/report.csv").read_bytes() != (tmp_path / "b/report.csv").read_bytes()
    assert json.loads((tmp_path / "b/config_resolved.json").read_text())["seed"] == 9


def test_unknown_key_exits_2_and_names_it(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({**SMALL, "bogus_key": 1, "ga": {"mutation_rate": 7}}))
    assert main(["run", "--config", str(p), "--out", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err.strip()
    assert len(err.splitlines()) == 1 and err.startswith("eve-sim: error:")
    assert "bogus_key" in err and "ga.mutation_rate" in err


def test_missing_config_exits_2(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2


def netstats(tmp_path, capsys, text, tau="0"):
    p = tmp_path / "g.edges"
    p.write_text(text)
    code = main(["netstats", "--edges", str(p), "--tau", tau])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if code == 0 else out.err)


def test_netstats_triangle(tmp_path, capsys):
    code, doc = netstats(tmp_path, capsys, "0 1 0.5\n1 2 0.5\n0 2 0.5\n")
    assert code == 0
    assert (doc["clustering"], doc["path_length"], doc["components"]) == (1.0, 1.0, 1)


def test_netstats_disjoint_edges(tmp_path, capsys):
    code, doc = netstats(tmp_path, capsys, "0 1 0.5\n2 3 0.5\n")
    assert doc["path_length"] == "disconnected" and doc["components"] == 2


def test_netstats_threshold_isolates_all(tmp_path, capsys):
    code, doc = netstats(tmp_path, capsys, "0 1 0.1\n1 2 0.1\n", tau="0.5")
    assert doc["components"] == 3 and doc["edges_kept"] == 0


def test_netstats_bad_line(tmp_path, capsys):
    code, err = netstats(tmp_path, capsys, "0 1 0.1\n1 two 0.1\n")
    assert code == 2 and "line 2" in err


def test_sweep_cross_product(cfg_path, tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep", "--config", str(cfg_path), "--param", "p_mig",
                 "--values", "0,0.5,1.0", "--seeds", "2", "--out", str(out)]) == 0
    rs = rows(out / "sweep.csv")
    assert len(rs) == 6
    assert [float(r["value"]) for r in rs] == [0.0, 0.0, 0.5, 0.5, 1.0, 1.0]
    assert all(r["migrations"] == "0" for r in rs if float(r["value"]) == 0.0)
    assert len(list((out / "runs").iterdir())) == 6


def test_single_value_sweep_matches_run(cfg_path, tmp_path):
    main(["sweep", "--config", str(cfg_path), "--param", "eta", "--values", "0.05",
          "--out", str(tmp_path / "sw")])
    main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "run")])
    last = rows(tmp_path / "run/report.csv")[-1]
    summary = rows(tmp_path / "sw/sweep.csv")[0]
    assert {k: summary[k] for k in last} == last


def test_sweep_unknown_param(cfg_path, tmp_path, capsys):
    assert main(["sweep", "--config", str(cfg_path), "--param", "nope", "--values", "1",
                 "--out", str(tmp_path)]) == 2
    assert "nope" in capsys.readouterr().err


def test_recipe_smallworld_shape(tmp_path, capsys):
    assert main(["recipe", "smallworld", "--out", str(tmp_path), "--seeds", "2"]) == 0
    doc = json.loads((tmp_path / "smallworld.json").read_text())
    for key in ("C_ratio", "L_ratio", "C_ratio_pass", "L_ratio_pass", "pass"):
        assert key in doc


def test_recipe_convergence_shape(tmp_path):
    assert main(["recipe", "convergence", "--out", str(tmp_path), "--seeds", "2"]) == 0
    doc = json.loads((tmp_path / "convergence.json").read_text())
    assert 0.0 <= doc["success_fraction"] <= 1.0 and len(doc["generations_to_optimum"]) == 2


def test_recipe_unknown(tmp_path, capsys):
    assert main(["recipe", "nope", "--out", str(tmp_path)]) == 2
    assert "smallworld" in capsys.readouterr().err


def test_config_round_trip(cfg_path):
    cfg = load_config(cfg_path)
    again = config_from_dict(json.loads(dump_config(cfg)))
    assert again == cfg and dump_config(again) == dump_config(cfg)
    assert config_to_dict(again)["schema_version"] == 1
