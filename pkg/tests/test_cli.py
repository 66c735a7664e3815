import csv
import json

import pytest

from qkdring.cli import main
from qkdring.config import AppConfig, parse_config
from qkdring.errors import ConfigError
from qkdring.skr_model import BUILTIN_PROFILES, skr_bps

SMALL_SWEEP = ["--n-min", "5", "--n-max", "8", "--len-min", "2", "--len-max", "6", "--len-step", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSkr:
    def test_high_profile_table(self, capsys, tmp_path):
        out_path = tmp_path / "skr.csv"
        code, _, _ = run(capsys, "skr", "--profile", "high", "--a-max-db", "40", "--step-db", "0.21",
                         "--out", str(out_path))
        assert code == 0
        rows = list(csv.DictReader(out_path.open()))
        assert len(rows) == 191
        assert list(rows[0]) == ["a_db", "distance_km_at_alpha", "skr_bps"]
        assert float(rows[0]["skr_bps"]) == pytest.approx(skr_bps(BUILTIN_PROFILES["high"].params, 0), rel=1e-8)
        rates = [float(r["skr_bps"]) for r in rows]
        assert all(b <= a for a, b in zip(rates, rates[1:]))
        assert float(rows[10]["distance_km_at_alpha"]) == pytest.approx(10.0)

    def test_stdout_and_bad_step(self, capsys):
        code, out, _ = run(capsys, "skr", "--a-max-db", "1", "--step-db", "0.5")
        assert code == 0 and len(out.splitlines()) == 4
        code, _, err = run(capsys, "skr", "--step-db", "0")
        assert code == 1 and "step" in err

    def test_unknown_profile_named(self, capsys):
        code, _, err = run(capsys, "skr", "--profile", "medium")
        assert code == 1 and "medium" in err


class TestCompare:
    def test_three_nodes_relayed_wins(self, capsys):
        code, out, _ = run(capsys, "compare", "--nodes", "3", "--length-km", "0.01")
        doc = json.loads(out)
        assert code == 0
        assert doc["r"] < 0
        assert sum(doc["schedule"].values()) == pytest.approx(1.0, abs=1e-12)
        assert set(doc) >= {"g_relayed_bps", "g_switched_bps", "r", "schedule"}

    def test_factor_two_flag(self, capsys):
        _, out1, _ = run(capsys, "compare", "--nodes", "9", "--length-km", "2")
        _, out2, _ = run(capsys, "compare", "--nodes", "9", "--length-km", "2", "--gs-factor-two")
        g1, g2 = json.loads(out1)["g_switched_bps"], json.loads(out2)["g_switched_bps"]
        assert g2 == pytest.approx(2 * g1, rel=1e-15)

    def test_infeasible_reports_peer(self, capsys):
        code, out, err = run(capsys, "compare", "--nodes", "20", "--length-km", "30")
        doc = json.loads(out)
        assert code == 1
        assert doc["g_switched_bps"] == 0.0 and doc["schedule"] is None and doc["r"] == -1.0
        assert doc["infeasible"]["peer"] > 1
        assert "infeasible" in err

    def test_bad_ring(self, capsys):
        code, _, err = run(capsys, "compare", "--nodes", "2", "--length-km", "1")
        assert code == 1 and "n_nodes" in err


class TestSweep:
    def test_json_and_csv_identical(self, capsys, tmp_path):
        c, j = tmp_path / "g.csv", tmp_path / "g.json"
        assert run(capsys, "sweep", *SMALL_SWEEP, "--out", str(c))[0] == 0
        assert run(capsys, "sweep", *SMALL_SWEEP, "--format", "json", "--out", str(j))[0] == 0
        rows = list(csv.DictReader(c.open()))
        doc = json.loads(j.read_text())
        assert [float(r["r"]) for r in rows] == doc["r"]
        assert [float(r["g_switched_bps"]) for r in rows] == doc["g_switched_bps"]
        assert [float(r["g_relayed_bps"]) for r in rows] == doc["g_relayed_bps"]
        assert doc["n_values"] == [5, 6, 7, 8] and doc["lengths_km"] == [2, 4, 6]

    def test_crossover_summary_on_stderr(self, capsys, tmp_path):
        _, out, err = run(capsys, "sweep", *SMALL_SWEEP, "--out", str(tmp_path / "g.csv"))
        assert out == "" and "L=2 km" in err

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, "sweep", *SMALL_SWEEP)
        _, b, _ = run(capsys, "sweep", *SMALL_SWEEP)
        assert a == b and len(a.splitlines()) == 13

    def test_unwritable_output(self, capsys, tmp_path):
        bad = tmp_path / "nope" / "g.csv"
        code, _, err = run(capsys, "sweep", *SMALL_SWEEP, "--out", str(bad))
        assert code == 1 and "g.csv" in err


class TestIngest:
    def test_pairs(self, capsys, pair_logs):
        paths = [str(p) for p in pair_logs.values()]
        code, out, _ = run(capsys, "ingest", *paths, "--pair", "A1B1:A1B2", "--pair", "A2B2:A2B1")
        doc = json.loads(out)
        assert code == 0
        drops = {d["unmatched"]: d["db_drop"] for d in doc["drops"]}
        assert drops["A1B2"] > 20
        assert drops["A2B1"] == pytest.approx(14.0, abs=0.2)
        labels = [s["label"] for s in doc["summaries"]]
        assert labels == list(pair_logs)

    def test_single_file(self, capsys, pair_logs):
        code, out, _ = run(capsys, "ingest", str(pair_logs["A1B2"]))
        doc = json.loads(out)
        assert code == 0 and "drops" not in doc and len(doc["summaries"]) == 1

    def test_missing_file_named(self, capsys, pair_logs, tmp_path):
        missing = tmp_path / "ghost.csv"
        code, out, err = run(capsys, "ingest", str(pair_logs["A1B1"]), str(missing))
        assert code == 1 and "ghost.csv" in err
        assert len(json.loads(out)["summaries"]) == 1

    def test_bad_file_does_not_abort_others(self, capsys, pair_logs, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("t_s,skr_bps,qber\n0,1,0.9\n")
        code, out, err = run(capsys, "ingest", str(bad), str(pair_logs["A2B1"]))
        assert code == 1 and "bad.csv:2" in err
        assert [s["label"] for s in json.loads(out)["summaries"]] == ["A2B1"]

    def test_bad_pairing(self, capsys, pair_logs):
        code, _, err = run(capsys, "ingest", str(pair_logs["A1B1"]), "--pair", "A1B1:ZZ")
        assert code == 1 and "ZZ" in err


class TestConfig:
    def write(self, tmp_path, doc):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(doc))
        return str(p)

    def test_defaults(self):
        cfg = AppConfig()
        assert set(cfg.profiles) == {"experimental", "low", "high"}
        assert not cfg.gs_factor_two and not cfg.adjacent_uses_chord

    @pytest.mark.parametrize(
        "doc",
        [{"profile": []}, {"ring": {"nodes": 5}}, {"flags": {"fast": True}},
         {"profiles": [{"name": "x", "mu": 0.5, "extra": 1}]}, {"flags": {"gs_factor_two": "yes"}},
         {"profiles": [{"name": "high"}, {"name": "high"}]}, {"profiles": [{"name": "new", "eta_bob": 0.1}]}],
    )
    def test_rejects(self, doc):
        with pytest.raises(ConfigError):
            parse_config(doc)

    def test_override_and_addition(self):
        full = dict(BUILTIN_PROFILES["low"].to_dict(), name="custom", eta_bob=0.1)
        cfg = parse_config({"profiles": [{"name": "high", "eta_bob": 0.3}, full]})
        assert cfg.profiles["high"].params.eta_bob == 0.3
        assert cfg.profiles["high"].params.mu == BUILTIN_PROFILES["high"].params.mu
        assert cfg.profiles["custom"].params.eta_bob == 0.1

    def test_config_drives_compare_and_flags_override(self, capsys, tmp_path):
        path = self.write(tmp_path, {"ring": {"n_nodes": 9, "adjacent_len_km": 2.0, "switch_penalty_db": 3.0},
                                     "flags": {"gs_factor_two": True}})
        _, out, _ = run(capsys, "compare", "--config", path)
        doc = json.loads(out)
        assert doc["n_nodes"] == 9 and doc["length_km"] == 2.0
        _, out_pen, _ = run(capsys, "compare", "--config", path, "--penalty-db", "5")
        assert json.loads(out_pen)["g_switched_bps"] < doc["g_switched_bps"]
        _, plain, _ = run(capsys, "compare", "--nodes", "9", "--length-km", "2", "--penalty-db", "3")
        assert doc["g_switched_bps"] == pytest.approx(2 * json.loads(plain)["g_switched_bps"], rel=1e-15)

    def test_bad_config_file(self, capsys, tmp_path):
        path = self.write(tmp_path, {"rings": {}})
        code, _, err = run(capsys, "sweep", "--config", path)
        assert code == 1 and "rings" in err
        code, _, err = run(capsys, "sweep", "--config", str(tmp_path / "none.json"))
        assert code == 1 and "none.json" in err


@pytest.mark.parametrize("cmd", ["compare", "sweep"])
def test_help_lists_flags(capsys, cmd):
    with pytest.raises(SystemExit) as info:
        main([cmd, "--help"])
    assert info.value.code == 0
    text = capsys.readouterr().out
    flags = ["--config", "--profile", "--out", "--format"] if cmd == "sweep" else ["--config", "--profile", "--nodes", "--length-km"]
    for flag in flags + ["--adjacent-uses-chord", "--gs-factor-two"]:
        assert flag in text
