import json

import pytest

from rs2.cli import main
from rs2.graph import load_graph


def gen(tmp_path, name, *args):
    path = tmp_path / name
    assert main(["gen", "--out", str(path), *args]) == 0
    return path


class TestGen:
    def test_gnp_to_file(self, tmp_path):
        path = gen(tmp_path, "g.txt", "--model", "gnp", "--n", "30", "--prob", "0.2")
        g = load_graph(path.read_text())
        assert g.n == 30

    def test_gnp_to_stdout(self, capsys):
        assert main(["gen", "--model", "d-regular", "--n", "8", "--d", "2"]) == 0
        out = capsys.readouterr().out
        assert load_graph(out).m == 8

    def test_class_union(self, tmp_path):
        path = gen(
            tmp_path, "cu.txt", "--model", "class-union", "--class-exps", "6",
            "--epsilon", "12/25", "--padding", "50",
        )
        assert load_graph(path.read_text()).n > 50


class TestLinear:
    def test_run_with_report(self, tmp_path, capsys):
        graph = gen(tmp_path, "g.txt", "--model", "d-regular", "--n", "128", "--d", "16")
        report = tmp_path / "lin.json"
        rc = main(["linear", "--graph", str(graph), "--d0", "4", "--report", str(report)])
        assert rc == 0
        data = json.loads(report.read_text())
        assert data["valid"] and data["algorithm"] == "linear"
        err = capsys.readouterr().err
        assert "valid=True" in err

    def test_reports_byte_identical(self, tmp_path):
        graph = gen(tmp_path, "g.txt", "--model", "d-regular", "--n", "128", "--d", "16")
        r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
        main(["linear", "--graph", str(graph), "--d0", "4", "--report", str(r1)])
        main(["linear", "--graph", str(graph), "--d0", "4", "--report", str(r2)])
        assert r1.read_bytes() == r2.read_bytes()

    def test_baseline_random_flag(self, tmp_path):
        graph = gen(tmp_path, "g.txt", "--model", "d-regular", "--n", "128", "--d", "16")
        report = tmp_path / "base.json"
        rc = main([
            "linear", "--graph", str(graph), "--d0", "4",
            "--baseline-random", "--rng-seed", "7", "--report", str(report),
        ])
        assert rc == 0
        assert json.loads(report.read_text())["algorithm"] == "baseline-random"


class TestSublinear:
    def test_run_with_report(self, tmp_path):
        graph = gen(tmp_path, "g.txt", "--model", "d-regular", "--n", "256", "--d", "8")
        report = tmp_path / "sub.json"
        rc = main(["sublinear", "--graph", str(graph), "--report", str(report)])
        assert rc == 0
        data = json.loads(report.read_text())
        assert data["valid"] and data["algorithm"] == "sublinear"


class TestVerify:
    def test_members_list(self, tmp_path, capsys):
        graph = tmp_path / "p.txt"
        graph.write_text("0 1\n1 2\n2 3\n3 4\n")
        members = tmp_path / "m.json"
        members.write_text("[0, 3]")
        assert main(["verify", "--graph", str(graph), "--members", str(members)]) == 0
        assert "valid=True" in capsys.readouterr().out

    def test_report_dict_and_invalid(self, tmp_path, capsys):
        graph = tmp_path / "p.txt"
        graph.write_text("0 1\n1 2\n2 3\n3 4\n")
        members = tmp_path / "m.json"
        members.write_text(json.dumps({"ruling_set": {"members": [0, 1]}}))
        assert main(["verify", "--graph", str(graph), "--members", str(members)]) == 1
        assert "valid=False" in capsys.readouterr().out


class TestSweep:
    def test_csv_and_figures(self, tmp_path):
        config = tmp_path / "sweep.json"
        config.write_text(json.dumps([
            {"algorithm": "linear",
             "generator": {"model": "d-regular", "n": 128, "d": 16},
             "params": {"d0_exp": 4}},
            {"algorithm": "linear",
             "generator": {"model": "d-regular", "n": 256, "d": 16},
             "params": {"d0_exp": 4}},
            {"algorithm": "sublinear",
             "generator": {"model": "d-regular", "n": 256, "d": 8}},
            {"algorithm": "sublinear",
             "generator": {"model": "d-regular", "n": 256, "d": 32}},
        ]))
        out = tmp_path / "sweep.csv"
        plots = tmp_path / "figs"
        rc = main(["sweep", "--config", str(config), "--out", str(out), "--plot-dir", str(plots)])
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 5
        assert lines[0].startswith("schema,algorithm")
        assert (plots / "rounds_vs_n.png").exists()
        assert (plots / "rounds_vs_delta.png").exists()

    def test_empty_config_rejected(self, tmp_path):
        config = tmp_path / "empty.json"
        config.write_text("[]")
        assert main(["sweep", "--config", str(config), "--out", str(tmp_path / "o.csv")]) == 2


def test_budget_env_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("RS2_BUDGET", "4096")
    graph = gen(tmp_path, "g.txt", "--model", "d-regular", "--n", "128", "--d", "16")
    assert main(["linear", "--graph", str(graph), "--d0", "4"]) == 0
