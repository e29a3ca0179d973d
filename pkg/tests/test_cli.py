from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import pytest

from moldebate.cli import main

DEMO = Path(str(resources.files("moldebate").joinpath("data", "demo")))


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def molecule_file(tmp_path):
    path = tmp_path / "mols.smi"
    path.write_text("CCO\nCCN\nc1ccccc1\nCC(C)C\n# comment\n\nCCCO\n")
    return path


@pytest.fixture
def demo_run(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "run", "--config", str(DEMO / "config.json"), "--out", str(tmp_path)
    )
    assert code == 0
    run_dir = next(line for line in out.splitlines() if line.startswith("run dir:"))
    return Path(run_dir.split("run dir:")[1].strip())


class TestIngest:
    def test_valid_corpus(self, tmp_path, capsys):
        out_dir = tmp_path / "index"
        code, out, _ = run_cli(
            capsys,
            "ingest",
            "--pubs", str(DEMO / "publications.jsonl"),
            "--mols", str(DEMO / "molecules.jsonl"),
            "--out", str(out_dir),
        )
        assert code == 0
        meta = json.loads((out_dir / "index_meta.json").read_text())
        assert meta["publications"] == 5
        assert meta["molecules_rejected"] == 0
        assert (out_dir / "publications.jsonl").exists()
        assert (out_dir / "molecules.jsonl").exists()

    def test_missing_file_is_usage_error(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "ingest", "--pubs", str(tmp_path / "nope.jsonl"),
            "--out", str(tmp_path / "o"),
        )
        assert code == 2
        assert "not found" in err

    def test_bad_jsonl_line_is_runtime_error(self, tmp_path, capsys):
        pubs = tmp_path / "pubs.jsonl"
        pubs.write_text('{"id": "a", "title": "t", "abstract": "x", "authors": ["q"], "year": 2020}\n{oops\n')
        code, _, err = run_cli(
            capsys, "ingest", "--pubs", str(pubs), "--out", str(tmp_path / "o"),
        )
        assert code == 1
        assert ":2:" in err


class TestRun:
    def test_demo_campaign_summary(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--config", str(DEMO / "config.json"),
            "--out", str(tmp_path),
        )
        assert code == 0
        assert "run id:" in out
        summary = json.loads(out.split("\n", 2)[2])
        assert summary["pool_size"] == 45
        assert summary["termination"] == "max_rounds"

    def test_missing_config_is_usage_error(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "run", "--config", str(tmp_path / "no.json"))
        assert code == 2

    def test_lead_opt_without_seed_is_usage_error(self, tmp_path, capsys):
        data = json.loads((DEMO / "config.json").read_text())
        data["task"]["objective"] = "lead_optimization"
        config = tmp_path / "c.json"
        config.write_text(json.dumps(data))
        code, _, err = run_cli(capsys, "run", "--config", str(config))
        assert code == 2
        assert "seed" in err

    def test_unreachable_http_backend_is_runtime_error(self, tmp_path, capsys):
        data = json.loads((DEMO / "config.json").read_text())
        data["backend"] = {"kind": "http", "endpoint": "http://127.0.0.1:9", "model": "m"}
        for name in ("publications.jsonl", "molecules.jsonl"):
            (tmp_path / name).write_text((DEMO / name).read_text())
        data["paths"]["output_dir"] = str(tmp_path / "runs")
        config = tmp_path / "config.json"
        config.write_text(json.dumps(data))
        code, _, err = run_cli(capsys, "run", "--config", str(config))
        assert code == 1


class TestScore:
    def test_int_div_and_circles(self, molecule_file, capsys):
        code, out, _ = run_cli(capsys, "score", "--mols", str(molecule_file))
        assert code == 0
        report = json.loads(out)
        assert report["molecules"] == 5
        assert 0.0 <= report["int_div"] <= 1.0
        assert 1 <= report["num_circles"] <= 5

    def test_duplicates_give_zero_diversity(self, tmp_path, capsys):
        path = tmp_path / "dups.smi"
        path.write_text("CCO\nOCC\nCCO\n")
        code, out, _ = run_cli(capsys, "score", "--mols", str(path), "--metrics", "int_div")
        assert code == 0
        assert json.loads(out)["int_div"] == 0.0

    def test_single_molecule_int_div_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "one.smi"
        path.write_text("CCO\n")
        code, _, err = run_cli(capsys, "score", "--mols", str(path), "--metrics", "int_div")
        assert code == 2

    def test_topk_auc_matches_brute_force(self, tmp_path, capsys):
        import random

        rng = random.Random(4)
        smiles = [f"{'C' * (i + 1)}O" for i in range(10)]
        scores = [round(rng.random(), 6) for _ in range(10)]
        mols = tmp_path / "m.smi"
        mols.write_text("\n".join(smiles) + "\n")
        score_file = tmp_path / "s.txt"
        score_file.write_text("\n".join(str(s) for s in scores) + "\n")
        code, out, _ = run_cli(
            capsys, "score", "--mols", str(mols), "--scores", str(score_file),
            "--metrics", "topk_auc", "--auc-k", "10", "--budget", "1000",
        )
        assert code == 0
        report = json.loads(out)
        means = []
        for i in range(1, len(scores) + 1):
            top = sorted(scores[:i], reverse=True)[: min(10, i)]
            means.append(sum(top) / len(top))
        expected = (sum(means) + means[-1] * (1000 - len(scores))) / 1000
        assert report["topk_auc"] == pytest.approx(expected, abs=1e-12)
        assert report["top1"] == max(scores)

    def test_constraints_with_mock_oracle(self, tmp_path, capsys):
        path = tmp_path / "m.smi"
        path.write_text("CCO\nCCCCCCCC\n")
        code, out, _ = run_cli(
            capsys, "score", "--mols", str(path), "--metrics", "constraints",
            "--seed", "CCO",
        )
        assert code == 0
        report = json.loads(out)
        assert len(report["constraints"]) == 2
        sims = {
            r["candidate"]: next(c for c in r["checks"] if c["name"] == "sim")
            for r in report["constraints"]
        }
        assert sims["CCO"]["value"] == 1.0

    def test_unparseable_molecule_is_runtime_error(self, tmp_path, capsys):
        path = tmp_path / "bad.smi"
        path.write_text("CCO\nnot_a_smiles((\n")
        code, _, err = run_cli(capsys, "score", "--mols", str(path))
        assert code == 1
        assert ":2:" in err

    def test_unknown_metric_is_usage_error(self, molecule_file, capsys):
        code, _, err = run_cli(
            capsys, "score", "--mols", str(molecule_file), "--metrics", "froodiness"
        )
        assert code == 2


class TestReport:
    def test_report_renders_after_run(self, demo_run, capsys):
        code, out, _ = run_cli(capsys, "report", "--run", str(demo_run))
        assert code == 0
        assert "# Campaign report" in out
        assert "Final ranking" in out
        assert out.count("### Round") == 3
        report_dir = demo_run / "report"
        assert (report_dir / "report.md").exists()
        assert (report_dir / "ranking.csv").exists()
        assert (report_dir / "pool_growth.png").exists()
        assert (report_dir / "vote_distribution.png").exists()
        csv_lines = (report_dir / "ranking.csv").read_text().splitlines()
        assert len(csv_lines) == 46  # header + 45 candidates

    def test_report_contains_top10(self, demo_run, capsys):
        code, out, _ = run_cli(capsys, "report", "--run", str(demo_run), "--no-figures")
        assert code == 0
        table_rows = [line for line in out.splitlines() if line.startswith("| ")]
        assert len(table_rows) == 11  # header + 10 ranked entries

    def test_nonexistent_dir_is_usage_error(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "report", "--run", str(tmp_path / "missing"))
        assert code == 2
