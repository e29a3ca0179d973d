from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import pytest

from moldebate.campaign import load_config, run_campaign
from moldebate.errors import ConfigError, ScenarioError

DEMO = Path(str(resources.files("moldebate").joinpath("data", "demo")))


def demo_config(tmp_path, **overrides):
    merged = {"paths.output_dir": str(tmp_path)}
    merged.update(overrides)
    return load_config(DEMO / "config.json", merged)


def strip_timestamps(obj):
    if isinstance(obj, dict):
        return {
            k: strip_timestamps(v)
            for k, v in obj.items()
            if k not in ("ts", "started_at", "ended_at")
        }
    if isinstance(obj, list):
        return [strip_timestamps(v) for v in obj]
    return obj


def run_files(run_dir: Path) -> dict[str, str]:
    files = {}
    for name in ("transcript.jsonl", "pool.jsonl"):
        rows = [
            strip_timestamps(json.loads(line))
            for line in (run_dir / name).read_text().splitlines()
            if line.strip()
        ]
        files[name] = json.dumps(rows, sort_keys=True)
    files["result.json"] = json.dumps(
        strip_timestamps(json.loads((run_dir / "result.json").read_text())),
        sort_keys=True,
    )
    return files


class TestDemoCampaign:
    def test_runs_to_completion(self, tmp_path):
        summary, result = run_campaign(demo_config(tmp_path))
        # Frozen from the scenario script: 45 unique candidates
        # (14 + 16 + 15 per round), one duplicate, one repair, one
        # replacement; the run stops at the 3-round limit.
        assert summary["pool_size"] == 45
        assert summary["rounds"] == 3
        assert summary["termination"] == "max_rounds"
        assert result.stats["duplicate_proposals"] == 1
        assert result.stats["repair_prompts"] == 1
        assert result.stats["replacements"] == 1
        assert 0.0 <= summary["int_div"] <= 1.0
        assert 1 <= summary["num_circles"] <= 45
        assert 0.0 <= summary["topk_auc"] <= 1.0

    def test_oracle_scoring_summary(self, tmp_path):
        summary, result = run_campaign(demo_config(tmp_path))
        assert summary["top1"] >= summary["top10_mean"]
        result_json = json.loads(
            (Path(summary["run_dir"]) / "result.json").read_text()
        )
        assert result_json["oracle_property"] == "gsk3b"
        assert len(result_json["scored_calls"]) == 45

    def test_pool_file_unique_canonicals(self, tmp_path):
        summary, _ = run_campaign(demo_config(tmp_path))
        lines = (Path(summary["run_dir"]) / "pool.jsonl").read_text().splitlines()
        canonicals = [json.loads(line)["canonical"] for line in lines if line.strip()]
        assert len(canonicals) == len(set(canonicals)) == 45

    def test_replay_identical_across_runs_and_parallelism(self, tmp_path):
        summary_a, _ = run_campaign(demo_config(tmp_path / "a"))
        summary_b, _ = run_campaign(demo_config(tmp_path / "b"))
        summary_c, _ = run_campaign(
            demo_config(tmp_path / "c", **{"debate.parallelism": 4})
        )
        assert summary_a["run_id"] == summary_b["run_id"] == summary_c["run_id"]
        files_a = run_files(Path(summary_a["run_dir"]))
        files_b = run_files(Path(summary_b["run_dir"]))
        files_c = run_files(Path(summary_c["run_dir"]))
        assert files_a == files_b == files_c

    def test_profiles_are_grounded_in_corpus(self, tmp_path):
        _, result = run_campaign(demo_config(tmp_path))
        setup = result.transcript  # engine transcript has no setup event
        assert setup[0]["phase"] == "proposal"


class TestLeadOptimizationCampaign:
    @pytest.fixture
    def lead_dir(self, tmp_path):
        data = json.loads((DEMO / "config.json").read_text())
        data["task"]["objective"] = "lead_optimization"
        data["task"]["seed"] = "CCOc1ccccc1"
        data["task"]["property"] = "docking:parp1"
        data["oracle"] = {"kind": "mock", "seed": 3, "pinned": {"qed": 0.8, "sa": 2.5}}
        lead = tmp_path / "lead"
        lead.mkdir()
        for name in ("publications.jsonl", "molecules.jsonl", "script.jsonl"):
            (lead / name).write_text((DEMO / name).read_text())
        (lead / "config.json").write_text(json.dumps(data))
        return lead

    def test_constraints_checked_on_top_candidates(self, lead_dir, tmp_path):
        config = load_config(
            lead_dir / "config.json", {"paths.output_dir": str(tmp_path / "runs")}
        )
        summary, _ = run_campaign(config)
        result = json.loads((Path(summary["run_dir"]) / "result.json").read_text())
        reports = result["constraint_reports"]
        assert len(reports) == 10
        for report in reports:
            names = [c["name"] for c in report["checks"]]
            assert names == ["sim", "qed", "sa"]
            # qed and sa are pinned to passing values; only sim can fail.
            assert all(
                c["verdict"] == "pass" for c in report["checks"] if c["name"] != "sim"
            )
        assert summary["constraints_passed"] == sum(
            1 for r in reports if r["overall"] == "pass"
        )

    def test_minimize_direction_scoring(self, lead_dir, tmp_path):
        config = load_config(
            lead_dir / "config.json", {"paths.output_dir": str(tmp_path / "runs")}
        )
        summary, _ = run_campaign(config)
        # docking is minimize: top1 is the lowest score, and the
        # budget-normalized AUC (a maximize-only metric) is omitted.
        assert summary["top1"] <= summary["top10_mean"]
        assert "topk_auc" not in summary


class TestProfileModeOverride:
    def test_vanilla_mode_runs_with_same_script(self, tmp_path):
        summary, result = run_campaign(
            demo_config(tmp_path, **{"profile.mode": "vanilla"})
        )
        assert summary["pool_size"] == 45
        run_dir = Path(summary["run_dir"])
        setup = json.loads(
            (run_dir / "transcript.jsonl").read_text().splitlines()[0]
        )
        assert setup["phase"] == "setup"
        profiles = setup["payload"]["profiles"]
        assert all(p["mode"] == "vanilla" for p in profiles)
        assert all(not p["publications"] and not p["molecules"] for p in profiles)

    @pytest.mark.parametrize(
        "mode",
        [
            "full", "vanilla", "keyword", "role", "llm_generated",
            "single", "massive_single", "random",
        ],
    )
    def test_every_profile_mode_completes(self, tmp_path, mode):
        summary, _ = run_campaign(demo_config(tmp_path, **{"profile.mode": mode}))
        assert summary["pool_size"] == 45
        assert summary["termination"] == "max_rounds"
        setup = json.loads(
            (Path(summary["run_dir"]) / "transcript.jsonl").read_text().splitlines()[0]
        )
        assert {p["mode"] for p in setup["payload"]["profiles"]} == {mode}

    def test_llm_generated_profiles_drop_hallucinated_smiles(self, tmp_path):
        summary, _ = run_campaign(
            demo_config(tmp_path, **{"profile.mode": "llm_generated"})
        )
        setup = json.loads(
            (Path(summary["run_dir"]) / "transcript.jsonl").read_text().splitlines()[0]
        )
        for profile in setup["payload"]["profiles"]:
            assert len(profile["molecules"]) == 1  # the invalid one was dropped
            assert profile["publications"]

    def test_mode_changes_run_identity(self, tmp_path):
        full, _ = run_campaign(demo_config(tmp_path / "f"))
        vanilla, _ = run_campaign(
            demo_config(tmp_path / "v", **{"profile.mode": "vanilla"})
        )
        assert full["run_id"] != vanilla["run_id"]


class TestAbortedRunReporting:
    def test_report_renders_on_aborted_run(self, tmp_path):
        from moldebate.reporting import write_report

        script_lines = (DEMO / "script.jsonl").read_text().splitlines()
        kept = [line for line in script_lines if json.loads(line)["round"] < 2]
        scenario = tmp_path / "scenario"
        scenario.mkdir()
        for name in ("publications.jsonl", "molecules.jsonl", "config.json"):
            (scenario / name).write_text((DEMO / name).read_text())
        (scenario / "script.jsonl").write_text("\n".join(kept) + "\n")
        config = load_config(
            scenario / "config.json", {"paths.output_dir": str(tmp_path / "runs")}
        )
        with pytest.raises(ScenarioError):
            run_campaign(config)
        run_dir = next((tmp_path / "runs").iterdir())
        markdown, report_dir = write_report(run_dir)
        assert "aborted" in markdown
        assert (report_dir / "report.md").exists()
        assert (report_dir / "ranking.csv").exists()


class TestCampaignFailures:
    def test_missing_script_key_aborts_with_partial_transcript(self, tmp_path):
        # Truncate the script: drop every round-3 response.
        script_lines = (DEMO / "script.jsonl").read_text().splitlines()
        kept = [
            line for line in script_lines if json.loads(line)["round"] < 3
        ]
        scenario_dir = tmp_path / "scenario"
        scenario_dir.mkdir()
        for name in ("publications.jsonl", "molecules.jsonl"):
            (scenario_dir / name).write_text((DEMO / name).read_text())
        (scenario_dir / "script.jsonl").write_text("\n".join(kept) + "\n")
        config_data = json.loads((DEMO / "config.json").read_text())
        (scenario_dir / "config.json").write_text(json.dumps(config_data))
        config = load_config(
            scenario_dir / "config.json",
            {"paths.output_dir": str(tmp_path / "runs")},
        )
        with pytest.raises(ScenarioError):
            run_campaign(config)
        run_dirs = list((tmp_path / "runs").iterdir())
        assert len(run_dirs) == 1
        result = json.loads((run_dirs[0] / "result.json").read_text())
        assert result["status"] == "aborted"
        transcript = (run_dirs[0] / "transcript.jsonl").read_text().splitlines()
        rounds_seen = {json.loads(line)["round"] for line in transcript}
        assert 2 in rounds_seen  # two full rounds persisted before the abort


class TestConfigValidation:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{broken")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_unknown_section(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"tasks": {}}))
        with pytest.raises(ConfigError, match="tasks"):
            load_config(path)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"debate": {"n_agents": 3}}))
        with pytest.raises(ConfigError, match="n_agents"):
            load_config(path)

    def test_lead_optimization_needs_seed(self, tmp_path):
        data = json.loads((DEMO / "config.json").read_text())
        data["task"]["objective"] = "lead_optimization"
        data["task"]["seed"] = None
        path = tmp_path / "c.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ConfigError, match="seed"):
            load_config(path)

    def test_missing_corpus_file(self, tmp_path):
        data = json.loads((DEMO / "config.json").read_text())
        path = tmp_path / "c.json"
        path.write_text(json.dumps(data))  # relative corpus paths now dangle
        with pytest.raises(ConfigError, match="publications"):
            load_config(path)

    def test_overrides_win_over_file(self, tmp_path):
        config = demo_config(tmp_path, **{"debate.seed": 99})
        assert config.data["debate"]["seed"] == 99

    def test_unknown_override(self, tmp_path):
        with pytest.raises(ConfigError):
            demo_config(tmp_path, **{"debate.bogus": 1})

    def test_defaults_match_collaboration_hyperparameters(self, tmp_path):
        path = tmp_path / "c.json"
        data = json.loads((DEMO / "config.json").read_text())
        del data["debate"]
        data["backend"]["script"] = str(DEMO / "script.jsonl")
        data["paths"] = {
            "publications": str(DEMO / "publications.jsonl"),
            "molecules": str(DEMO / "molecules.jsonl"),
            "output_dir": str(tmp_path),
        }
        path.write_text(json.dumps(data))
        config = load_config(path)
        debate = config.debate
        assert debate.n_scientists == 50
        assert debate.proposals_per_agent == 30
        assert debate.max_rounds == 20
        assert config.data["backend"]["temperature"] == 0.7
