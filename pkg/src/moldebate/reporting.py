"""Campaign reports: markdown, CSV ranking, and rendered figures.

Reads a finished (or aborted) run directory and produces a human-readable
summary.  Figures are written as PNG next to the delimited output in
``<run>/report/``: per-round pool growth with diversity overlays, and the
final vote distribution.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .errors import PersistenceError

__all__ = ["load_run", "build_markdown", "write_report"]


def load_run(run_dir: str | Path) -> dict:
    """Parse a run directory into one dict: result, transcript, metrics."""
    run_dir = Path(run_dir)
    result_path = run_dir / "result.json"
    if not result_path.exists():
        raise PersistenceError(f"not a run directory (no result.json): {run_dir}")
    data = {"run_dir": run_dir, "result": json.loads(result_path.read_text())}
    for name in ("transcript", "metrics", "pool"):
        path = run_dir / f"{name}.jsonl"
        rows = []
        if path.exists():
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    rows.append(json.loads(line))
        data[name] = rows
    return data


def _ranking_rows(result: dict) -> list[dict]:
    debate = result.get("result", {})
    by_canonical = {c["canonical"]: c for c in debate.get("pool", [])}
    scores = {
        entry["molecule"]: entry["score"]
        for entry in result.get("scored_calls", [])
    }
    rows = []
    for rank, canonical in enumerate(debate.get("ranking", []), start=1):
        candidate = by_canonical.get(canonical, {})
        rows.append(
            {
                "rank": rank,
                "canonical": canonical,
                "proposer": candidate.get("proposer", ""),
                "round": candidate.get("round_proposed", ""),
                "votes": candidate.get("vote_count", 0),
                "mean_score": round(candidate.get("mean_score", 0.0), 4),
                "oracle_score": scores.get(canonical, ""),
            }
        )
    return rows


def build_markdown(data: dict, figures: list[str] | None = None) -> str:
    result = data["result"]
    debate = result.get("result", {})
    summary = result.get("summary", {})
    lines = [
        f"# Campaign report: {result.get('run_id', '?')}",
        "",
        f"- status: {result.get('status', '?')}",
        f"- task: {debate.get('task_id', '?')}",
        f"- rounds: {debate.get('rounds_run', '?')} "
        f"(termination: {debate.get('termination', '?')})",
        f"- pool size: {len(debate.get('pool', []))}",
        f"- corpus fingerprint: {result.get('corpus_fingerprint', '')[:12]}",
    ]
    for key in ("int_div", "num_circles", "top1", "top10_mean", "topk_auc"):
        if summary.get(key) is not None:
            value = summary[key]
            text = f"{value:.4f}" if isinstance(value, float) else str(value)
            lines.append(f"- {key}: {text}")
    if result.get("status") == "aborted":
        lines.append(f"- error: {result.get('error', 'unknown')}")

    lines.append("")
    lines.append("## Rounds")
    metric_rows = data["metrics"] or debate.get("round_metrics", [])
    by_round: dict[int, dict] = {}
    for event in data["transcript"]:
        if event.get("round", 0) < 1:
            continue
        bucket = by_round.setdefault(
            event["round"], {"proposals": 0, "critiques": 0, "abstentions": 0}
        )
        if event["phase"] == "proposal":
            bucket["proposals"] += len(event["payload"].get("accepted", []))
        elif event["phase"].startswith("critique"):
            bucket["critiques"] += len(event["payload"].get("critiqued", []))
        elif event["phase"] == "voting" and event["payload"].get("abstained"):
            bucket["abstentions"] += 1
    for snapshot in metric_rows:
        round_index = snapshot.get("round")
        lines.append("")
        lines.append(f"### Round {round_index}")
        activity = by_round.get(round_index, {})
        int_div = snapshot.get("int_div")
        lines.append(
            f"- pool size {snapshot.get('pool_size')}, "
            f"int_div {int_div if int_div is None else format(int_div, '.4f')}, "
            f"#circles {snapshot.get('num_circles')}"
        )
        if activity:
            lines.append(
                f"- {activity['proposals']} proposals accepted, "
                f"{activity['critiques']} critiques, "
                f"{activity['abstentions']} voting abstentions"
            )

    lines.append("")
    lines.append("## Final ranking (top 10)")
    lines.append("")
    lines.append("| rank | molecule | proposer | round | votes | mean score |")
    lines.append("|-----:|----------|----------|------:|------:|-----------:|")
    for row in _ranking_rows(result)[:10]:
        lines.append(
            f"| {row['rank']} | `{row['canonical']}` | {row['proposer']} "
            f"| {row['round']} | {row['votes']} | {row['mean_score']} |"
        )

    reports = result.get("constraint_reports")
    if reports:
        lines.append("")
        lines.append("## Lead-optimization constraints (top 10)")
        for report in reports:
            checks = ", ".join(
                f"{c['name']}={c['value'] if c['value'] is not None else '?'}"
                f" ({c['verdict']})"
                for c in report["checks"]
            )
            lines.append(f"- `{report['candidate']}`: {report['overall']} [{checks}]")

    if figures:
        lines.append("")
        lines.append("## Figures")
        for name in figures:
            lines.append(f"![{name}]({name})")
    lines.append("")
    return "\n".join(lines)


def _render_figures(data: dict, report_dir: Path) -> list[str]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    metric_rows = data["metrics"] or data["result"].get("result", {}).get(
        "round_metrics", []
    )
    if metric_rows:
        rounds = [row["round"] for row in metric_rows]
        fig, left = plt.subplots(figsize=(6.4, 4.0))
        left.plot(rounds, [row["pool_size"] for row in metric_rows], "o-", color="tab:blue")
        left.set_xlabel("round")
        left.set_ylabel("pool size", color="tab:blue")
        left.set_xticks(rounds)
        right = left.twinx()
        int_divs = [row.get("int_div") for row in metric_rows]
        circles = [row.get("num_circles") for row in metric_rows]
        right.plot(rounds, int_divs, "s--", color="tab:green", label="int_div")
        right.set_ylabel("internal diversity", color="tab:green")
        right.set_ylim(0, 1)
        left2 = left.twinx()
        left2.spines["right"].set_position(("outward", 45))
        left2.plot(rounds, circles, "^:", color="tab:red")
        left2.set_ylabel("#circles", color="tab:red")
        left.set_title("Pool growth and diversity per round")
        fig.tight_layout()
        fig.savefig(report_dir / "pool_growth.png", dpi=120)
        plt.close(fig)
        written.append("pool_growth.png")

    ranking_rows = _ranking_rows(data["result"])[:15]
    if ranking_rows:
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        labels = [row["canonical"] for row in ranking_rows]
        votes = [row["votes"] for row in ranking_rows]
        ax.barh(range(len(labels)), votes, color="tab:blue")
        ax.set_yticks(range(len(labels)))
        ax.set_yticklabels(labels, fontsize=7, family="monospace")
        ax.invert_yaxis()
        ax.set_xlabel("votes (final round)")
        ax.set_title("Vote distribution, top-ranked candidates")
        fig.tight_layout()
        fig.savefig(report_dir / "vote_distribution.png", dpi=120)
        plt.close(fig)
        written.append("vote_distribution.png")
    return written


def write_report(run_dir: str | Path, figures: bool = True) -> tuple[str, Path]:
    """Render report.md, ranking.csv, and figures into ``<run>/report/``.

    Returns (markdown text, report directory).
    """
    data = load_run(run_dir)
    report_dir = Path(run_dir) / "report"
    report_dir.mkdir(exist_ok=True)

    rows = _ranking_rows(data["result"])
    with open(report_dir / "ranking.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(
            handle,
            fieldnames=[
                "rank",
                "canonical",
                "proposer",
                "round",
                "votes",
                "mean_score",
                "oracle_score",
            ],
        )
        writer.writeheader()
        writer.writerows(rows)

    figure_names = _render_figures(data, report_dir) if figures else []
    markdown = build_markdown(data, figures=figure_names)
    (report_dir / "report.md").write_text(markdown, encoding="utf-8")
    return markdown, report_dir
