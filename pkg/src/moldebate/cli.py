"""Operator CLI.

Subcommands: ``ingest`` (build and serialize a corpus index), ``run``
(execute a campaign from a config file), ``score`` (standalone metrics over
a molecule file), ``report`` (render a finished run).  Exit codes: 0
success, 1 runtime failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .campaign import load_config, run_campaign
from .chem import parse
from .corpus import corpus_fingerprint, ingest
from .errors import ConfigError, MetricError, MolDebateError
from .metrics import ScoredCall, int_div, mean_pairwise_similarity, num_circles, topk_auc
from .oracle import ConstraintSet, HttpOracle, MockOracle, check_constraints
from .reporting import write_report

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _read_molecule_file(path: Path) -> list:
    if not path.exists():
        raise ConfigError(f"molecule file not found: {path}")
    molecules = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for line_number, line in enumerate(
            path.read_text(encoding="utf-8").splitlines(), start=1
        ):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                molecules.append(parse(text))
            except MolDebateError as exc:
                raise MolDebateError(f"{path.name}:{line_number}: {exc}")
    if not molecules:
        raise ConfigError(f"no molecules in {path}")
    return molecules


def _read_scores_file(path: Path, expected: int) -> list[float]:
    if not path.exists():
        raise ConfigError(f"scores file not found: {path}")
    scores = []
    for line_number, line in enumerate(
        path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            scores.append(float(text))
        except ValueError:
            raise ConfigError(f"{path.name}:{line_number}: not a number: {text!r}")
    if len(scores) != expected:
        raise ConfigError(
            f"{path.name}: {len(scores)} scores for {expected} molecules"
        )
    return scores


def cmd_ingest(args: argparse.Namespace) -> int:
    pubs = Path(args.pubs)
    mols = Path(args.mols) if args.mols else None
    if not pubs.exists():
        raise ConfigError(f"publications file not found: {pubs}")
    if mols is not None and not mols.exists():
        raise ConfigError(f"molecules file not found: {mols}")
    index, report = ingest(pubs, mols)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "publications.jsonl").write_text(
        "\n".join(
            json.dumps(
                {
                    "id": p.id,
                    "title": p.title,
                    "abstract": p.abstract,
                    "authors": list(p.authors),
                    "year": p.year,
                },
                ensure_ascii=False,
            )
            for p in index.publications.values()
        )
        + "\n",
        encoding="utf-8",
    )
    molecule_rows = []
    for scientist, store in sorted(index.molecules.items()):
        for canonical, (record, count) in sorted(store.items()):
            molecule_rows.append(
                json.dumps(
                    {
                        "smiles": canonical,
                        "scientist_ids": [scientist],
                        "source_publication": record.source_publication,
                        "multiplicity": count,
                    },
                    ensure_ascii=False,
                )
            )
    (out / "molecules.jsonl").write_text(
        ("\n".join(molecule_rows) + "\n") if molecule_rows else "",
        encoding="utf-8",
    )
    meta = {
        "publications": report.publications_accepted,
        "molecules_accepted": report.molecules_accepted,
        "molecules_rejected": report.molecules_rejected,
        "rejections": report.rejections,
        "corpus_fingerprint": corpus_fingerprint(*filter(None, [pubs, mols])),
    }
    (out / "index_meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(json.dumps(meta, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    overrides: dict = {}
    if args.out is not None:
        # CLI paths are CWD-relative; config-file paths are config-relative.
        overrides["paths.output_dir"] = str(Path(args.out).resolve())
    if args.parallelism is not None:
        overrides["debate.parallelism"] = args.parallelism
    if args.seed is not None:
        overrides["debate.seed"] = args.seed
    if args.mode is not None:
        overrides["profile.mode"] = args.mode
    config = load_config(args.config, overrides)
    summary, _ = run_campaign(config)
    print(f"run id: {summary['run_id']}")
    print(f"run dir: {summary['run_dir']}")
    printable = {
        key: value
        for key, value in summary.items()
        if key not in ("run_id", "run_dir") and value is not None
    }
    print(json.dumps(printable, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    molecules = _read_molecule_file(Path(args.mols))
    requested = [m.strip() for m in args.metrics.split(",") if m.strip()]
    known = {"int_div", "num_circles", "topk_auc", "constraints"}
    unknown = set(requested) - known
    if unknown:
        raise ConfigError(f"unknown metrics: {sorted(unknown)} (choose from {sorted(known)})")
    report: dict = {"molecules": len(molecules)}
    if "int_div" in requested:
        if len(molecules) < 2:
            raise MetricError("int_div needs at least 2 molecules")
        report["int_div"] = int_div(molecules)
        report["mean_pairwise_similarity"] = mean_pairwise_similarity(molecules)
    if "num_circles" in requested:
        report["num_circles"] = num_circles(molecules, h=args.circle_threshold)
    scores = None
    if args.scores:
        scores = _read_scores_file(Path(args.scores), expected=len(molecules))
        ordered = sorted(scores, reverse=True)
        top = ordered[: min(10, len(ordered))]
        report["top1"] = ordered[0]
        report["top10_mean"] = sum(top) / len(top)
        if "topk_auc" not in requested:
            requested.append("topk_auc")
    if "topk_auc" in requested:
        if scores is None:
            raise ConfigError("topk_auc needs --scores")
        calls = [
            ScoredCall(call_index=i, molecule=mol.canonical, score=score)
            for i, (mol, score) in enumerate(zip(molecules, scores), start=1)
        ]
        report["topk_auc"] = topk_auc(calls, k=args.auc_k, budget=args.budget)
    if "constraints" in requested:
        if not args.seed_smiles:
            raise ConfigError("constraints need --seed")
        oracle = (
            HttpOracle(args.oracle) if args.oracle != "mock" else MockOracle()
        )
        constraints = ConstraintSet(seed=args.seed_smiles)
        results = []
        for mol in molecules:
            check = check_constraints(mol.canonical, constraints, oracle)
            results.append(
                {
                    "candidate": check.candidate,
                    "overall": check.overall,
                    "checks": [
                        {
                            "name": c.name,
                            "value": c.value,
                            "threshold": c.threshold,
                            "verdict": c.verdict,
                        }
                        for c in check.checks
                    ],
                }
            )
        report["constraints"] = results
        report["constraints_passed"] = sum(
            1 for r in results if r["overall"] == "pass"
        )
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    run_dir = Path(args.run)
    if not run_dir.is_dir():
        raise ConfigError(f"run directory not found: {run_dir}")
    markdown, report_dir = write_report(run_dir, figures=not args.no_figures)
    print(markdown)
    print(f"[report written to {report_dir}]", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moldebate",
        description="Multi-agent debate engine for molecular discovery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="build and serialize a corpus index")
    p_ingest.add_argument("--pubs", required=True, help="publications JSONL file")
    p_ingest.add_argument("--mols", default=None, help="molecules JSONL file")
    p_ingest.add_argument("--out", required=True, help="output directory")
    p_ingest.set_defaults(func=cmd_ingest)

    p_run = sub.add_parser("run", help="execute a campaign from a config file")
    p_run.add_argument("--config", required=True, help="campaign config JSON")
    p_run.add_argument("--out", default=None, help="override paths.output_dir")
    p_run.add_argument("--parallelism", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=None, help="override debate.seed")
    p_run.add_argument("--mode", default=None, help="override profile.mode")
    p_run.set_defaults(func=cmd_run)

    p_score = sub.add_parser("score", help="standalone metrics over a molecule file")
    p_score.add_argument("--mols", required=True, help="SMILES file, one per line")
    p_score.add_argument("--scores", default=None, help="aligned score file")
    p_score.add_argument(
        "--seed", dest="seed_smiles", default=None, help="seed SMILES for constraints"
    )
    p_score.add_argument(
        "--metrics",
        default="int_div,num_circles",
        help="comma list: int_div,num_circles,topk_auc,constraints",
    )
    p_score.add_argument("--circle-threshold", type=float, default=0.75)
    p_score.add_argument("--auc-k", type=int, default=10)
    p_score.add_argument("--budget", type=int, default=1000)
    p_score.add_argument(
        "--oracle", default="mock", help="oracle endpoint URL, or 'mock'"
    )
    p_score.set_defaults(func=cmd_score)

    p_report = sub.add_parser("report", help="render a campaign report")
    p_report.add_argument("--run", required=True, help="run directory")
    p_report.add_argument("--no-figures", action="store_true")
    p_report.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, MetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MolDebateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
