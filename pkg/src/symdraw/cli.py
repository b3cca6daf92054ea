"""Command line entry point: build / verify / score / report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dataset import (
    RECIPE_NAMES,
    build_dataset,
    make_recipe,
    score_manifest,
    verify_dataset,
)
from .evaluation import NEGATIVE_LABEL, POSITIVE_LABEL, binary_comparison_table
from .layouts import SYMMETRIC_CLASSES, LayoutClass


def _cmd_build(args) -> int:
    recipe = make_recipe(args.recipe, seed=args.seed, scale=args.scale)
    flags = {"recipe": args.recipe, "seed": args.seed, "scale": args.scale, "out": str(args.out)}
    manifest = build_dataset(recipe, args.out, flags=flags)
    print(f"built {recipe.total} samples -> {manifest}")
    return 0


def _cmd_verify(args) -> int:
    report = verify_dataset(args.manifest)
    for violation in report.violations:
        print(f"VIOLATION {violation}")
    print(f"checked {report.samples_checked} samples, {len(report.violations)} violations")
    return 0 if report.ok else 1


def _cmd_score(args) -> int:
    out = Path(args.out) if args.out else None
    lines = []
    for record in score_manifest(args.manifest, args.metric):
        lines.append(json.dumps(record, sort_keys=True))
    text = "\n".join(lines) + "\n"
    if out:
        out.write_text(text)
        print(f"wrote {len(lines)} score records -> {out}")
    else:
        sys.stdout.write(text)
    return 0


def _binary_truth(label: str) -> str:
    return POSITIVE_LABEL if LayoutClass(label) in SYMMETRIC_CLASSES else NEGATIVE_LABEL


def _cmd_report(args) -> int:
    rows: dict[str, list[tuple[str, str]]] = {}
    with open(args.scores) as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            predicted = POSITIVE_LABEL if rec["value"] >= args.threshold else NEGATIVE_LABEL
            rows.setdefault(rec["metric"], []).append((predicted, _binary_truth(rec["label"])))
    if args.predictions:
        with open(args.predictions) as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                rows.setdefault(rec.get("classifier", "cnn"), []).append(
                    (rec["predicted"], rec["actual"])
                )
    if not rows:
        print("no score records found", file=sys.stderr)
        return 2
    table, records = binary_comparison_table(rows)
    print(table)
    if args.out:
        with open(args.out, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")

    if args.expect:
        expectations = json.loads(Path(args.expect).read_text())
        by_name = {r["classifier"]: r for r in records}
        failed = False
        for exp in expectations:
            rec = by_name.get(exp["classifier"])
            if rec is None:
                print(f"EXPECTATION FAILED: no classifier {exp['classifier']!r}")
                failed = True
                continue
            value = rec[exp["measure"]]
            if "min" in exp and value < exp["min"]:
                print(
                    f"EXPECTATION FAILED: {exp['classifier']} {exp['measure']} "
                    f"{value:.4f} < {exp['min']}"
                )
                failed = True
            if "max" in exp and value > exp["max"]:
                print(
                    f"EXPECTATION FAILED: {exp['classifier']} {exp['measure']} "
                    f"{value:.4f} > {exp['max']}"
                )
                failed = True
        if failed:
            return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symdraw",
        description="Build, verify and score symmetric graph-drawing datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a dataset from a named recipe")
    p.add_argument("--recipe", required=True, choices=RECIPE_NAMES)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("verify", help="re-check oracles and image integrity")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("score", help="score every sample with one metric")
    p.add_argument("--manifest", required=True)
    p.add_argument("--metric", required=True, choices=("purchase", "klapaukh"))
    p.add_argument("--out")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("report", help="classify scores and tabulate measures")
    p.add_argument("--scores", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--predictions", help="extra (predicted, actual) records to merge")
    p.add_argument("--expect", help="JSON expectation file; violations exit nonzero")
    p.add_argument("--out", help="write machine-readable report records here")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
