"""Command-line front end.

Subcommands::

    list
    describe <model-id> [--format json|text]
    select --scenario <file>
    run <model-id> --params <file> [--out <file>]
    compare --models <a>,<b> --params <file> --sweep name=lo:hi:n --quantity <name> --out <csv>
    gradeability --vehicle <file> --solver sweep|bisection [--increment <pct>] [--tol <pct>]
                 [--tiers rigid,spring,dynamic] --out <file.csv|file.txt|->

Exit codes: 0 success, 2 usage or parse error, 3 model error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .core import FeatureSet, Scenario, render_gray_box, select_model
from .errors import ModelError, NumericalError, ParameterError, UsageError
from .gradeability import Bisection, Sweep
from .params import dump_document, load_document
from .registry import MODELS, get_model

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MODEL = 3
EXIT_NUMERICAL = 4


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_list(args):
    for model in sorted(MODELS, key=lambda m: m.id):
        ext = f" extends {model.extends}" if model.extends else ""
        print(f"{model.id:<15} rank {model.cost.compute_rank}  {model.cost.input_count:>2} inputs  "
              f"{len(model.features):>2} features{ext}")


def cmd_describe(args):
    fmt = "json" if args.format == "json" else "text"
    _write(None, render_gray_box(get_model(args.model_id), fmt))


def load_scenario(source) -> Scenario:
    doc = load_document(source)
    unknown = set(doc) - {"params", "required_features"}
    if unknown:
        raise ParameterError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ParameterError("scenario params must be a JSON object")
    return Scenario(params, FeatureSet(doc.get("required_features", [])))


def candidate_models(scenario: Scenario, ids=None):
    """Registry for ``select``: the named models, or every model whose frame
    parameters the scenario defines."""
    if ids:
        return [get_model(i) for i in ids]
    chosen = []
    for model in MODELS:
        needed = {p.parameter for p in model.frame.predicates}
        if needed <= set(scenario.params):
            chosen.append(model)
        else:
            logger.info("skipping %s: scenario lacks %s", model.id,
                        ", ".join(sorted(needed - set(scenario.params))))
    return chosen


def cmd_select(args):
    scenario = load_scenario(args.scenario)
    ids = [m.strip() for m in args.models.split(",")] if args.models else None
    print(select_model(candidate_models(scenario, ids), scenario).id)


def cmd_run(args):
    doc = load_document(args.params)
    result = harness.run_model(args.model_id, doc)
    result["params"] = doc
    _write(args.out, dump_document(result))


def cmd_compare(args):
    ids = [m.strip() for m in args.models.split(",")]
    if len(ids) != 2:
        raise ParameterError("--models takes exactly two comma-separated ids")
    table = harness.run_compare(
        ids, load_document(args.params), harness.parse_sweep(args.sweep), args.quantity,
        workers=args.workers,
    )
    _write(args.out, table.to_csv())


def cmd_gradeability(args):
    if args.solver == "sweep":
        method = Sweep(args.increment)
    else:
        method = Bisection(lo=args.lo, hi=args.hi, tol=args.tol)
    tiers = [t.strip() for t in args.tiers.split(",") if t.strip()]
    rows = harness.gradeability_report(load_document(args.vehicle), method, tiers)
    fmt = args.format
    if fmt is None:
        fmt = "csv" if args.out and Path(args.out).suffix.lower() == ".csv" else "text"
    text = harness.report_csv(rows) if fmt == "csv" else harness.report_text(rows)
    _write(args.out, text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fidelity-models",
        description="Multi-fidelity model registry: describe, select, run and compare models.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list registered models")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("describe", help="render a model's gray box")
    p.add_argument("model_id")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("select", help="pick the lowest-fidelity valid model for a scenario")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--models", help="comma-separated candidate ids (default: every model "
                                     "whose frame parameters the scenario defines)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("run", help="evaluate one model")
    p.add_argument("model_id")
    p.add_argument("--params", required=True, help="parameter JSON file")
    p.add_argument("--out", help="output JSON file (default: stdout)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="sweep one parameter through two models, emit CSV")
    p.add_argument("--models", required=True, help="two comma-separated model ids")
    p.add_argument("--params", required=True, help="base parameter JSON file")
    p.add_argument("--sweep", required=True, help="name=lo:hi:n")
    p.add_argument("--quantity", required=True)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.add_argument("--workers", type=int, default=1, help="threads for sweep points")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gradeability", help="critical grade of each gradeability tier")
    p.add_argument("--vehicle", required=True, help="vehicle parameter JSON file")
    p.add_argument("--solver", choices=["sweep", "bisection"], default="sweep")
    p.add_argument("--increment", type=float, default=0.1, help="sweep step in percent grade")
    p.add_argument("--tol", type=float, default=0.01, help="bisection bracket width in percent grade")
    p.add_argument("--lo", type=float, default=0.0, help="bisection lower bracket")
    p.add_argument("--hi", type=float, default=400.0, help="bisection upper bracket")
    p.add_argument("--tiers", default="rigid,spring,dynamic")
    p.add_argument("--format", choices=["csv", "text"], help="default: from the --out suffix")
    p.add_argument("--out", help="output file, .csv for CSV (default: text on stdout)")
    p.set_defaults(func=cmd_gradeability)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
