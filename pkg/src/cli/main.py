"""
Command-line front end

    python -m src.cli classify --class smooth data/corpus/example8_L3.json
    python -m src.cli report data/corpus
    python -m src.cli region data/distributions/dsbs_025.json --rates 0.82,1.0
    python -m src.cli witness data/corpus/mod2sum.json
    python -m src.cli oracle-check --count 200
    python -m src.cli oracle-check data/corpus/mod2sum.json --ci-partition "{1}/{2}"
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.config import LOG_LEVELS, Settings, load_settings
from src.models.distribution import load_distribution
from src.models.errors import PreconditionError, SpecificationError, SwClassError
from src.models.function_table import format_subset, load_function
from src.models.partitions import TerminalPartition
from src.models.results import Answer, SourceClass, Verdict
from src.classify.certification import SearchBudget
from src.classify.necessary import necessary_condition
from src.classify.pseudo_identity import classify_smooth
from src.cli.reports import build_function_report, conditions_document, render_matrix, report_directory, verdict_document
from src.oracle.agreement import agreement_report, agreement_sweep
from src.oracle.sampling import ci_falsifier
from src.rates.entropy import region_contains, sw_region, sw_vertices
from src.rates.independence import ci_factorization_deviation
from src.structure.conditions import check_ci_condition

logger = logging.getLogger(__name__)


def emit(document: Dict[str, Any], text: str, fmt: str):
    if fmt == "machine":
        print(json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(text)


def make_budget(args: argparse.Namespace, settings: Settings) -> SearchBudget:
    max_depth = args.max_depth if args.max_depth is not None else settings.max_depth
    try:
        return SearchBudget(max_depth=max_depth, max_nodes=settings.max_nodes)
    except ValidationError as e:
        raise SpecificationError(f"--max-depth must be >= 1, got {max_depth}") from e


def describe_verdict(verdict: Verdict) -> List[str]:
    lines = [f"verdict ({verdict.source_class.value}): {verdict.answer.value}"]
    if verdict.trace:
        lines.append("trace: " + " > ".join("{" + ",".join(map(str, s)) + "}" for s in verdict.trace))
    if verdict.certificate is not None:
        lines.append(f"certificate (depth {verdict.certificate.depth}):")
        lines.extend(f"  {i}. {step.describe()}" for i, step in enumerate(verdict.certificate.steps, start=1))
    if verdict.witness is not None:
        w = verdict.witness
        if w.kind == "projection":
            lines.append(f"witness: A={{{','.join(map(str, w.subset))}}} {w.first} vs {w.second}")
        else:
            lines.append(
                f"witness: A={{{','.join(map(str, w.subset))}}} m={w.block_length} "
                f"{w.extended_first} vs {w.extended_second}"
            )
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    return lines


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    f = load_function(args.function)
    source_class = SourceClass.from_flag(args.source_class)
    result = build_function_report(f, make_budget(args, settings))
    verdict = result["smooth"] if source_class == SourceClass.SMOOTH else result["iid"]
    report = result["report"]

    document = {
        "function": report.name,
        "alphabets": report.alphabets,
        "verdict": verdict_document(verdict),
        "conditions": conditions_document(report),
    }
    lines = [f"function: {report.name} ({'x'.join(map(str, report.alphabets))})"]
    lines.extend(describe_verdict(verdict))
    lines.append(render_matrix([report]))
    emit(document, "\n".join(lines), args.format)
    return 0


def cmd_report(args: argparse.Namespace, settings: Settings) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise SpecificationError(f"{directory} is not a directory")
    jobs = args.jobs if args.jobs is not None else settings.jobs
    reports = report_directory(directory, make_budget(args, settings), jobs=jobs)
    document = {"rows": [r.model_dump(mode="json") for r in reports]}
    emit(document, render_matrix(reports), args.format)
    return 0


def parse_rates(text: str) -> List[float]:
    try:
        return [float(r) for r in text.split(",")]
    except ValueError as e:
        raise SpecificationError(f"cannot parse rates {text!r}") from e


def cmd_region(args: argparse.Namespace, settings: Settings) -> int:
    f = load_function(args.function) if args.function else None
    P = load_distribution(args.distribution, f.alphabet_sizes if f is not None else None)
    region = sw_region(P)

    document: Dict[str, Any] = {
        "distribution": P.name,
        "constraints": {str(mask): value for mask, value in sorted(region.constraints.items())},
        "vertices": [list(v) for v in sw_vertices(region)],
    }
    lines = [f"distribution: {P.name}"]
    lines.extend(f"h({name}) = {value:.6f}" for name, value in region.by_name().items())

    if args.rates:
        rates = parse_rates(args.rates)
        inside = region_contains(region, rates)
        document["rates"] = rates
        document["contains"] = inside
        lines.append(f"rates {tuple(rates)}: {'inside' if inside else 'outside'} the region")

    if args.ci_partition:
        if f is None:
            raise PreconditionError("--ci-partition needs --function")
        part = TerminalPartition.parse(args.ci_partition, f.num_terminals)
        deviation = ci_factorization_deviation(P, f, part)
        document["ci_partition"] = part.describe()
        document["ci_deviation"] = deviation
        lines.append(f"factorization deviation for {part.describe()}: {deviation:.3g}")

    emit(document, "\n".join(lines), args.format)
    return 0


def cmd_witness(args: argparse.Namespace, settings: Settings) -> int:
    f = load_function(args.function)
    smooth = classify_smooth(f)
    necessary = necessary_condition(f)

    document = {
        "function": f.name,
        "smooth": verdict_document(smooth),
        "necessary": necessary.witness.model_dump(mode="json", exclude_none=True) if necessary.witness else None,
    }
    lines = [f"function: {f.name}"]
    if smooth.answer == Answer.IN_SW_CLASS:
        lines.append("pseudo identity, no smooth-source counterexample")
    else:
        lines.extend(describe_verdict(smooth)[1:])
    if necessary.witness is None:
        lines.append("necessary condition holds")
    else:
        w = necessary.witness
        lines.append(f"necessary condition fails on {{{format_subset(w.subset)}}}: {w.first} vs {w.second}")
    emit(document, "\n".join(lines), args.format)
    return 0


def cmd_falsify(args: argparse.Namespace, settings: Settings) -> int:
    f = load_function(args.function)
    part = TerminalPartition.parse(args.ci_partition, f.num_terminals)
    trials = args.trials if args.trials is not None else settings.falsifier_trials
    seed = args.seed if args.seed is not None else settings.seed
    if trials < 1:
        raise SpecificationError(f"--trials must be >= 1, got {trials}")

    holds = check_ci_condition(f, part).holds
    P = ci_falsifier(f, part, trials=trials, seed=seed)
    document: Dict[str, Any] = {
        "function": f.name,
        "ci_partition": part.describe(),
        "ci_condition": holds,
        "trials": trials,
        "seed": seed,
        "falsified": P is not None,
        "disagreements": [],
    }
    if P is not None:
        document["distribution"] = list(P.probabilities)
        document["ci_deviation"] = ci_factorization_deviation(P, f, part)
        if holds:
            document["disagreements"].append("CI condition holds but a distribution breaks the factorization")
        text = f"{f.name}: {part.describe()} falsified (deviation {document['ci_deviation']:.3g})"
    else:
        text = f"{f.name}: {part.describe()} not falsified in {trials} trials (seed {seed})"
    emit(document, text, args.format)
    return 0


def cmd_oracle_check(args: argparse.Namespace, settings: Settings) -> int:
    if args.ci_partition:
        if not args.function:
            raise PreconditionError("--ci-partition needs a function file")
        return cmd_falsify(args, settings)
    if args.function:
        f = load_function(args.function)
        problems = agreement_report(f)
        document: Dict[str, Any] = {"function": f.name, "disagreements": problems}
        text = "\n".join(problems) if problems else f"{f.name}: all references agree"
    else:
        seed = args.seed if args.seed is not None else settings.seed
        document = agreement_sweep(args.count, seed=seed)
        failures = document["disagreements"]
        text = f"{document['checked']} functions checked (seed {seed}), {len(failures)} with disagreements"
    emit(document, text, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="Decide whether a multiterminal function's rate region is the Slepian-Wolf region",
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None, help="Logging level (stderr)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--format", choices=["text", "machine"], default="text", help="Output format")

    p = sub.add_parser("classify", help="Classify one function file")
    p.add_argument("function", help="Function document (JSON)")
    p.add_argument("--class", dest="source_class", choices=["smooth", "iid"], default="iid")
    p.add_argument("--max-depth", type=int, default=None, help="Certificate length limit")
    common(p)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("report", help="Condition matrix for a directory of function files")
    p.add_argument("directory")
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None, help="Files classified concurrently")
    common(p)
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("region", help="Slepian-Wolf constraints of a distribution")
    p.add_argument("distribution", help="Distribution document (JSON)")
    p.add_argument("--function", default=None, help="Function document with matching alphabets")
    p.add_argument("--rates", default=None, help="Comma-separated rates r1,r2,...")
    p.add_argument("--ci-partition", default=None, help='Terminal partition such as "{1}/{2}"')
    common(p)
    p.set_defaults(handler=cmd_region)

    p = sub.add_parser("witness", help="Counterexample witnesses for one function")
    p.add_argument("function")
    common(p)
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("oracle-check", help="Cross-check deciders against brute-force references")
    p.add_argument("function", nargs="?", default=None)
    p.add_argument("--count", type=int, default=200, help="Random functions in the sweep")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ci-partition", default=None, help="Run the CI falsifier for this terminal partition")
    p.add_argument("--trials", type=int, default=None, help="Distributions tried by the falsifier")
    common(p)
    p.set_defaults(handler=cmd_oracle_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings()
        logging.basicConfig(
            level=args.log_level or settings.log_level,
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return args.handler(args, settings)
    except SwClassError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
