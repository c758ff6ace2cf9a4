"""
Command-line interface for quantum tree spectra.

Subcommands: enumerate, poly, classes, spectrum, invert, verify-paper.
Results go to stdout as text, JSON or CSV; logs go to stderr.
Exit codes: 0 success, 2 usage error, 3 input-data error, 4 numeric failure.
"""

import argparse
import csv
import functools
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from charpoly import dirichlet_poly, sine_exponent
from config import config
from cospectral import find_classes, verify_catalog
from data_models import (
    BranchData, CanonicalCode, Command, CospectralClass, OutputFormat, RunConfig, SpectrumMethod
)
from exceptions import (
    AmbiguousInputError, ClusterAmbiguityError, ConvergenceFailure, DictionaryFormatError,
    EmptyInteriorError, GraphValidationError, InvalidRangeError, OracleMismatchError,
    UsageError, ZeroPolynomialError
)
from graph_core import BoundaryConfig, Graph, parse_edge_list, pendant_vertices, tree_from_code
from inverse import recover_trees
from logging_config import get_logger, log_oracle_event
from polynomial import normalize
from spectrum import closed_form_spectrum, det_scan, direct_spectrum, spectra_agree
from storage_manager import storage_manager
from tree_enum import count_by_pendants, enumerate_trees

logger = get_logger('cli')

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4

SIGN_NOTE = "P is determined up to a constant multiple; published tables may print it with the opposite sign"

# Options whose values may start with a minus sign
_SIGNED_LIST_OPTIONS = ("--alphas",)


@dataclass
class CommandResult:
    """Output of one command in all three encodings."""
    payload: Dict[str, Any]
    text: List[str]
    header: List[str] = field(default_factory=list)
    rows: List[List[Any]] = field(default_factory=list)

    def render(self, output_format: OutputFormat) -> str:
        if output_format == OutputFormat.JSON:
            return json.dumps(self.payload, indent=2) + "\n"
        if output_format == OutputFormat.CSV:
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(self.header)
            writer.writerows(self.rows)
            return buffer.getvalue()
        return "\n".join(self.text) + "\n"


def handle_errors(f: Callable[..., int]) -> Callable[..., int]:
    """Map exceptions to exit codes and report them on stderr."""
    @functools.wraps(f)
    def wrapper(*args, **kwargs) -> int:
        try:
            return f(*args, **kwargs)
        except UsageError as e:
            logger.error(f"Usage error in {f.__name__}: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except (ConvergenceFailure, OracleMismatchError, ClusterAmbiguityError) as e:
            logger.error(f"Numeric failure in {f.__name__}: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_NUMERIC
        except (GraphValidationError, EmptyInteriorError, DictionaryFormatError, AmbiguousInputError,
                InvalidRangeError, ZeroPolynomialError, OSError) as e:
            logger.error(f"Input error in {f.__name__}: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT
        except Exception as e:
            logger.error(f"Unexpected error in {f.__name__}: {e}")
            print("error: an unexpected internal error occurred", file=sys.stderr)
            return EXIT_NUMERIC
    return wrapper


def _edges_of(code: CanonicalCode) -> List[List[int]]:
    return [list(edge) for edge in tree_from_code(code).sorted_edges]


def _edge_text(edges: Sequence[Sequence[int]]) -> str:
    return " ".join(f"{u}-{v}" for u, v in edges)


def _member_records(codes: Sequence[CanonicalCode]) -> List[Dict[str, Any]]:
    return [{"code": str(code), "edges": _edges_of(code)} for code in codes]


def _class_record(cls: CospectralClass) -> Dict[str, Any]:
    record = cls.key.to_dict()
    record["members"] = _member_records(cls.members)
    return record


def _read_graph(path: str) -> Graph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_edge_list(text)


def cmd_enumerate(run: RunConfig) -> CommandResult:
    catalog = enumerate_trees(run.p)
    buckets = count_by_pendants(catalog)
    trees = []
    text = [f"p={run.p}: {len(catalog)} trees",
            "buckets (p_pen:count): " + " ".join(f"{k}:{v}" for k, v in buckets.items())]
    rows = []
    for tree, code in catalog:
        p_pen = len(pendant_vertices(tree))
        edges = [list(edge) for edge in tree.sorted_edges]
        trees.append({"code": str(code), "p_pen": p_pen, "edges": edges})
        text.append(f"{code}  p_pen={p_pen}  edges: {_edge_text(edges)}")
        rows.append([str(code), p_pen, _edge_text(edges)])
    payload = {"p": run.p, "count": len(catalog),
               "buckets": {str(k): v for k, v in buckets.items()}, "trees": trees}
    return CommandResult(payload, text, ["code", "p_pen", "edges"], rows)


def cmd_poly(run: RunConfig) -> CommandResult:
    graph = _read_graph(run.input_path)
    boundary = BoundaryConfig.parse(graph, run.dirichlet)
    poly = dirichlet_poly(graph, boundary)
    normalized = normalize(poly)
    exponent = sine_exponent(graph, boundary)
    payload = {
        "p": graph.p,
        "g": graph.g,
        "r": boundary.r,
        "dirichlet": sorted(boundary.dirichlet_set),
        "sine_exponent": exponent,
        "poly": poly.to_json(),
        "poly_text": poly.format(),
        "normalized": normalized.to_json(),
        "normalized_text": normalized.format(),
        "note": SIGN_NOTE,
    }
    text = [
        f"P(z) = {poly.format()}",
        f"normalized: {normalized.format()}",
        f"sine exponent g-p+r = {exponent}",
        f"note: {SIGN_NOTE}",
    ]
    rows = [[graph.p, graph.g, boundary.r, exponent, poly.format(), normalized.format()]]
    return CommandResult(payload, text, ["p", "g", "r", "sine_exponent", "poly", "normalized"], rows)


def cmd_classes(run: RunConfig) -> CommandResult:
    classes = find_classes(run.p)
    payload = {"p": run.p, "classes": [_class_record(cls) for cls in classes]}
    if not classes:
        text = [f"p={run.p}: no cospectral classes"]
    else:
        text = [f"p={run.p}: {len(classes)} cospectral classes"]
    rows = []
    for cls in classes:
        text.append(f"({cls.key.p},{cls.key.p_pen}) {cls.key.poly.format()}: {cls.size} trees")
        for code in cls.members:
            text.append(f"  {code}  edges: {_edge_text(_edges_of(code))}")
            rows.append([cls.key.p, cls.key.p_pen, cls.key.poly.format(), str(code), _edge_text(_edges_of(code))])
    return CommandResult(payload, text, ["p", "p_pen", "poly", "code", "edges"], rows)


def _write_plot_data(graph: Graph, boundary: BoundaryConfig, run: RunConfig) -> None:
    scan = det_scan(graph, boundary, run.l, run.x_max)
    with open(run.plot_data, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["x", "sign", "log10_abs_det"])
        for x, sign, magnitude in zip(scan.x, scan.sign, scan.log10_abs):
            writer.writerow([repr(float(x)), int(sign), repr(float(magnitude))])
    logger.info(f"Wrote determinant scan to {run.plot_data}")


def cmd_spectrum(run: RunConfig) -> CommandResult:
    graph = _read_graph(run.input_path)
    boundary = BoundaryConfig.parse(graph, run.dirichlet)
    if run.method == SpectrumMethod.DIRECT:
        primary = direct_spectrum(graph, boundary, run.l, run.x_max)
        secondary = None
    else:
        primary = closed_form_spectrum(graph, boundary, run.l, run.x_max)
        secondary = direct_spectrum(graph, boundary, run.l, run.x_max) if run.method == SpectrumMethod.BOTH else None
    if run.plot_data:
        _write_plot_data(graph, boundary, run)

    payload: Dict[str, Any] = {"method": run.method.value}
    payload.update(primary.to_dict())
    text = [f"method={run.method.value} l={run.l} x_max={run.x_max}",
            f"zero eigenvalue multiplicity: {primary.zero_multiplicity}"]
    header = ["x", "lambda", "multiplicity"]
    rows: List[List[Any]] = [[repr(pt.x), repr(pt.lam), pt.multiplicity] for pt in primary.eigenvalues]
    text.extend(f"x={pt.x:.12f}  lambda={pt.lam:.12f}  multiplicity={pt.multiplicity}" for pt in primary.eigenvalues)
    if secondary is not None:
        agree, gap = spectra_agree(primary, secondary)
        payload["direct"] = [pt.to_dict() for pt in secondary.eigenvalues]
        payload["agreement"] = {"agree": agree, "max_dx": gap if math.isfinite(gap) else None}
        text.append(f"closed/direct agreement: {'yes' if agree else 'NO'} (max |dx| = {gap:.3e})")
        if agree:
            header.append("direct_x")
            for row, pt in zip(rows, secondary.eigenvalues):
                row.append(repr(pt.x))
        else:
            log_oracle_event("spectrum_disagreement", {
                "closed": len(primary.eigenvalues), "direct": len(secondary.eigenvalues), "max_dx": gap,
            })
    return CommandResult(payload, text, header, rows)


def cmd_invert(run: RunConfig) -> CommandResult:
    p = len(run.alphas) + run.p_pen_tilde
    dictionary = storage_manager.get_or_build_dictionary(
        max(config.dictionary_max_p, p), run.dictionary_path
    )
    branches = BranchData(
        alpha_values=tuple(run.alphas),
        pi_branch_count=run.p_pen_tilde - 1,
        p_tilde=len(run.alphas),
        p_pen_tilde=run.p_pen_tilde,
    )
    codes = recover_trees(branches, run.l, dictionary)
    payload = {
        "p": p,
        "p_pen": run.p_pen_tilde,
        "alphas": list(branches.alpha_values),
        "gammas": branches.gammas(run.l),
        "branch_count": branches.branch_count,
        "candidates": _member_records(codes),
    }
    text = [f"p={p} p_pen={run.p_pen_tilde}: {len(codes)} matching trees" if codes
            else f"p={p} p_pen={run.p_pen_tilde}: no matching tree"]
    text.extend(f"{code}  edges: {_edge_text(_edges_of(code))}" for code in codes)
    rows = [[str(code), _edge_text(_edges_of(code))] for code in codes]
    return CommandResult(payload, text, ["code", "edges"], rows)


def cmd_verify_paper(run: RunConfig) -> CommandResult:
    entries = storage_manager.load_published_catalog(run.catalog_path)
    p_max = run.p_max if run.p_max is not None else max(e.p for e in entries)
    reports = []
    text = []
    rows = []
    totals = {"matched": 0, "corrections": 0, "unmatched_entries": 0, "unmatched_computed": 0}
    for p in range(run.p_min, p_max + 1):
        report = verify_catalog(p, entries)
        classes = find_classes(p)
        record = report.to_dict()
        record["classes"] = [_class_record(cls) for cls in classes]
        reports.append(record)
        totals["matched"] += len(report.matches)
        totals["corrections"] += len(report.corrections)
        totals["unmatched_entries"] += len(report.unmatched_entries)
        totals["unmatched_computed"] += len(report.unmatched_computed)
        text.append(f"p={p}: {len(report.matches)} matched, {len(report.corrections)} corrected, "
                    f"{len(report.unmatched_entries)} unmatched entries, "
                    f"{len(report.unmatched_computed)} unmatched polynomials")
        if report.unlisted_buckets:
            text.append(f"  buckets not listed: {', '.join(map(str, report.unlisted_buckets))}")
        for c in report.corrections:
            text.append(f"  correction ({p},{c.entry.p_pen}) #{c.entry.index}: "
                        f"{c.entry.printed} -> {c.corrected.format()}")
            rows.append([p, c.entry.p_pen, c.entry.index, "correction", c.entry.printed, c.corrected.format()])
        for m in report.matches:
            rows.append([p, m.entry.p_pen, m.entry.index, "match", m.entry.printed, m.computed.format()])
        for e in report.unmatched_entries:
            text.append(f"  unmatched entry ({p},{e.p_pen}) #{e.index}: {e.printed}")
            rows.append([p, e.p_pen, e.index, "unmatched_entry", e.printed, ""])
        for p_pen, code, poly in report.unmatched_computed:
            text.append(f"  unmatched polynomial ({p},{p_pen}) {code}: {poly.format()}")
            rows.append([p, p_pen, "", "unmatched_computed", "", poly.format()])
        for cls in classes:
            text.append(f"  cospectral class ({cls.key.p},{cls.key.p_pen}) {cls.key.poly.format()}: "
                        + ", ".join(str(code) for code in cls.members))
    text.append("total: " + ", ".join(f"{k}={v}" for k, v in totals.items()))
    payload = {"p_min": run.p_min, "p_max": p_max, "summary": totals, "reports": reports}
    return CommandResult(payload, text, ["p", "p_pen", "index", "status", "printed", "computed"], rows)


COMMANDS: Dict[Command, Callable[[RunConfig], CommandResult]] = {
    Command.ENUMERATE: cmd_enumerate,
    Command.POLY: cmd_poly,
    Command.CLASSES: cmd_classes,
    Command.SPECTRUM: cmd_spectrum,
    Command.INVERT: cmd_invert,
    Command.VERIFY_PAPER: cmd_verify_paper,
}


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _normalize_argv(argv: Sequence[str]) -> List[str]:
    """Join list options with their value so values like -0.5,0.5 are not read as flags."""
    out: List[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if token in _SIGNED_LIST_OPTIONS and i + 1 < len(tokens):
            out.append(f"{token}={tokens[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                        default=OutputFormat.TEXT.value, help="Output encoding")

    physical = argparse.ArgumentParser(add_help=False)
    physical.add_argument("--l", type=float, default=config.edge_length, help="Edge length")

    parser = argparse.ArgumentParser(prog="qtree", description="Spectra and cospectrality of equilateral quantum trees")
    sub = parser.add_subparsers(dest="command", required=True)

    enumerate_parser = sub.add_parser(Command.ENUMERATE.value, parents=[common], help="List free trees")
    enumerate_parser.add_argument("--p", type=int, required=True, help="Vertex count")

    poly_parser = sub.add_parser(Command.POLY.value, parents=[common], help="Dirichlet polynomial of a graph")
    poly_parser.add_argument("input", help="Edge-list file, or - for stdin")
    poly_parser.add_argument("--dirichlet", default="all", help="all, none, or comma-separated pendant vertices")

    classes_parser = sub.add_parser(Command.CLASSES.value, parents=[common], help="Cospectral classes")
    classes_parser.add_argument("--p", type=int, required=True, help="Vertex count")

    spectrum_parser = sub.add_parser(Command.SPECTRUM.value, parents=[common, physical], help="Eigenvalues")
    spectrum_parser.add_argument("input", help="Edge-list file, or - for stdin")
    spectrum_parser.add_argument("--dirichlet", default="all", help="all, none, or comma-separated pendant vertices")
    spectrum_parser.add_argument("--x-max", type=float, default=config.x_max, help="Upper bound for sqrt(lambda)*l")
    spectrum_parser.add_argument("--method", choices=[m.value for m in SpectrumMethod],
                                 default=SpectrumMethod.CLOSED.value)
    spectrum_parser.add_argument("--plot-data", help="Write the determinant scan to this CSV file")

    invert_parser = sub.add_parser(Command.INVERT.value, parents=[common, physical], help="Recover tree shapes")
    invert_parser.add_argument("--alphas", type=_float_list, required=True, help="Comma-separated alpha values")
    invert_parser.add_argument("--ppen", type=int, required=True, dest="p_pen_tilde", help="Pendant count")
    invert_parser.add_argument("--dictionary", dest="dictionary_path", help="Shape dictionary cache file")

    verify_parser = sub.add_parser(Command.VERIFY_PAPER.value, parents=[common],
                                   help="Reconcile computed polynomials with the published tables")
    verify_parser.add_argument("--p-min", type=int, default=3)
    verify_parser.add_argument("--p-max", type=int)
    verify_parser.add_argument("--catalog", dest="catalog_path", help="Published catalog fixture")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    values = vars(args)
    return RunConfig(
        command=Command(values["command"]),
        output_format=OutputFormat(values["output_format"]),
        p=values.get("p"),
        p_min=values.get("p_min", 3),
        p_max=values.get("p_max"),
        input_path=values.get("input"),
        dirichlet=values.get("dirichlet", "all"),
        l=values.get("l", config.edge_length),
        x_max=values.get("x_max", config.x_max),
        method=SpectrumMethod(values.get("method", SpectrumMethod.CLOSED.value)),
        alphas=values.get("alphas") or [],
        p_pen_tilde=values.get("p_pen_tilde"),
        dictionary_path=values.get("dictionary_path"),
        catalog_path=values.get("catalog_path"),
        plot_data=values.get("plot_data"),
    )


@handle_errors
def run(run_config: RunConfig) -> int:
    run_config.validate(config.max_enum_p)
    logger.info(f"Running {run_config.command.value}")
    result = COMMANDS[run_config.command](run_config)
    sys.stdout.write(result.render(run_config.output_format))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_normalize_argv(sys.argv[1:] if argv is None else argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return run(_run_config(args))


if __name__ == "__main__":
    sys.exit(main())
