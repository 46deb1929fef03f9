"""Command-line surface.

Subcommands: partition, composition, constant, verify, minimize, bound,
batch.  Exit codes: 0 success, 1 usage/input error, 2 verification failure,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .errors import DegenerateInputError, NilcurvError
from .hodge import HodgeVector, bound_report
from .nilpotent import (
    jordan_type,
    matrix_from_json,
    random_conjugator,
    rigidity_residual,
    standard_nilpotent,
)
from .orbit import MinimizeOptions, minimize_k_over_orbit, sample_generator, verify_inequality
from .partitions import (
    Composition,
    Partition,
    c_constant,
    conjugate_composition,
    conjugate_partition,
    conjugate_set_partition,
    d_constant,
    format_rational,
    young_diagram,
)

PROG = "nilcurv"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through exit code 1."""

    def error(self, message):
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser, *, seed=False, samples=False, tol=False):
    parser.add_argument("--format", choices=("json", "text"), default="text", help="stdout rendering")
    parser.add_argument("--out", type=Path, default=None, help="also write the JSON form to this path")
    if seed:
        parser.add_argument("--seed", type=int, default=None, help="RNG seed (default: $NILCURV_SEED or 0)")
    if samples:
        parser.add_argument("--samples", type=int, default=10000, help="number of Monte Carlo samples")
    if tol:
        parser.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance")


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    return int(os.environ.get("NILCURV_SEED", "0"))


def _emit(args, payload: dict, text: str) -> None:
    blob = json.dumps(payload, indent=2, sort_keys=True)
    if args.out is not None:
        args.out.write_text(blob + "\n")
    if args.format == "json":
        print(blob)
    else:
        print(text)


def _set_partition_label(columns: list[list[int]]) -> str:
    return "(" + ", ".join("{" + ",".join(str(n) for n in col) + "}" for col in columns) + ")"


def cmd_partition(args) -> int:
    p = Partition.from_string(args.partition)
    if not p.parts:
        raise UsageError("empty partition")
    conj = conjugate_partition(p)
    try:
        c = c_constant(p)
        c_text, c_json = format_rational(c), format_rational(c)
    except DegenerateInputError:
        c_text, c_json = "undefined (degenerate)", None
    diagram = young_diagram(p.parts)
    payload = {"partition": str(p), "conjugate": str(conj), "c_constant": c_json, "diagram": diagram}
    text = "\n".join(
        [f"partition: {p}", f"conjugate: {conj}", f"C: {c_text}", "diagram:", diagram]
    )
    _emit(args, payload, text)
    return 0


def cmd_composition(args) -> int:
    r = Composition.from_string(args.composition)
    columns = conjugate_set_partition(r)
    conj = conjugate_composition(r)
    try:
        c_text = c_json = format_rational(c_constant(conj))
    except DegenerateInputError:
        c_text, c_json = "undefined (degenerate)", None
    try:
        d_text = d_json = format_rational(d_constant(r))
    except DegenerateInputError:
        d_text, d_json = "undefined (degenerate)", None
    diagram = young_diagram(r.entries)
    payload = {
        "composition": str(r),
        "set_partition": [list(col) for col in columns],
        "conjugate": str(conj),
        "c_conjugate": c_json,
        "d_constant": d_json,
        "diagram": diagram,
    }
    text = "\n".join(
        [
            f"composition: {r}",
            "diagram:",
            diagram,
            f"set partition: {_set_partition_label(columns)}",
            f"conjugate: {conj}",
            f"C[conjugate]: {c_text}",
            f"D: {d_text}",
        ]
    )
    _emit(args, payload, text)
    return 0


def cmd_constant(args) -> int:
    if (args.partition is None) == (args.composition is None):
        raise UsageError("give exactly one of --partition / --composition")
    if args.partition is not None:
        p = Partition.from_string(args.partition)
        c = c_constant(p)  # degenerate -> error, exit 1
        _emit(args, {"partition": str(p), "c_constant": format_rational(c)}, f"C: {format_rational(c)}")
        return 0
    r = Composition.from_string(args.composition)
    conj = conjugate_composition(r)
    payload: dict = {"composition": str(r), "conjugate": str(conj)}
    lines = []
    try:
        d = format_rational(d_constant(r))
        payload["d_constant"] = d
        lines.append(f"D: {d}")
    except DegenerateInputError:
        payload["d_constant"] = None
        lines.append("D: undefined (degenerate)")
    try:
        c = format_rational(c_constant(conj))
        payload["c_conjugate"] = c
        lines.append(f"C[conjugate]: {c}")
    except DegenerateInputError:
        payload["c_conjugate"] = None
        lines.append("C[conjugate]: undefined (degenerate)")
    _emit(args, payload, "\n".join(lines))
    return 0


def _verify_spec(args):
    if (args.partition is None) == (args.composition is None):
        raise UsageError("give exactly one of --partition / --composition")
    if args.partition is not None:
        return Partition.from_string(args.partition)
    return Composition.from_string(args.composition)


def cmd_verify(args) -> int:
    spec = _verify_spec(args)
    seed = _resolve_seed(args)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    stride = max(1, args.samples // 10)

    def progress(i, total, current_min):
        if i % stride == 0 or i == total:
            print(f"sample {i}/{total} min={current_min:.12g}", file=sys.stderr)

    try:
        report = verify_inequality(spec, samples=args.samples, seed=seed, tolerance=args.tol, progress=progress)
    except DegenerateInputError as exc:
        raise UsageError(str(exc)) from exc
    payload = report.to_json_dict()
    text = "\n".join(
        [
            f"spec: {report.kind} {report.value}",
            f"bound: {format_rational(report.bound)}",
            f"samples: {report.samples}  seed: {report.seed}",
            f"min observed: {report.min_observed:.12g}",
            f"worst margin: {report.worst_margin:.6g}",
            f"violations: {report.violations}",
            f"elapsed: {report.elapsed_seconds:.2f} s",
        ]
    )
    _emit(args, payload, text)
    return 2 if report.violations > 0 else 0


def cmd_minimize(args) -> int:
    if (args.partition is None) == (args.matrix is None):
        raise UsageError("give exactly one of --partition / --matrix")
    seed = _resolve_seed(args)
    if args.partition is not None:
        p = Partition.from_string(args.partition)
        if all(part == 1 for part in p.parts):
            raise UsageError(f"partition {p} yields the zero matrix")
        a = standard_nilpotent(p)
        if args.conjugate_by == "random":
            g = random_conjugator(a.shape[0], sample_generator(seed, 2**32))
            a = g @ a @ np.linalg.inv(g)
    else:
        try:
            a = matrix_from_json(json.loads(Path(args.matrix).read_text()))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read matrix file {args.matrix}: {exc}") from exc
    opts = MinimizeOptions(
        max_iterations=args.max_iterations,
        gradient_tolerance=args.tol,
        restarts=args.restarts,
        seed=seed,
    )
    result = minimize_k_over_orbit(a, opts)  # zero / non-nilpotent input -> error, exit 1
    target = c_constant(jordan_type(a))
    gap = result.min_estimate - float(target)
    a_est, residual = rigidity_residual(result.argmin)
    payload = {
        "jordan_type": str(jordan_type(a)),
        "target": format_rational(target),
        "min_estimate": result.min_estimate,
        "gap": gap,
        "rigidity_residual": residual,
        "a_est": a_est,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    text = "\n".join(
        [
            f"jordan type: {payload['jordan_type']}",
            f"target C: {payload['target']}",
            f"min estimate: {result.min_estimate:.12g}",
            f"gap: {gap:.6g}",
            f"rigidity residual: {residual:.6g}",
            f"a_est: {a_est:.12g}",
            f"iterations: {result.iterations}",
            f"converged: {str(result.converged).lower()}",
        ]
    )
    _emit(args, payload, text)
    return 0 if result.converged else 3


def _bound_text(payload: dict) -> str:
    general = payload["general_bound"] if payload["general_bound"] is not None else "n/a"
    return "\n".join(
        [
            f"hodge vector: {','.join(str(x) for x in payload['hodge'])}  (weight {payload['weight']})",
            f"conjugate: {','.join(str(x) for x in payload['conjugate'])}",
            f"sharp bound: {payload['sharp_bound']}",
            f"general bound: {general}",
            f"group: {payload['group']}",
            f"isotropy: {'x'.join(payload['isotropy'])}",
            "diagram:",
            payload["diagram"],
        ]
    )


def cmd_bound(args) -> int:
    h = HodgeVector.from_string(args.vector)
    try:
        report = bound_report(h)
    except DegenerateInputError as exc:
        raise UsageError(str(exc)) from exc
    payload = report.to_json_dict()
    _emit(args, payload, _bound_text(payload))
    return 0


def _batch_rows(path: Path):
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise UsageError(f"{path}: empty CSV") from None
        header = [cell.strip().lower() for cell in header]
        if not header or header[0] != "weight" or any(cell != f"h{i}" for i, cell in enumerate(header[1:])):
            raise UsageError(f'{path}: header must read "weight,h0,h1,..."')
        for index, row in enumerate(reader, start=2):  # line numbers, header is line 1
            cells = [cell.strip() for cell in row]
            while cells and cells[-1] == "":
                cells.pop()
            if not cells:
                continue
            yield index, cells


def cmd_batch(args) -> int:
    path = Path(args.csv)
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    records = []
    for line, cells in _batch_rows(path):
        try:
            weight = int(cells[0])
            numbers = [int(c) for c in cells[1:]]
            h = HodgeVector(weight, numbers)
            records.append(bound_report(h).to_json_dict())
        except (ValueError, DegenerateInputError, IndexError) as exc:
            records.append({"line": line, "error": str(exc)})
    blob = "\n".join(json.dumps(rec, sort_keys=True) for rec in records)
    if args.out is not None:
        args.out.write_text(blob + "\n")
    if args.format == "json":
        print(blob)
    else:
        ok = [r for r in records if "error" not in r]
        bad = [r for r in records if "error" in r]
        if ok:
            rows = [("weight", "hodge", "sharp", "general", "group")]
            for r in ok:
                rows.append(
                    (
                        str(r["weight"]),
                        ",".join(str(x) for x in r["hodge"]),
                        r["sharp_bound"],
                        r["general_bound"] if r["general_bound"] is not None else "n/a",
                        r["group"],
                    )
                )
            widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
            for row in rows:
                print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        for r in bad:
            print(f"line {r['line']}: error: {r['error']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Nilpotent-orbit minima and curvature-bound calculator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("partition", help="conjugate, exact constant and Young diagram of a partition")
    p.add_argument("partition", help='comma-separated parts, e.g. "6,4,2,1"')
    _add_common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("composition", help="generalized Young diagram, conjugate and constants of a composition")
    p.add_argument("composition", help='comma-separated entries, e.g. "2,4,2,4,3,2"')
    _add_common(p)
    p.set_defaults(func=cmd_composition)

    p = sub.add_parser("constant", help="exact constant of a partition or composition")
    p.add_argument("--partition", default=None)
    p.add_argument("--composition", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("verify", help="Monte Carlo verification of the sharp orbit inequality")
    p.add_argument("--partition", default=None)
    p.add_argument("--composition", default=None)
    _add_common(p, seed=True, samples=True, tol=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("minimize", help="gradient descent of the moment-map square norm over an orbit")
    p.add_argument("--partition", default=None)
    p.add_argument("--matrix", default=None, help="JSON matrix file {n, re, im}")
    p.add_argument("--conjugate-by", choices=("none", "random"), default="none", dest="conjugate_by")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iterations", type=int, default=10000, dest="max_iterations")
    _add_common(p, seed=True, tol=True)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("bound", help="curvature bound report for one Hodge vector")
    p.add_argument("vector", help='palindromic vector "h^{k,0},...,h^{0,k}", e.g. "1,4,4,1"')
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("batch", help="bound reports for a CSV of Hodge vectors")
    p.add_argument("csv", help='CSV file with header "weight,h0,h1,..."')
    _add_common(p)
    p.set_defaults(func=cmd_batch)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    except (NilcurvError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
