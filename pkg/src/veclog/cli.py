"""Command-line front end.

Subcommands: query, diagnose, repair, sim, quality.  Reports are
line-oriented ``key: value`` text (or one JSON document with ``--json``),
byte-identical across runs for identical inputs.  Bit strings always print
coordinate 1 first.  Exit codes: 0 success, 1 domain failure (inconsistent
diagnosis, not repairable, runtime fault), 2 input error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from veclog import assoc, cover, dq, lamp, metric, vlcore
from veclog.vlcore import BitVector, EmptyInput, LengthMismatch, ParseError

Report = list[tuple[str, object]]


class InputError(Exception):
    """Bad file or argument; maps to exit code 2."""


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()[:12]


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="ascii") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _bits(vector: BitVector, dots: bool = False) -> str:
    text = str(vector)
    return text.replace("0", ".") if dots else text


def _emit(report: Report, as_json: bool) -> None:
    if as_json:
        print(json.dumps(dict(report), indent=2))
    else:
        for key, value in report:
            print(f"{key}: {value}")


def _position(exc: ParseError) -> str:
    place = ""
    if exc.line is not None:
        place += f" at line {exc.line}"
    if exc.column is not None:
        place += f", column {exc.column}" if place else f" at column {exc.column}"
    return place


def _parse_vector(text: str, what: str) -> BitVector:
    try:
        return BitVector.from_string(text)
    except ParseError as exc:
        raise InputError(f"bad {what}{_position(exc)}: {exc}") from exc
    except EmptyInput as exc:
        raise InputError(f"bad {what}: {exc}") from exc


# ---------------------------------------------------------------------------
# query

def cmd_query(args: argparse.Namespace) -> tuple[Report, int]:
    text = _read(args.table)
    report: Report = [
        ("command", " ".join(args.echo)),
        ("table", args.table),
        ("table-digest", _digest(args.table)),
        ("query", args.query),
    ]
    if args.arith:
        return _query_arith(text, args, report)
    try:
        table = assoc.parse_table(text)
    except ParseError as exc:
        raise InputError(f"bad table{_position(exc)}: {exc}") from exc
    query = _parse_vector(args.query, "query")
    if query.length != table.width:
        raise InputError(f"query width {query.length} does not match table "
                         f"width {table.width}")
    report += [("rows", table.height), ("width", table.width)]
    mask = assoc.feasible_mask(table, query)
    feasible = []
    for k in range(1, table.height + 1):
        name = f"row-{k}"
        if table.row_labels:
            name += f" ({table.row_labels[k - 1]})"
        word = "contradictory" if mask.bit(k) else "feasible"
        if not mask.bit(k):
            feasible.append(k)
        report.append((name, word))
    report.append(("feasible-rows",
                   " ".join(str(k) for k in feasible) or "(none)"))
    rows, quality = assoc.best_match(query, table)
    report.append(("best-rows", " ".join(str(k) for k in rows)))
    if table.row_labels:
        report.append(("best-labels",
                       " ".join(table.row_labels[k - 1] for k in rows)))
    report.append(("best-quality", str(quality)))
    report.append(("status", "ok"))
    return report, 0


def _query_arith(text: str, args: argparse.Namespace,
                 report: Report) -> tuple[Report, int]:
    try:
        rows, labels = assoc.parse_ternary_rows(text)
    except ParseError as exc:
        raise InputError(f"bad table{_position(exc)}: {exc}") from exc
    try:
        query = vlcore.TernaryVector.from_string(args.query)
    except (ParseError, EmptyInput) as exc:
        raise InputError(f"bad query: {exc}") from exc
    if query.length != rows[0].length:
        raise InputError(f"query width {query.length} does not match table "
                         f"width {rows[0].length}")
    report += [("rows", len(rows)), ("width", rows[0].length)]
    best: Optional[Fraction] = None
    best_rows: list[int] = []
    for k, row in enumerate(rows, start=1):
        aq = metric.quality_arith(query, row)
        name = f"row-{k}"
        if labels:
            name += f" ({labels[k - 1]})"
        report.append((name, f"quality {aq.quality} (distance {aq.distance}, "
                             f"query-in-stored {aq.query_in_stored}, "
                             f"stored-in-query {aq.stored_in_query})"))
        if best is None or aq.quality > best:
            best, best_rows = aq.quality, [k]
        elif aq.quality == best:
            best_rows.append(k)
    report.append(("best-rows", " ".join(str(k) for k in best_rows)))
    report.append(("best-quality", str(best)))
    report.append(("status", "ok"))
    return report, 0


# ---------------------------------------------------------------------------
# diagnose

def cmd_diagnose(args: argparse.Namespace) -> tuple[Report, int]:
    try:
        table = assoc.parse_table(_read(args.table))
    except ParseError as exc:
        raise InputError(f"bad table{_position(exc)}: {exc}") from exc
    response = _parse_vector(args.response, "response")
    if response.length != table.height:
        raise InputError(f"response width {response.length} does not match "
                         f"table height {table.height}")
    mode = assoc.DiagnosisMode(args.mode)
    result = assoc.diagnose(table, response, mode)
    labels = table.col_labels or tuple(f"c{j}" for j in
                                       range(1, table.width + 1))
    named = [labels[j - 1] for j in range(1, table.width + 1)
             if result.candidates.bit(j)]
    report: Report = [
        ("command", " ".join(args.echo)),
        ("table", args.table),
        ("table-digest", _digest(args.table)),
        ("response", args.response),
        ("mode", mode.value),
        ("candidate-vector", _bits(result.candidates)),
        ("candidates", " ".join(named) or "(none)"),
        ("status", "ok" if result.consistent else "inconsistent"),
    ]
    return report, 0 if result.consistent else 1


# ---------------------------------------------------------------------------
# repair

def cmd_repair(args: argparse.Namespace) -> tuple[Report, int]:
    try:
        instance = cover.load_repair_instance(args.instance)
    except ParseError as exc:
        raise InputError(f"bad instance{_position(exc)}: {exc}") from exc
    report: Report = [
        ("command", " ".join(args.echo)),
        ("instance", args.instance),
        ("instance-digest", _digest(args.instance)),
        ("memory", f"{instance.rows}x{instance.cols}"),
        ("spare-budget", f"rows {instance.spare_rows} "
                         f"cols {instance.spare_cols}"),
        ("faults", len(instance.faults)),
    ]
    if not instance.faults:
        report.append(("status", "nothing-to-repair"))
        return report, 0
    ci = cover.build_repair_table(instance)
    spares = [k.label for k in ci.kinds if k is not None]
    report.append(("spares", " ".join(spares)))
    taken = cover.greedy_cover(ci)
    chosen = [ci.kinds[k - 1] for k in cover.selected_rows(taken)]
    report.append(("greedy-mask", _bits(taken)))
    report.append(("greedy-cover", " ".join(s.label for s in chosen)))

    oracle_covers = oracle_error = None

    def ensure_oracle():
        nonlocal oracle_covers, oracle_error
        if oracle_covers is None and oracle_error is None:
            try:
                oracle_covers = cover.exact_cover_oracle(ci)
            except cover.Infeasible:
                oracle_error = "infeasible"
            except cover.TooLarge:
                oracle_error = "too-large"

    status, code = "ok", 0
    try:
        plan = cover.repair_plan(instance, chosen)
        report.append(("plan", "valid" if plan.valid else "invalid"))
        report.append(("remap", " ".join(
            f"{spare.label}->spare-{spare.axis}-{ordinal}"
            for spare, ordinal in plan.remap)))
    except cover.BudgetExceeded as exc:
        report.append(("plan", f"budget-exceeded ({exc})"))
        ensure_oracle()  # does any cover fit the budget at all?
        status = "not-repairable" if oracle_error == "infeasible" \
            else "budget-exceeded"
        code = 1
    except cover.NotCovering as exc:
        report.append(("plan", f"not-covering ({exc})"))
        status, code = "not-coverable", 1

    if args.oracle:
        ensure_oracle()
        if oracle_covers is not None:
            minimum = len(oracle_covers[0])
            report.append(("oracle-minimum", minimum))
            report.append(("oracle-cover-count", len(oracle_covers)))
            for i, rows in enumerate(oracle_covers, start=1):
                report.append((f"oracle-cover-{i}", " ".join(
                    ci.kinds[k - 1].label for k in rows)))
            greedy_size = len(chosen)
            report.append(("ratio", f"{greedy_size}/{minimum} = "
                                    f"{greedy_size / minimum:.3f}"))
        else:
            report.append(("oracle", oracle_error or "unavailable"))
    report.append(("status", status))
    return report, code


# ---------------------------------------------------------------------------
# sim

def _parse_reg_presets(items: Sequence[str], width: int) -> dict:
    presets = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or name.lower() not in lamp.REGISTERS:
            raise InputError(f"register preset must look like ma=1010, "
                             f"got {item!r}")
        vector = _parse_vector(value, f"preset for {name}")
        if vector.length != width:
            raise InputError(f"preset for {name} has width {vector.length}, "
                             f"table width is {width}")
        presets[name.lower()] = vector
    return presets


def _load_cell(program_path: str, data_path: str,
               reg_specs: Sequence[str]) -> tuple[lamp.Program,
                                                  lamp.SequencerState]:
    try:
        program = lamp.assemble(_read(program_path))
    except (lamp.AssemblyError, EmptyInput) as exc:
        raise InputError(f"{program_path}: {exc}") from exc
    try:
        table = assoc.parse_table(_read(data_path))
    except ParseError as exc:
        raise InputError(f"bad table {data_path}{_position(exc)}: "
                         f"{exc}") from exc
    presets = _parse_reg_presets(reg_specs, table.width)
    return program, lamp.SequencerState.fresh(table, **presets)


def cmd_sim(args: argparse.Namespace) -> tuple[Report, int]:
    report: Report = [("command", " ".join(args.echo))]
    if args.grid:
        return _sim_grid(args, report)
    if not args.program or not args.data:
        raise InputError("sim needs a program file and a data file "
                         "(or --grid MANIFEST)")
    report += [
        ("program", args.program),
        ("program-digest", _digest(args.program)),
        ("data", args.data),
        ("data-digest", _digest(args.data)),
    ]
    program, state = _load_cell(args.program, args.data, args.reg or [])
    try:
        final = lamp.run_sequencer(state, program, args.max_steps)
    except lamp.SimulationError as exc:
        report.append(("status", f"fault: {exc}"))
        return report, 1
    report.append(("steps", final.steps))
    for name in lamp.REGISTERS:
        report.append((name, _bits(final.regs[name], args.dots)))
    if args.dump_memory:
        for i, row in enumerate(final.memory.rows, start=1):
            report.append((f"memory-{i}", _bits(row, args.dots)))
    report.append(("status", "ok"))
    return report, 0


def _sim_grid(args: argparse.Namespace, report: Report) -> tuple[Report, int]:
    base = os.path.dirname(os.path.abspath(args.grid))
    lines = [ln.strip() for ln in _read(args.grid).splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    if len(lines) != lamp.GRID_CELLS:
        raise InputError(f"grid manifest needs {lamp.GRID_CELLS} lines, "
                         f"got {len(lines)}")
    report.append(("grid-manifest", args.grid))
    programs, cells = [], []
    for idx, line in enumerate(lines):
        parts = line.split()
        if len(parts) < 2:
            raise InputError(f"manifest line {idx + 1}: need program and "
                             f"data paths")
        row, col = idx // lamp.GRID_SIDE + 1, idx % lamp.GRID_SIDE + 1
        paths = [p if os.path.isabs(p) else os.path.join(base, p)
                 for p in parts[:2]]
        try:
            program, state = _load_cell(paths[0], paths[1], parts[2:])
        except InputError as exc:
            raise InputError(f"cell ({row},{col}): {exc}") from exc
        programs.append(program)
        cells.append(state)
    try:
        final = lamp.run_grid(lamp.GridState(tuple(cells)), programs,
                              args.max_steps)
    except lamp.GridCellError as exc:
        report.append(("status", f"fault: {exc}"))
        return report, 1
    for idx, cell in enumerate(final.cells):
        row, col = idx // lamp.GRID_SIDE + 1, idx % lamp.GRID_SIDE + 1
        report.append((f"cell-{row}-{col}-steps", cell.steps))
        for name in lamp.REGISTERS:
            report.append((f"cell-{row}-{col}-{name}",
                           _bits(cell.regs[name], args.dots)))
    report.append(("status", "ok"))
    return report, 0


# ---------------------------------------------------------------------------
# quality (design estimates)

def cmd_quality(args: argparse.Namespace) -> tuple[Report, int]:
    try:
        inp = dq.DesignQualityInput(args.fault_prob, args.faults,
                                    args.testability, args.scan, args.logic)
    except dq.DomainError as exc:
        raise InputError(str(exc)) from exc
    out = dq.design_quality(inp)
    report: Report = [
        ("command", " ".join(args.echo)),
        ("yield", f"{out.yield_estimate:.6f}"),
        ("fault-level", f"{out.fault_level:.6f}"),
        ("verification-time", f"{out.verification_time:.6f}"),
        ("hardware-redundancy", f"{out.hardware_redundancy:.6f}"),
        ("quality", f"{out.quality:.6f}"),
        ("status", "ok"),
    ]
    return report, 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="veclog",
        description="Vector-logic analysis: table queries, fault diagnosis, "
                    "repair planning, sequencer simulation, design quality.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    q = sub.add_parser("query", help="feasibility and best match for a query")
    q.add_argument("table", help="table file")
    q.add_argument("query", help="query bit string (ternary with --arith)")
    q.add_argument("--arith", action="store_true",
                   help="exact-rational ternary quality instead of the "
                        "vector criterion")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_query)

    d = sub.add_parser("diagnose", help="locate fault columns from a "
                                        "test response")
    d.add_argument("table", help="fault table file (rows = tests)")
    d.add_argument("response", help="response bit string, one bit per test")
    d.add_argument("--mode", choices=["single", "multiple"], default="single")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_diagnose)

    r = sub.add_parser("repair", help="plan spare-line repair for a "
                                      "faulty memory")
    r.add_argument("instance", help="repair instance file")
    r.add_argument("--oracle", action="store_true",
                   help="also list every minimum cover")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_repair)

    s = sub.add_parser("sim", help="run a microprogram on a sequencer "
                                   "or a 4x4 grid")
    s.add_argument("program", nargs="?", help="program file")
    s.add_argument("data", nargs="?", help="table file for the data memory")
    s.add_argument("--grid", metavar="MANIFEST",
                   help="run 16 cells; one 'program data [reg=bits...]' "
                        "line per cell")
    s.add_argument("--reg", action="append", metavar="NAME=BITS",
                   help="preset a register (repeatable)")
    s.add_argument("--max-steps", type=int, default=lamp.DEFAULT_MAX_STEPS)
    s.add_argument("--dump-memory", action="store_true")
    s.add_argument("--dots", action="store_true",
                   help="render 0 coordinates as dots")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sim)

    y = sub.add_parser("quality", help="design-quality estimates")
    y.add_argument("--fault-prob", type=float, required=True,
                   help="fault-existence probability in [0,1]")
    y.add_argument("--faults", type=int, required=True,
                   help="undetected-fault count")
    y.add_argument("--testability", type=float, required=True,
                   help="testability grade in [0,1]")
    y.add_argument("--scan", type=float, required=True,
                   help="assertion / boundary-scan complexity")
    y.add_argument("--logic", type=float, required=True,
                   help="functional-logic complexity")
    y.add_argument("--json", action="store_true")
    y.set_defaults(func=cmd_quality)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.echo = argv
    try:
        report, status = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LengthMismatch, ParseError, EmptyInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.json)
    return status


if __name__ == "__main__":
    sys.exit(main())
