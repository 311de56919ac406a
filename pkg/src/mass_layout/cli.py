"""Command-line driver: ``mass {assign,layout,optimize,evaluate,oracle}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible floor plan.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from . import craft
from .assign import Assignment, assignment_cost, hungarian_solve, to_cost_matrix
from .errors import DataError, InfeasibleError
from .loads import LoadMatrix, read_load_matrix
from .oracle import brute_force_optimum
from .plan import (
    COST_SCALE,
    FloorPlan,
    Layout,
    build_initial_layout,
    derive_grid,
    layout_cost,
    render_ascii,
    unscale,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE = 0, 1, 2, 3

MOVE_FLAGS = {
    "facility2": craft.FACILITY_SWAP,
    "facility3": craft.FACILITY_ROTATION,
    "column2": craft.COLUMN_SWAP,
    "column3": craft.COLUMN_ROTATION,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dims(text: str) -> tuple[str, str]:
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")
    return parts[0], parts[1]


def _moves(text: str) -> tuple[str, ...]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in names if t not in MOVE_FLAGS]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown move kind(s) {', '.join(bad) or '(none)'}; choose from {','.join(MOVE_FLAGS)}"
        )
    return tuple(MOVE_FLAGS[t] for t in names)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--loads", required=True, help="load matrix CSV")
    common.add_argument("--format", choices=("text", "json"), default="text")

    geometry = _Parser(add_help=False)
    geometry.add_argument("--floor", type=_dims, required=True, metavar="WxH", help="floor size in meters")
    geometry.add_argument("--facility", type=_dims, default=("20", "10"), metavar="WxH",
                          help="facility footprint in meters (default 20x10)")
    geometry.add_argument("--aisle", default="2", help="aisle width in meters (default 2)")
    geometry.add_argument("--svg", metavar="PATH", help="also write the layout as SVG")

    parser = _Parser(prog="mass", description="Hungarian-seeded CRAFT block layout optimizer.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("assign", parents=[common], help="solve the big-M assignment problem")
    p.add_argument("--big-m", help="override the vacant-cell fill value (unit-loads)")

    sub.add_parser("layout", parents=[common, geometry], help="initial layout from the assignment")

    p = sub.add_parser("optimize", parents=[common, geometry], help="assignment, initial layout, CRAFT")
    p.add_argument("--moves", type=_moves, default=craft.MOVE_KINDS,
                   help="comma list of facility2,facility3,column2,column3 (default all)")
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--trace", metavar="PATH", help="write the accepted-move trace as JSON")

    p = sub.add_parser("evaluate", parents=[common, geometry], help="cost of a given placement")
    p.add_argument("--placement", required=True,
                   help="columns separated by ';', names top to bottom separated by ',', '.' for empty")

    sub.add_parser("oracle", parents=[common, geometry], help="exhaustive optimum (n <= 8)")
    return parser


# -- formatting helpers ------------------------------------------------------


def _num(value):
    """JSON number: int when integral, float otherwise."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else float(value)
    return value


def _text(value) -> str:
    return str(_num(value))


def _columns_json(layout: Layout, names: Sequence[str]):
    return [[names[f] if f is not None else None for f in col] for col in layout.columns()]


def _assignment_pairs(asg: Assignment, names: Sequence[str]):
    return [[names[i], names[j]] for i, j in enumerate(asg.partner)]


def _participants(move: craft.Move, names: Sequence[str]) -> list[str]:
    if move.kind in (craft.FACILITY_SWAP, craft.FACILITY_ROTATION):
        return [names[p] for p in move.participants]
    return [str(p) for p in move.participants]


def trace_json(trace: craft.Trace, names: Sequence[str]) -> dict:
    return {
        "initial_cost": _num(trace.initial_cost),
        "moves": [
            {
                "kind": step.move.kind,
                "participants": _participants(step.move, names),
                "cost_after": _num(step.cost_after),
            }
            for step in trace.accepted
        ],
        "final_cost": _num(trace.final_cost),
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def render_svg(layout: Layout, fp: FloorPlan, names: Sequence[str]) -> str:
    """One rectangle per placed facility at metric coordinates (1 m = 10 px)."""
    px = 10
    w = float(fp.floor_width) * px
    h = float(fp.floor_height) * px
    fw = float(fp.facility_width) * px
    fh = float(fp.facility_height) * px
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:g}" height="{h:g}" viewBox="0 0 {w:g} {h:g}">',
        f'  <rect x="0" y="0" width="{w:g}" height="{h:g}" fill="#f4f4f4" stroke="#333"/>',
    ]
    for i in range(layout.n):
        s = layout.slot_of[i]
        if s is None:
            continue
        x = float(s.col * (fp.facility_width + fp.aisle)) * px
        y = float(s.row * (fp.facility_height + fp.aisle)) * px
        lines.append(f'  <rect x="{x:g}" y="{y:g}" width="{fw:g}" height="{fh:g}" fill="#cfe2f3" stroke="#1c4587"/>')
        lines.append(
            f'  <text x="{x + fw / 2:g}" y="{y + fh / 2:g}" text-anchor="middle" '
            f'dominant-baseline="middle" font-family="monospace">{escape(names[i])}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _write(path: str, content: str):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror}") from None


# -- subcommands -------------------------------------------------------------


def _load(path: str) -> LoadMatrix:
    try:
        return read_load_matrix(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise DataError(f"{path} is not valid UTF-8") from None


def _floor(args) -> FloorPlan:
    return FloorPlan(args.floor[0], args.floor[1], args.facility[0], args.facility[1], args.aisle)


def _seed_layout(lm: LoadMatrix, fp: FloorPlan):
    cm = to_cost_matrix(lm)
    asg = hungarian_solve(cm)
    return cm, asg, build_initial_layout(asg, fp, lm.n)


def cmd_assign(args, out):
    lm = _load(args.loads)
    cm = to_cost_matrix(lm, args.big_m)
    asg = hungarian_solve(cm)
    cost = assignment_cost(cm, asg)
    names = lm.names
    if args.format == "json":
        out.write(dumps({
            "assignment": _assignment_pairs(asg, names),
            "cost": _num(cm.unscaled(cost.cost)),
            "uses_synthetic": cost.uses_synthetic,
        }))
    else:
        for a, b in _assignment_pairs(asg, names):
            out.write(f"{a} -> {b}\n")
        out.write(f"cost={_text(cm.unscaled(cost.cost))}\n")
        out.write(f"uses_synthetic={str(cost.uses_synthetic).lower()}\n")


def cmd_layout(args, out):
    lm = _load(args.loads)
    fp = _floor(args)
    _, asg, layout = _seed_layout(lm, fp)
    report = layout_cost(layout, lm, fp)
    if args.svg:
        _write(args.svg, render_svg(layout, fp, lm.names))
    if args.format == "json":
        out.write(dumps({
            "assignment": _assignment_pairs(asg, lm.names),
            "layout": _columns_json(layout, lm.names),
            "cost": _num(report.total),
        }))
    else:
        out.write(render_ascii(layout, fp, lm.names))
        out.write(f"cost={_text(report.total)}\n")


def cmd_optimize(args, out):
    lm = _load(args.loads)
    fp = _floor(args)
    _, asg, initial = _seed_layout(lm, fp)
    final, trace = craft.craft_improve(initial, lm, fp, args.moves, args.max_iters)
    names = lm.names
    improvement = unscale(trace.initial_cost_scaled - trace.final_cost_scaled, COST_SCALE)
    tj = trace_json(trace, names)
    if args.trace:
        _write(args.trace, dumps(tj))
    if args.svg:
        _write(args.svg, render_svg(final, fp, names))
    if args.format == "json":
        out.write(dumps({
            "assignment": _assignment_pairs(asg, names),
            "initial_layout": _columns_json(initial, names),
            "final_layout": _columns_json(final, names),
            "initial_cost": tj["initial_cost"],
            "final_cost": tj["final_cost"],
            "improvement": _num(improvement),
            "accepted_moves": len(trace.accepted),
            "hit_max_iters": trace.hit_max_iters,
            "trace": tj,
        }))
        return
    out.write("assignment:")
    for a, b in _assignment_pairs(asg, names):
        out.write(f" {a}->{b}")
    out.write("\ninitial layout:\n")
    out.write(render_ascii(initial, fp, names))
    out.write(f"initial_cost={_text(trace.initial_cost)}\n")
    for k, step in enumerate(trace.accepted, start=1):
        out.write(
            f"move {k}: {step.move.kind} {','.join(_participants(step.move, names))} "
            f"delta={_text(step.move.delta)} cost_after={_text(step.cost_after)}\n"
        )
    out.write("final layout:\n")
    out.write(render_ascii(final, fp, names))
    out.write(f"final_cost={_text(trace.final_cost)}\n")
    out.write(f"improvement={_text(improvement)}\n")
    out.write(f"accepted_moves={len(trace.accepted)}\n")
    if trace.hit_max_iters:
        out.write("hit_max_iters=true\n")


def parse_placement(text: str, lm: LoadMatrix, fp: FloorPlan) -> Layout:
    rows, cols = derive_grid(fp)
    columns = [c for c in text.split(";")]
    if len(columns) > cols:
        raise DataError(f"placement has {len(columns)} columns, grid has {cols}")
    parsed = []
    for col in columns:
        cells = [c.strip() for c in col.split(",")]
        if len(cells) > rows:
            raise DataError(f"placement column {col!r} exceeds {rows} rows")
        entries = []
        for name in cells:
            if name in (".", ""):
                entries.append(None)
            elif name in lm.names:
                entries.append(lm.index(name))
            else:
                raise DataError(f"unknown facility {name!r} in placement")
        parsed.append(entries)
    layout = Layout.from_columns(parsed, rows, cols, lm.n)
    missing = [lm.names[i] for i in range(lm.n) if layout.slot_of[i] is None]
    if missing:
        raise DataError(f"placement omits {', '.join(missing)}")
    return layout


def cmd_evaluate(args, out):
    lm = _load(args.loads)
    fp = _floor(args)
    layout = parse_placement(args.placement, lm, fp)
    report = layout_cost(layout, lm, fp)
    names = lm.names
    if args.svg:
        _write(args.svg, render_svg(layout, fp, names))
    if args.format == "json":
        out.write(dumps({
            "layout": _columns_json(layout, names),
            "cost": _num(report.total),
            "contributions": [
                {"from": names[c.i], "to": names[c.j], "load": _num(c.load),
                 "distance": _num(c.distance), "product": _num(c.product)}
                for c in report.contributions
            ],
        }))
    else:
        out.write(render_ascii(layout, fp, names))
        for c in report.contributions:
            out.write(f"{names[c.i]}->{names[c.j]}: {_text(c.load)} x {_text(c.distance)} = {_text(c.product)}\n")
        out.write(f"cost={_text(report.total)}\n")


def cmd_oracle(args, out):
    lm = _load(args.loads)
    fp = _floor(args)
    result = brute_force_optimum(lm, fp)
    if args.svg:
        _write(args.svg, render_svg(result.witness, fp, lm.names))
    if args.format == "json":
        out.write(dumps({
            "best_cost": _num(result.best_cost),
            "optima_count": result.optima_count,
            "layout": _columns_json(result.witness, lm.names),
        }))
    else:
        out.write(render_ascii(result.witness, fp, lm.names))
        out.write(f"best_cost={_text(result.best_cost)}\n")
        out.write(f"optima_count={result.optima_count}\n")


COMMANDS = {
    "assign": cmd_assign,
    "layout": cmd_layout,
    "optimize": cmd_optimize,
    "evaluate": cmd_evaluate,
    "oracle": cmd_oracle,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        COMMANDS[args.command](args, out)
    except InfeasibleError as exc:
        err.write(f"mass: infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except DataError as exc:
        err.write(f"mass: error: {exc}\n")
        return EXIT_DATA
    return EXIT_OK


def main():
    sys.exit(run())
