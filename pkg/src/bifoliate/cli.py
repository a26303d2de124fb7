"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 inconclusive search,
4 crossing window could not be certified.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .contfrac import cf_expand
from .exactmath import IntMatrix2, QuadraticNumber, SlopePoleError
from .invariant import (
    ORIENTATION,
    UNRESTRICTED,
    Inconclusive,
    conjugate_up_to_powers,
    distinguish_planes,
)
from .lattice import (
    NotHyperbolic,
    WindowIncomplete,
    canonicalize_slopes,
    crossings_in_box,
    eigen_slopes,
    enumerate_crossings,
    normalize_matrix,
    sigma_period,
)
from .scalloped import (
    AccumulationError,
    FatGraph,
    Inadmissible,
    MalformedFatGraph,
    UnmatchedChains,
    boundary_cycles,
    build_lozenge_complex,
    build_plane_complex,
    euler_characteristic,
    is_orientable,
    level_delta,
    scalloped_chains,
    validate_admissible,
    x_infinity_points,
)
from .svg import Scene, eigen_scene, lozenge_scene, svg_render

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_WINDOW = 0, 2, 3, 4


class InputError(ValueError):
    def __init__(self, message: str, text: str | None = None, pos: int | None = None):
        super().__init__(message)
        self.text, self.pos = text, pos

    def render(self) -> str:
        out = f"error: {self.args[0]}"
        if self.text is not None and self.pos is not None:
            out += f"\n  {self.text}\n  {' ' * self.pos}^"
        return out


_INT = re.compile(r"[+-]?\d+")


def parse_matrix(text: str) -> IntMatrix2:
    """Accept "[[a,b],[c,d]]" or "a b c d" (whitespace or commas)."""
    s = text.strip()
    if s.startswith("["):
        expect = ["[", "[", "int", ",", "int", "]", ",", "[", "int", ",", "int", "]", "]"]
        nums: list[int] = []
        i = 0
        for want in expect:
            while i < len(s) and s[i].isspace():
                i += 1
            if want == "int":
                m = _INT.match(s, i)
                if not m:
                    raise InputError("expected an integer", s, i)
                nums.append(int(m.group()))
                i = m.end()
            elif i < len(s) and s[i] == want:
                i += 1
            else:
                raise InputError(f"expected {want!r}", s, i)
        while i < len(s) and s[i].isspace():
            i += 1
        if i != len(s):
            raise InputError("unexpected trailing text", s, i)
        return IntMatrix2(*nums)
    nums = []
    for m in re.finditer(r"[^\s,]+", s):
        if not _INT.fullmatch(m.group()):
            raise InputError("expected an integer", s, m.start())
        nums.append(int(m.group()))
    if len(nums) != 4:
        raise InputError(f"expected 4 entries, got {len(nums)}", s, len(s))
    return IntMatrix2(*nums)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError("expected a rational such as 1/4", text, 0) from None


# -- serialization ------------------------------------------------------------


def qjson(x: QuadraticNumber) -> dict[str, str]:
    return {"exact": x.exact_str(), "decimal": str(x.to_decimal(20))}


def fjson(x: Fraction) -> dict[str, str]:
    return {"exact": str(x), "decimal": f"{float(x):.15g}"}


def mjson(M: IntMatrix2) -> str:
    return str(M)


def _crossing(c) -> dict[str, Any]:
    return {"m": c.m, "n": c.n, "side": c.side, "t": qjson(c.t)}


def _text(report: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in report.items():
        if isinstance(v, dict) and set(v) == {"exact", "decimal"}:
            lines.append(f"{pad}{k}: {v['exact']} ~ {v['decimal']}")
        elif isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}: {len(v)} entries")
            for item in v:
                lines.append(pad + "  - " + ", ".join(f"{a}={_flat(b)}" for a, b in item.items()))
        else:
            lines.append(f"{pad}{k}: {_flat(v)}")
    return "\n".join(lines)


def _flat(v: Any) -> str:
    if isinstance(v, dict) and set(v) == {"exact", "decimal"}:
        return v["exact"]
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    return str(v)


# -- subcommands ----------------------------------------------------------------


def cmd_slopes(args) -> tuple[dict, Scene | None]:
    A = args.matrix[0]
    e = eigen_slopes(A)
    A0, negated = normalize_matrix(A)
    canon = canonicalize_slopes(eigen_slopes(A0))
    return {
        "matrix": mjson(A),
        "eigen_contracting": qjson(e.eigen_contracting),
        "eigen_expanding": qjson(e.eigen_expanding),
        "slope_contracting": qjson(e.slope_contracting),
        "slope_expanding": qjson(e.slope_expanding),
        "canonical": {
            "alpha": qjson(canon.alpha),
            "beta": qjson(canon.beta),
            "symmetries": list(canon.applied_symmetries),
            "transform": mjson(canon.transform),
            "negated": negated,
        },
    }, None


def cmd_cf(args) -> tuple[dict, Scene | None]:
    A = args.matrix[0]
    e = eigen_slopes(A)
    x = e.slope_contracting if args.which == "contracting" else e.slope_expanding
    cf = cf_expand(x)
    return {
        "matrix": mjson(A),
        "which": args.which,
        "value": qjson(x),
        "sign": "-" if cf.negative else "+",
        "preperiod": list(cf.preperiod),
        "period": list(cf.period),
        "display": str(cf),
    }, None


def cmd_sigma(args) -> tuple[dict, Scene | None]:
    A = args.matrix[0]
    s = sigma_period(A, args.box)
    report = {
        "matrix": mjson(A),
        "conjugated_matrix": mjson(s.matrix),
        "negated": s.negated,
        "primitive_root": mjson(s.root),
        "power": s.power,
        "period": list(s.period),
        "alpha": qjson(s.slopes.alpha),
        "beta": qjson(s.slopes.beta),
        "anchor_convention": s.anchor_convention,
        "sample_window": [_crossing(c) for c in s.sample_window],
    }
    return report, eigen_scene(A, args.box or 8)


def cmd_crossings(args) -> tuple[dict, Scene | None]:
    A = args.matrix[0]
    A0, _ = normalize_matrix(A)
    slopes = canonicalize_slopes(eigen_slopes(A0))
    box = args.box or 8
    if args.t_max_windows is None:
        pts = crossings_in_box(slopes, box)
        mode = "box scan (no completeness claim)"
    else:
        s = sigma_period(A, args.box)
        lam = eigen_slopes(s.root).eigen_contracting
        hi = s.sample_window[-1].t
        lo = hi * lam ** args.t_max_windows
        pts = enumerate_crossings(slopes, hi, args.box, t_min=lo)
        mode = f"{args.t_max_windows} fundamental windows (certified complete)"
    report = {
        "matrix": mjson(A),
        "alpha": qjson(slopes.alpha),
        "beta": qjson(slopes.beta),
        "mode": mode,
        "box": box,
        "crossings": [_crossing(c) for c in pts],
    }
    return report, eigen_scene(A, box)


def _verdict(v) -> dict:
    return {
        "verdict": v.kind,
        "mode": v.comparison_mode,
        "reversed_match": v.reversed_match,
        "sigma_a": list(v.sigma_a.period),
        "sigma_b": list(v.sigma_b.period),
    }


def cmd_distinguish(args) -> tuple[dict, Scene | None]:
    A, B = args.matrix
    mode = ORIENTATION if args.mode == "orientation" else UNRESTRICTED
    return {"a": mjson(A), "b": mjson(B), **_verdict(distinguish_planes(A, B, mode))}, None


def cmd_conjugate(args) -> tuple[dict, Scene | None]:
    A, B = args.matrix
    w = conjugate_up_to_powers(A, B, args.max_exponent)
    report: dict[str, Any] = {"a": mjson(A), "b": mjson(B), "max_exponent": args.max_exponent}
    if w is None:
        report["witness"] = None
    else:
        report["witness"] = {"k": w.k, "l": w.l, "C": mjson(w.C), "sign": w.sign}
    return report, None


def _load_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise InputError(f"{path}: {exc.msg} (line {exc.lineno})", line, exc.colno - 1) from None


def _load_graph(path: str) -> FatGraph:
    return FatGraph.from_dict(_load_json(path))


def cmd_fatgraph(args) -> tuple[dict, Scene | None]:
    g = _load_graph(args.file)
    cycles = boundary_cycles(g)
    violations = validate_admissible(g)
    try:
        part = g.boundary_partition()
    except MalformedFatGraph:
        part = {}
    return {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "euler_characteristic": euler_characteristic(g),
        "orientable": is_orientable(g),
        "boundary_cycles": [
            {
                "id": c.id,
                "class": part.get(c.id, "unassigned"),
                "edge_ends": list(c.edge_ends),
                "wedges": [list(w) for w in c.wedges],
            }
            for c in cycles
        ],
        "admissible": not violations,
        "violations": [{"kind": v.kind, "where": v.where} for v in violations],
    }, None


def cmd_tree(args) -> tuple[dict, Scene | None]:
    g = _load_graph(args.file)
    c = build_lozenge_complex(g, args.radius)
    chains = scalloped_chains(c)
    report = {
        "radius": c.radius,
        "corners": len(c.corner_vertex),
        "lozenges": [
            {"id": lz.id, "edge": lz.edge, "parity": lz.parity, "corners": [lz.ends[0][0], lz.ends[1][0]]}
            for lz in c.lozenges
        ],
        "chains": [
            {"type": ch.type, "boundary": ch.boundary, "lozenges": list(ch.lozenges)} for ch in chains
        ],
    }
    return report, lozenge_scene(c)


def _plane_specs(data: Any) -> list[tuple[FatGraph, dict]]:
    graphs = data["graphs"] if isinstance(data, dict) and "graphs" in data else [data]
    specs = []
    for g in graphs:
        table = {int(k): (int(v[0]), int(v[1])) for k, v in g.get("gluing", {}).items()}
        specs.append((FatGraph.from_dict(g), table))
    return specs


def cmd_plane(args) -> tuple[dict, Scene | None]:
    try:
        specs = _plane_specs(_load_json(args.file))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad plane description: {exc}") from None
    pc = build_plane_complex(specs, args.depth, args.radius)
    return {
        "depth": args.depth,
        "radius": args.radius,
        "trees": [
            {"id": i, "graph": pc.tree_graph[i], "parent": pc.parent[i], "level": level_delta(pc, 0, i)}
            for i in range(len(pc.trees))
        ],
        "gluings": [
            {"from": gl.tree_a, "chain": gl.chain_a, "to": gl.tree_b, "to_chain": gl.chain_b, "sign": gl.sign}
            for gl in pc.gluings
        ],
        "acyclic": pc.is_acyclic(),
    }, None


def cmd_xset(args) -> tuple[dict, Scene | None]:
    lo, hi = parse_rational(args.window[0]), parse_rational(args.window[1])
    pts = x_infinity_points(args.depth, (lo, hi))
    return {
        "depth": args.depth,
        "window": [str(lo), str(hi)],
        "points": [{"value": fjson(v), "depth": d} for v, d in pts],
    }, None


# -- argument handling ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _matrix_arg(text: str) -> IntMatrix2:
    return parse_matrix(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bifoliate", description="Invariants of hyperbolic toral matrices and fat graph models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, figure: bool = False):
        sp.add_argument("--format", choices=("json", "text", "svg"), default="json")
        sp.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
        if figure:
            sp.add_argument("--figure", metavar="FILE", help="also write an SVG figure here")

    def one_matrix(name, help_, figure=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("matrix", nargs=1, metavar="MATRIX")
        common(sp, figure)
        return sp

    one_matrix("slopes", "eigenvalues and eigen-slopes")
    sp = one_matrix("cf", "continued fraction of an eigen-slope")
    sp.add_argument("--which", choices=("contracting", "expanding"), default="contracting")
    sp = one_matrix("sigma", "cluster-length period of the crossing sequence", figure=True)
    sp.add_argument("--box", type=int, help="fail with code 4 if a crossing leaves |m|,|n| <= BOX")
    sp = one_matrix("crossings", "crossing points with their sides", figure=True)
    sp.add_argument("--box", type=int)
    sp.add_argument("--t-max-windows", type=int, help="certified enumeration over this many windows")

    for name, help_ in (("distinguish", "compare sigma periods"), ("conjugate", "conjugacy up to powers")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("matrix", nargs=2, metavar="MATRIX")
        common(sp)
    sub.choices["distinguish"].add_argument(
        "--mode", choices=("orientation", "unrestricted"), default="orientation"
    )
    sub.choices["conjugate"].add_argument("--max-exponent", type=int, default=64)

    sp = sub.add_parser("fatgraph", help="boundary cycles and admissibility of a fat graph file")
    sp.add_argument("file")
    common(sp)
    sp = sub.add_parser("tree", help="lozenge complex of a fat graph")
    sp.add_argument("file")
    sp.add_argument("--radius", type=int, default=2)
    common(sp, figure=True)
    sp = sub.add_parser("plane", help="trees of lozenges glued along chains")
    sp.add_argument("file")
    sp.add_argument("--depth", type=int, default=1)
    sp.add_argument("--radius", type=int, default=1)
    common(sp)
    sp = sub.add_parser("xset", help="points of the ordered set X in a window")
    sp.add_argument("--depth", type=int, default=0)
    sp.add_argument("--window", nargs=2, metavar=("LO", "HI"), default=("1/4", "3/4"))
    common(sp)
    return p


COMMANDS = {
    "slopes": cmd_slopes,
    "cf": cmd_cf,
    "sigma": cmd_sigma,
    "crossings": cmd_crossings,
    "distinguish": cmd_distinguish,
    "conjugate": cmd_conjugate,
    "fatgraph": cmd_fatgraph,
    "tree": cmd_tree,
    "plane": cmd_plane,
    "xset": cmd_xset,
}


def render(report: dict, scene: Scene | None, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        return _text(report) + "\n"
    return svg_render(scene)


def dispatch(argv: Sequence[str]) -> tuple[int, str]:
    """Run one command; returns (exit code, text for stdout)."""
    try:
        args = build_parser().parse_args(list(argv))
        if hasattr(args, "matrix"):
            args.matrix = [parse_matrix(m) for m in args.matrix]
        for name in ("box", "radius", "depth", "t_max_windows", "max_exponent"):
            v = getattr(args, name, None)
            if v is not None and v < (1 if name in ("box", "t_max_windows", "max_exponent") else 0):
                raise InputError(f"--{name.replace('_', '-')} is out of range: {v}")
        report, scene = COMMANDS[args.command](args)
        out = render(report, scene, args.format)
        if getattr(args, "figure", None):
            Path(args.figure).write_text(svg_render(scene))
        if args.out:
            Path(args.out).write_text(out)
            return EXIT_OK, ""
        return EXIT_OK, out
    except InputError as exc:
        return EXIT_INPUT, exc.render()
    except (NotHyperbolic, MalformedFatGraph, Inadmissible, UnmatchedChains, AccumulationError, SlopePoleError) as exc:
        return EXIT_INPUT, f"error: {exc}"
    except Inconclusive as exc:
        return EXIT_INCONCLUSIVE, f"inconclusive: {exc}"
    except WindowIncomplete as exc:
        return EXIT_WINDOW, f"window incomplete: {exc}"


def main(argv: Sequence[str] | None = None) -> int:
    code, out = dispatch(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    if out:
        stream.write(out if out.endswith("\n") else out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
