"""Command-line driver: arrangement files, JSON reports and SVG output.

Exit status is 0 on success, 1 when a check fails (invalid arrangement,
bound violated, certification verdict false, generation shortfall) and 2 on
bad input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from . import __version__
from .arrangement import MuArrangement, validate
from .bounds import MU_CRIT, TOL_EQ, coefficients, theorem_bound
from .certify import DEFAULT_RESOLUTION, case1_scan, certify_h_positive, derivative_gate, refine_minimum
from .constructions import Window, corollary_density, density_estimate, iterate_hex, random_arrangement
from .decomposition import RegionDecomposition, decompose
from .errors import DomainError, EmptyFamilyError, ShortfallError
from .geometry import Disk

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

REGION_STYLE = {"outer": "#ffffff", "inner": "#d3d3d3", "core": "#808080"}
STROKE = "#000000"


class InputError(Exception):
    """Unreadable or malformed input; maps to exit status 2."""


# ---------------------------------------------------------------- serialization

def _num(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with every float written to 17 significant digits, keys in insertion order."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def arrangement_text(arr: MuArrangement) -> str:
    body = {"mu": arr.mu, "disks": [{"x": d.x, "y": d.y, "r": d.radius} for d in arr.disks]}
    return dumps(body) + "\n"


def _field(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}: expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise InputError(f"{where}: value must be finite, got {value!r}")
    return x


def parse_arrangement(text: str, source: str = "<input>") -> MuArrangement:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{source}: top level must be an object with fields mu and disks")
    for key in ("mu", "disks"):
        if key not in doc:
            raise InputError(f"{source}: missing field '{key}'")
    mu = _field(doc["mu"], f"{source}: field 'mu'")
    if not isinstance(doc["disks"], list):
        raise InputError(f"{source}: field 'disks' must be a list")
    disks = []
    for k, item in enumerate(doc["disks"]):
        if not isinstance(item, dict):
            raise InputError(f"{source}: disks[{k}] must be an object with x, y, r")
        vals = {}
        for key in ("x", "y", "r"):
            if key not in item:
                raise InputError(f"{source}: disks[{k}] missing field '{key}'")
            vals[key] = _field(item[key], f"{source}: field 'disks[{k}].{key}'")
        if vals["r"] <= 0:
            raise InputError(f"{source}: field 'disks[{k}].r' must be positive, got {vals['r']!r}")
        disks.append(Disk((vals["x"], vals["y"]), vals["r"]))
    if not 0.0 < mu < 1.0:
        raise InputError(f"{source}: field 'mu' must lie in (0, 1), got {mu!r}")
    if not disks:
        raise InputError(f"{source}: field 'disks' is empty")
    return MuArrangement(mu, tuple(disks))


def read_arrangement(path: str) -> tuple[MuArrangement, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError(f"{path}: not UTF-8 text") from None
    return parse_arrangement(text, path), hashlib.sha256(raw).hexdigest()


def _params_digest(params: dict) -> str:
    return hashlib.sha256(dumps(params).encode()).hexdigest()


def _report(command: str, digest: str, body: dict) -> dict:
    return {"tool": "muarrange", "version": __version__, "command": command, "input_sha256": digest, **body}


# ---------------------------------------------------------------- report bodies

def validation_body(arr: MuArrangement) -> dict:
    rep = validate(arr)
    return {
        "mu": arr.mu,
        "n_disks": len(arr.disks),
        "valid": rep.valid,
        "violations": [
            {"i": v.i, "j": v.j, "required_distance": v.required_distance, "actual_distance": v.actual_distance}
            for v in rep.violations
        ],
    }


def decomposition_body(dec: RegionDecomposition) -> dict:
    return {
        "area_U": dec.area_U,
        "area_O": dec.area_O,
        "area_I": dec.area_I,
        "area_C": dec.area_C,
        "core_polygon_area": dec.core_polygon_area,
        "counts": {"sectors": len(dec.outer), "triangles": len(dec.shell), "polygons": len(dec.core_polys)},
        "core_polygons": [list(p.vertices) for p in dec.core_polys],
        "warnings": [f"{d.kind}: {d.detail}" for d in dec.diagnostics],
    }


# ---------------------------------------------------------------- SVG

def _sector_path(cx, cy, r, start, sweep) -> str:
    if sweep >= 2 * math.pi - 1e-12:
        return (f"M {cx - r!r} {cy!r} A {r!r} {r!r} 0 1 1 {cx + r!r} {cy!r} "
                f"A {r!r} {r!r} 0 1 1 {cx - r!r} {cy!r} Z")
    x0, y0 = cx + r * math.cos(start), cy + r * math.sin(start)
    x1, y1 = cx + r * math.cos(start + sweep), cy + r * math.sin(start + sweep)
    large = 1 if sweep > math.pi else 0
    return f"M {cx!r} {cy!r} L {x0!r} {y0!r} A {r!r} {r!r} 0 {large} 1 {x1!r} {y1!r} Z"


def render_svg(arr: MuArrangement, dec: RegionDecomposition, width: int = 800) -> str:
    """Core colour under the whole union, then shell triangles, then sectors, then circle outlines.

    Since O, I and C tile the union, painting in that order leaves exactly
    the core visible in the core colour.
    """
    lo = (arr.centers - arr.radii[:, None]).min(axis=0)
    hi = (arr.centers + arr.radii[:, None]).max(axis=0)
    span = float(max(hi - lo))
    margin = 0.02 * span
    x0, y0 = lo[0] - margin, lo[1] - margin
    w, h = hi[0] - lo[0] + 2 * margin, hi[1] - lo[1] + 2 * margin
    stroke_w = span / width
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{int(round(width * h / w))}" '
        f'viewBox="{x0!r} {-(y0 + h)!r} {w!r} {h!r}">',
        "<style>",
        *(f".{name} {{ fill: {color}; stroke: none; }}" for name, color in REGION_STYLE.items()),
        f".disk {{ fill: none; stroke: {STROKE}; stroke-width: {stroke_w!r}; }}",
        "</style>",
        '<g transform="scale(1,-1)">',
        '<g class="core">',
        *(f'<circle cx="{d.x!r}" cy="{d.y!r}" r="{d.radius!r}"/>' for d in arr.disks),
        "</g>",
        '<g class="inner">',
    ]
    for t in dec.shell:
        (ax, ay), (bx, by), (qx, qy) = arr.disks[t.i].center, arr.disks[t.j].center, t.q
        out.append(f'<polygon points="{ax!r},{ay!r} {bx!r},{by!r} {qx!r},{qy!r}"/>')
    out.append("</g>")
    out.append('<g class="outer">')
    for s in dec.outer:
        d = arr.disks[s.disk]
        out.append(f'<path d="{_sector_path(d.x, d.y, d.radius, s.arc.start, s.arc.sweep)}"/>')
    out.append("</g>")
    out.append('<g class="disk">')
    out.extend(f'<circle cx="{d.x!r}" cy="{d.y!r}" r="{d.radius!r}"/>' for d in arr.disks)
    out.append("</g>")
    out.append("</g>")
    out.append(f"<!-- {escape(f'mu={arr.mu!r} n={len(arr.disks)}')} -->")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- commands

def _require_input(args):
    if not args.input:
        raise InputError("--input is required for this command")
    return read_arrangement(args.input)


def cmd_validate(args):
    arr, digest = _require_input(args)
    body = validation_body(arr)
    return _report("validate", digest, body), EXIT_OK if body["valid"] else EXIT_FAIL


def cmd_decompose(args):
    arr, digest = _require_input(args)
    check = validation_body(arr)
    if not check["valid"]:
        return _report("decompose", digest, {"validation": check}), EXIT_FAIL
    dec = decompose(arr)
    if args.svg:
        Path(args.svg).write_text(render_svg(arr, dec))
    return _report("decompose", digest, {"mu": arr.mu, "n_disks": len(arr.disks), **decomposition_body(dec)}), EXIT_OK


def cmd_verify_bound(args):
    arr, digest = _require_input(args)
    check = validation_body(arr)
    if not check["valid"]:
        return _report("verify-bound", digest, {"validation": check}), EXIT_FAIL
    tol = TOL_EQ if args.tolerance is None else args.tolerance
    rep = theorem_bound(arr, tol_eq=tol)
    coef = coefficients(arr.mu)
    body = {
        "mu": arr.mu,
        "mode": rep.mode,
        "total_disk_area": rep.total_disk_area,
        "rhs": rep.rhs,
        "slack": rep.slack,
        "holds": rep.holds,
        "equality": rep.equality,
        "tol_eq": rep.tol_eq,
        "non_thick_free_digons": [list(p) for p in rep.non_thick_free_digons],
        "sigma_core": coef.sigma_core,
        "sigma_shell": coef.sigma_shell,
        **decomposition_body(rep.decomposition),
    }
    if rep.mode == "conjectural":
        body = {"banner": f"CONJECTURAL: mu > sqrt(3)-1 = {MU_CRIT:.17g}; core term dropped, bound not proven"} | body
    return _report("verify-bound", digest, body), EXIT_OK if rep.holds else EXIT_FAIL


def _resolution(values) -> tuple[int, int]:
    if values is None:
        return DEFAULT_RESOLUTION
    if len(values) == 1:
        return values[0], values[0]
    if len(values) == 2:
        return values[0], values[1]
    raise InputError("--resolution takes one or two integers")


def cmd_certify(args):
    res = _resolution(args.resolution)
    if min(res) < 2:
        raise InputError(f"--resolution must be at least 2, got {res}")
    threads = args.threads or 1
    if threads < 1:
        raise InputError("--threads must be positive")
    digest = _params_digest({"resolution": list(res)})
    gate = derivative_gate()
    gate_body = {"samples": gate.samples, "max_error_f": gate.max_error_f,
                 "max_error_g": gate.max_error_g, "tolerance": gate.tolerance, "passed": gate.passed}
    if not gate.passed:
        return _report("certify", digest, {"derivative_gate": gate_body, "verdict": False}), EXIT_FAIL
    grid = certify_h_positive(res, threads=threads)
    refined, at = refine_minimum(grid.argmin)
    scan = case1_scan()
    explanation = (
        f"lower bound = grid_min - (L_rho*d_rho/2 + L_mu*d_mu/2) - rounding = "
        f"{grid.grid_min:.6g} - ({grid.lipschitz[0]}*{grid.steps[0]:.6g}/2 + {grid.lipschitz[1]}*{grid.steps[1]:.6g}/2)"
        f" - {grid.rounding_slack:g} = {grid.global_lower_bound:.6g}"
        f" ({'positive' if grid.verdict else 'not positive; refine the grid'})"
    )
    body = {
        "derivative_gate": gate_body,
        "rho_range": list(grid.rho_range),
        "mu_range": list(grid.mu_range),
        "resolution": list(grid.resolution),
        "grid_min": grid.grid_min,
        "argmin": list(grid.argmin),
        "lipschitz": list(grid.lipschitz),
        "steps": list(grid.steps),
        "lipschitz_loss": grid.lipschitz_loss,
        "rounding_slack": grid.rounding_slack,
        "global_lower_bound": grid.global_lower_bound,
        "verdict": grid.verdict,
        "margin_arithmetic": explanation,
        "refined_min": refined,
        "refined_argmin": list(at),
        "case1": {"samples": scan.samples, "minimum": scan.minimum, "argmin": scan.argmin,
                  "positive": scan.positive, "decreasing": scan.decreasing},
        "threads": threads,
        "timing": {"grid_seconds": grid.seconds},
    }
    return _report("certify", digest, body), EXIT_OK if grid.verdict and scan.positive else EXIT_FAIL


def _window(args, default_radius: float) -> Window:
    r = default_radius if args.window_radius is None else args.window_radius
    return Window((0.0, 0.0), r)


def _need_mu(args) -> float:
    if args.mu is None:
        raise InputError("--mu is required for this command")
    return args.mu


def _density_body(arr: MuArrangement, window: Window) -> dict:
    est = density_estimate(arr, window)
    body = {"window_radius": window.radius, "n_inside": est.n_disks, "delta": est.delta, "delta_U": est.delta_U}
    if arr.mu < 1:
        body["corollary_delta_U"] = corollary_density(arr.mu)
    return body


def _write_arrangement(args, arr: MuArrangement):
    if args.output:
        Path(args.output).write_text(arrangement_text(arr))


def cmd_hex(args):
    mu = _need_mu(args)
    tau = 0.2 if args.tau is None else args.tau
    k = args.iterations or 0
    window = _window(args, 10.0)
    digest = _params_digest({"mu": mu, "window_radius": window.radius, "tau": tau, "iterations": k})
    arr = iterate_hex(mu, tau, k, window)
    _write_arrangement(args, arr)
    body = {"mu": mu, "tau": tau, "iterations": k, "n_disks": len(arr.disks), **_density_body(arr, window)}
    return _report("hex", digest, body), EXIT_OK


def cmd_random(args):
    mu = _need_mu(args)
    seed = 0 if args.seed is None else args.seed
    count = args.count or 20
    radius = 0.55 * math.sqrt(count) if args.window_radius is None else args.window_radius
    window = Window((0.0, 0.0), radius)
    digest = _params_digest({"mu": mu, "window_radius": radius, "seed": seed, "count": count})
    status = EXIT_OK
    try:
        arr = random_arrangement(mu, window, count, seed)
        shortfall = False
    except ShortfallError as exc:
        arr, shortfall, status = exc.arrangement, True, EXIT_FAIL
    _write_arrangement(args, arr)
    body = {"mu": mu, "seed": seed, "requested": count, "n_disks": len(arr.disks),
            "window_radius": radius, "shortfall": shortfall}
    return _report("random", digest, body), status


def cmd_density(args):
    arr, digest = _require_input(args)
    check = validation_body(arr)
    if not check["valid"]:
        return _report("density", digest, {"validation": check}), EXIT_FAIL
    reach = float(np.max(np.hypot(*arr.centers.T) + arr.radii))
    window = _window(args, reach)
    return _report("density", digest, {"mu": arr.mu, **_density_body(arr, window)}), EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "verify-bound": cmd_verify_bound,
    "certify": cmd_certify,
    "hex": cmd_hex,
    "random": cmd_random,
    "density": cmd_density,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="muarrange", description="Tools for mu-arrangements of disks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--output", help="report path (hex/random: arrangement path); report goes to stdout otherwise")
        return s

    for name, text in (("validate", "check the mu-condition"),
                       ("decompose", "outer shell, inner shell and core areas"),
                       ("verify-bound", "compare total disk area with the weighted region bound"),
                       ("density", "density of the disks inside a centred window")):
        s = add(name, text)
        s.add_argument("--input", help="arrangement file")
        if name == "decompose":
            s.add_argument("--svg", help="write an SVG picture of the decomposition")
        if name == "verify-bound":
            s.add_argument("--tolerance", type=float, help=f"equality tolerance (default {TOL_EQ})")
        if name == "density":
            s.add_argument("--window-radius", type=float)

    s = add("certify", "grid certification of the shell inequality")
    s.add_argument("--resolution", type=int, nargs="+", metavar="N", help="grid points per axis (one or two values)")
    s.add_argument("--threads", type=int, default=1)

    s = add("hex", "hexagonal arrangement, optionally refined")
    s.add_argument("--mu", type=float)
    s.add_argument("--window-radius", type=float)
    s.add_argument("--tau", type=float)
    s.add_argument("--iterations", type=int)

    s = add("random", "seeded random arrangement")
    s.add_argument("--mu", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--count", type=int, help="target number of disks (default 20)")
    s.add_argument("--window-radius", type=float)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, status = COMMANDS[args.command](args)
    except (InputError, DomainError, EmptyFamilyError, ValueError) as exc:
        print(f"muarrange {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = dumps(report) + "\n"
    if args.output and args.command not in ("hex", "random"):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
