"""Run reports: JSON serialization, tables, and witness files.

Reports are plain JSON dicts with complex numbers stored as [re, im] pairs.
Serialization is canonical (sorted keys, fixed indentation, trailing
newline) so that dump -> load -> dump is byte-identical and two runs with
the same seed differ only in the wall_ms timing fields.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from . import __version__
from .cascade import CascadeConfig, CascadeOutput, SolveOutput

SUPERSET_LABEL = "witness superset (may contain points of higher-dimensional components)"


def _c2j(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _vec2j(v) -> list:
    return [_c2j(z) for z in np.asarray(v).ravel()]


def _j2c(pair) -> complex:
    return complex(pair[0], pair[1])


def j2vec(pairs) -> np.ndarray:
    """Decode a list of [re, im] pairs back into a complex vector."""
    return np.array([_j2c(p) for p in pairs], dtype=np.complex128)


def _point2j(p) -> dict:
    return {
        "coordinates": _vec2j(p.x),
        "multiplicity": int(p.multiplicity),
        "residual": float(p.residual),
        "condition": float(p.condition),
    }


def _stats2j(s) -> dict:
    return {
        "level": int(s.level), "n_paths": int(s.n_paths),
        "on_component": int(s.on_component), "regular": int(s.regular),
        "diverged": int(s.diverged), "unresolved": int(s.unresolved),
        "wall_ms": float(s.wall_ms),
    }


def source_digest(source: str) -> str:
    return "sha256:" + hashlib.sha256(source.encode("utf-8")).hexdigest()


def build_cascade_report(output: CascadeOutput, source: str,
                         cfg: CascadeConfig) -> dict:
    params = output.parameters
    top = params.n - 1
    witness_sets = []
    for ws in output.supersets:
        witness_sets.append({
            "level": int(ws.level),
            "label": "witness set" if ws.level == top else SUPERSET_LABEL,
            "points": [_point2j(p) for p in ws.points],
            "slices": [{"constant": _c2j(c), "coefficients": _vec2j(a)}
                       for c, a in ws.slices],
            "filtered_out": int(ws.filtered_out),
        })
    return {
        "kind": "cascade",
        "version": __version__,
        "input": {"digest": source_digest(source), "source": source},
        "seed": int(output.seed),
        "config": cfg.to_dict(),
        "gamma": _c2j(output.gamma),
        "start_constants": _vec2j(output.start_constants),
        "parameters": {
            "seed": int(params.seed),
            "eta": _c2j(params.eta),
            "hyperplanes": [{"constant": _c2j(h.constant),
                             "coefficients": _vec2j(h.coefficients)}
                            for h in params.hyperplanes],
            "lambda": [_vec2j(row) for row in params.lambda_matrix],
        },
        "levels": [_stats2j(s) for s in output.stats],
        "witness_sets": witness_sets,
        "isolated_solutions": [_point2j(p) for p in output.isolated_solutions],
        "unresolved_level0": [_point2j(p) for p in output.unresolved_level0],
        "top_dimension": None if output.top_dimension is None else int(output.top_dimension),
        "total_paths": int(output.total_paths),
    }


def build_solve_report(output: SolveOutput, source: str,
                       cfg: CascadeConfig) -> dict:
    return {
        "kind": "solve",
        "version": __version__,
        "input": {"digest": source_digest(source), "source": source},
        "seed": int(output.seed),
        "config": cfg.to_dict(),
        "gamma": _c2j(output.gamma),
        "start_constants": _vec2j(output.start_constants),
        "levels": [_stats2j(output.stats)],
        "isolated_solutions": [_point2j(p) for p in output.solutions],
        "unresolved_level0": [_point2j(p) for p in output.unresolved],
        "total_paths": int(output.total_paths),
    }


def canonical_dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_report(path: str, report: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(report))


def load_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def strip_timing_fields(report: dict) -> dict:
    """Copy of the report with every wall_ms zeroed, for run comparisons."""
    clone = json.loads(json.dumps(report))
    for row in clone.get("levels", []):
        row["wall_ms"] = 0.0
    return clone


def _fmt_cell(value, width: int) -> str:
    return f"{value:>{width}}"


def render_cascade_table(report: dict) -> str:
    """Per-level path accounting in the four-bucket layout.

    Columns: paths tracked, endpoints with all slacks zero, nonsingular
    endpoints with nonzero slack (recycled downward; isolated solutions at
    level 0), diverged paths, and singular/unresolved leftovers.
    """
    headers = ["system", "#paths", "z = 0", "z != 0", "-> inf", "failed", "time"]
    rows = []
    total_paths = 0
    total_ms = 0.0
    for s in report["levels"]:
        rows.append([f"E_{s['level']}", s["n_paths"], s["on_component"],
                     s["regular"], s["diverged"], s["unresolved"],
                     f"{s['wall_ms'] / 1000.0:.2f}s"])
        total_paths += s["n_paths"]
        total_ms += s["wall_ms"]
    rows.append(["total", total_paths, "", "", "", "", f"{total_ms / 1000.0:.2f}s"])
    widths = [max(len(str(r[k])) for r in rows + [headers]) for k in range(len(headers))]
    lines = ["  ".join(_fmt_cell(h, w) for h, w in zip(headers, widths))]
    for r in rows:
        lines.append("  ".join(_fmt_cell(v, w) for v, w in zip(r, widths)))
    return "\n".join(lines)


def _fmt_complex(z, prec: int = 12) -> str:
    re, im = float(np.real(z)), float(np.imag(z))
    return f"{re:+.{prec}e} {im:+.{prec}e}"


def _render_points(points: list, indent: str = "  ") -> list:
    lines = []
    for p in points:
        coords = "  ".join(_fmt_complex(_j2c(c)) for c in p["coordinates"])
        lines.append(f"{indent}{coords}  mult {p['multiplicity']}"
                     f"  residual {p['residual']:.2e}"
                     f"  condition {p['condition']:.2e}")
    return lines


def render_cascade_summary(report: dict) -> str:
    lines = [render_cascade_table(report), ""]
    for ws in sorted(report["witness_sets"], key=lambda w: -w["level"]):
        if not (ws["points"] or ws["filtered_out"]):
            continue
        lines.append(f"dimension {ws['level']}: {len(ws['points'])} witness point(s)"
                     + (f" [{ws['filtered_out']} filtered]" if ws["filtered_out"] else "")
                     + f" -- {ws['label']}")
        lines.extend(_render_points(ws["points"]))
    if report["isolated_solutions"]:
        lines.append(f"isolated solutions: {len(report['isolated_solutions'])}")
        lines.extend(_render_points(report["isolated_solutions"]))
    if report["unresolved_level0"]:
        lines.append(f"singular/unresolved endpoints: {len(report['unresolved_level0'])} cluster(s)")
        lines.extend(_render_points(report["unresolved_level0"]))
    lines.append("")
    if report["top_dimension"] is None:
        lines.append("no solutions detected")
    elif report["top_dimension"] == 0:
        lines.append("no positive-dimensional components detected; "
                     f"{len(report['isolated_solutions'])} isolated solution(s)")
    else:
        lines.append(f"top dimension: {report['top_dimension']}")
    return "\n".join(lines)


def render_solve_listing(report: dict, results=None) -> str:
    lines = []
    if results is not None:
        for r in results:
            coords = "  ".join(_fmt_complex(z) for z in r.endpoint)
            lines.append(f"path {r.start_index:3d}  {r.status.value:>9}  {coords}"
                         f"  residual {r.residual:.2e}  condition {r.condition:.2e}")
        lines.append("")
    s = report["levels"][0]
    lines.append(f"{s['n_paths']} paths: {s['regular']} regular, "
                 f"{s['diverged']} diverged, {s['unresolved']} singular/unresolved")
    if report["isolated_solutions"]:
        lines.append(f"isolated solutions: {len(report['isolated_solutions'])}")
        lines.extend(_render_points(report["isolated_solutions"]))
    if report["unresolved_level0"]:
        lines.append(f"singular/unresolved clusters: {len(report['unresolved_level0'])}")
        lines.extend(_render_points(report["unresolved_level0"]))
    return "\n".join(lines)


def write_witness_file(path: str, report: dict) -> None:
    """Witness points grouped by dimension, with their slicing hyperplanes.

    Numbers are written as re/im pairs; each point line carries the
    coordinates followed by multiplicity, residual, condition.
    """
    lines = [
        "# witness points grouped by dimension",
        f"# input {report['input']['digest']}",
        f"# seed {report['seed']}",
    ]
    any_points = False
    for ws in sorted(report.get("witness_sets", []), key=lambda w: -w["level"]):
        if not ws["points"]:
            continue
        any_points = True
        lines.append(f"dim {ws['level']}")
        for j, sl in enumerate(ws["slices"], start=1):
            coeffs = " ".join(_fmt_complex(_j2c(c), 17) for c in sl["coefficients"])
            lines.append(f"slice {j}: {_fmt_complex(_j2c(sl['constant']), 17)} {coeffs}")
        for p in ws["points"]:
            coords = " ".join(_fmt_complex(_j2c(c), 17) for c in p["coordinates"])
            lines.append(f"{coords} mult {p['multiplicity']} "
                         f"residual {p['residual']:.16e} condition {p['condition']:.16e}")
    if not any_points:
        lines.append("# no witness points")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
