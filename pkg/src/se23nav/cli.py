"""Command-line interface: trajectory propagation, error sweeps, op counts.

Three subcommands cover the benchmark surface:

  propagate   run a scenario with one method and write the trajectory CSV
  sweep       measure final-state error against the exact reference over a
              list of step sizes and write an error CSV (optional SVG)
  flops       count scalar floating-point operations per step for the
              closed form and the dense RK4 comparator (optional SVG)

All CSV numbers are written with 17 significant digits so values
round-trip exactly; outputs are byte-deterministic for identical inputs.
SVG output is a dependency-free convenience rendering; the CSV is the
authoritative artifact.
"""

from __future__ import annotations

import argparse
import math
import sys

from .integrators import attitude_error, integrate, position_error
from .opcount import REFERENCE_RATIO, count_step, report_table
from .propagator import GravityModel, propagate
from .scenarios import circle_scenario, constant_input, imu_samples, load_scenario

__all__ = ["main"]

_TRAJECTORY_COLUMNS = (
    "t,px,py,pz,vx,vy,vz,r11,r12,r13,r21,r22,r23,r31,r32,r33"
)


def _fmt(value):
    return f"{value:.17g}"


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _trajectory_csv(traj):
    lines = [_TRAJECTORY_COLUMNS]
    for time, state in zip(traj.times, traj.states):
        r = state.rot
        fields = (
            [time],
            list(state.pos),
            list(state.vel),
            [r[0, 0], r[0, 1], r[0, 2], r[1, 0], r[1, 1], r[1, 2], r[2, 0], r[2, 1], r[2, 2]],
        )
        lines.append(",".join(_fmt(v) for group in fields for v in group))
    return "\n".join(lines) + "\n"


def cmd_propagate(scenario_path, method, substeps, out_path):
    scenario = load_scenario(scenario_path)
    samples = imu_samples(scenario)
    traj = integrate(scenario.initial, samples, scenario.gravity, method, substeps)
    _write_text(out_path, _trajectory_csv(traj))
    print(f"wrote {len(traj)} states to {out_path}")
    return 0


def _parse_h_list(text):
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"--h-list: non-numeric entry in '{text}'") from None
    if len(values) < 2:
        raise ValueError("--h-list needs at least 2 step sizes")
    for h in values:
        if not (math.isfinite(h) and h > 0.0):
            raise ValueError(f"--h-list: step sizes must be finite and > 0, got {h}")
    return values


def cmd_sweep(scenario_path, method, h_list, out_path, svg_path=None):
    scenario = load_scenario(scenario_path)
    u = constant_input(scenario)
    reference = propagate(scenario.initial, u, scenario.gravity, scenario.duration)
    rows = []
    for h in h_list:
        count = max(1, round(scenario.duration / h))
        h_eff = scenario.duration / count
        traj = integrate(
            scenario.initial,
            [(u, h_eff)] * count,
            scenario.gravity,
            method,
            substeps=1,
        )
        pos_err = position_error(traj.final, reference)
        try:
            att_err = attitude_error(traj.final, reference)
        except ValueError:
            # attitude has drifted too far off the group for a geodesic
            # distance to mean anything (coarse Euler steps)
            att_err = float("nan")
        rows.append((h, pos_err, att_err))
    lines = ["h,pos_err,att_err"]
    for h, pos_err, att_err in rows:
        lines.append(f"{_fmt(h)},{_fmt(pos_err)},{_fmt(att_err)}")
    _write_text(out_path, "\n".join(lines) + "\n")
    print(f"wrote {len(rows)} sweep points to {out_path}")
    if svg_path is not None:
        pos_series = ("pos_err [m]", "#1f77b4", [(h, p) for h, p, _ in rows])
        att_series = (
            "att_err [rad]",
            "#d62728",
            [(h, a) for h, _, a in rows if math.isfinite(a)],
        )
        series = [pos_series] + ([att_series] if att_series[2] else [])
        _write_text(
            svg_path,
            _svg_log_log_plot(
                series,
                xlabel="step size h [s]",
                ylabel="final-state error",
                title=f"{method} error vs step size ({scenario.name})",
            ),
        )
        print(f"wrote plot to {svg_path}")
    return 0


def cmd_flops(out_path, svg_path=None, h=0.1):
    scenario = circle_scenario()
    u = constant_input(scenario)
    grav = GravityModel()
    reports = [
        count_step("closed", u, grav, h),
        count_step("rk4", u, grav, h),
    ]
    table, csv_text = report_table(reports)
    _write_text(out_path, csv_text)
    sys.stdout.write(table)
    ratio = reports[1].total / reports[0].total
    print(
        f"measured rk4/closed ratio: {ratio:.2f}; "
        f"reference comparison point: {REFERENCE_RATIO:g}"
    )
    print(f"wrote op counts to {out_path}")
    if svg_path is not None:
        _write_text(
            svg_path,
            _svg_bar_chart(
                labels=[rep.method for rep in reports],
                values=[rep.total for rep in reports],
                title="scalar flops per propagation step",
                note=(
                    f"rk4/closed = {ratio:.2f} "
                    f"(reference comparison point: {REFERENCE_RATIO:g})"
                ),
            ),
        )
        print(f"wrote plot to {svg_path}")
    return 0


# plot geometry shared by both SVG emitters
_W, _H = 640, 480
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 620, 40, 420


def _svg_open(title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{(_LEFT + _RIGHT) / 2}" y="20" text-anchor="middle" '
        f'font-size="14">{title}</text>',
    ]


def _svg_log_log_plot(series, xlabel, ylabel, title):
    """Minimal log-log scatter/line plot; no external plotting packages."""
    floor = 1e-17
    logged = [
        (label, color, [(math.log10(x), math.log10(max(y, floor))) for x, y in pts])
        for label, color, pts in series
        if pts
    ]
    xs = [p[0] for _, _, pts in logged for p in pts]
    ys = [p[1] for _, _, pts in logged for p in pts]
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    if xmax - xmin < 1e-9:
        xmin, xmax = xmin - 0.5, xmax + 0.5
    if ymax - ymin < 1e-9:
        ymin, ymax = ymin - 0.5, ymax + 0.5
    xpad = 0.05 * (xmax - xmin)
    ypad = 0.08 * (ymax - ymin)
    xmin, xmax = xmin - xpad, xmax + xpad
    ymin, ymax = ymin - ypad, ymax + ypad

    def px(x):
        return _LEFT + (x - xmin) / (xmax - xmin) * (_RIGHT - _LEFT)

    def py(y):
        return _BOTTOM - (y - ymin) / (ymax - ymin) * (_BOTTOM - _TOP)

    out = _svg_open(title)
    out.append(
        f'<rect x="{_LEFT}" y="{_TOP}" width="{_RIGHT - _LEFT}" '
        f'height="{_BOTTOM - _TOP}" fill="none" stroke="black"/>'
    )
    for decade in range(math.ceil(xmin), math.floor(xmax) + 1):
        x = px(decade)
        out.append(
            f'<line x1="{x:.1f}" y1="{_BOTTOM}" x2="{x:.1f}" y2="{_BOTTOM + 5}" '
            f'stroke="black"/>'
        )
        out.append(
            f'<text x="{x:.1f}" y="{_BOTTOM + 18}" text-anchor="middle">'
            f"1e{decade}</text>"
        )
    for decade in range(math.ceil(ymin), math.floor(ymax) + 1):
        y = py(decade)
        out.append(
            f'<line x1="{_LEFT - 5}" y1="{y:.1f}" x2="{_LEFT}" y2="{y:.1f}" '
            f'stroke="black"/>'
        )
        out.append(
            f'<text x="{_LEFT - 8}" y="{y + 4:.1f}" text-anchor="end">'
            f"1e{decade}</text>"
        )
    out.append(
        f'<text x="{(_LEFT + _RIGHT) / 2}" y="{_BOTTOM + 38}" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    out.append(
        f'<text x="18" y="{(_TOP + _BOTTOM) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {(_TOP + _BOTTOM) / 2})">{ylabel}</text>'
    )
    for index, (label, color, pts) in enumerate(logged):
        path = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in sorted(pts))
        out.append(
            f'<polyline points="{path}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        for x, y in pts:
            out.append(
                f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" fill="{color}"/>'
            )
        out.append(
            f'<text x="{_RIGHT - 8}" y="{_TOP + 16 + 16 * index}" '
            f'text-anchor="end" fill="{color}">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _svg_bar_chart(labels, values, title, note=""):
    out = _svg_open(title)
    vmax = max(values)
    slot = (_RIGHT - _LEFT) / len(values)
    for index, (label, value) in enumerate(zip(labels, values)):
        height = (_BOTTOM - _TOP - 30) * value / vmax
        x = _LEFT + slot * index + slot * 0.25
        y = _BOTTOM - height
        out.append(
            f'<rect x="{x:.1f}" y="{y:.1f}" width="{slot * 0.5:.1f}" '
            f'height="{height:.1f}" fill="#1f77b4"/>'
        )
        out.append(
            f'<text x="{x + slot * 0.25:.1f}" y="{y - 6:.1f}" '
            f'text-anchor="middle">{value}</text>'
        )
        out.append(
            f'<text x="{x + slot * 0.25:.1f}" y="{_BOTTOM + 18}" '
            f'text-anchor="middle">{label}</text>'
        )
    out.append(
        f'<line x1="{_LEFT}" y1="{_BOTTOM}" x2="{_RIGHT}" y2="{_BOTTOM}" '
        f'stroke="black"/>'
    )
    if note:
        out.append(
            f'<text x="{(_LEFT + _RIGHT) / 2}" y="{_BOTTOM + 44}" '
            f'text-anchor="middle">{note}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="se23nav",
        description="Exact strapdown propagation and integrator benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_prop = sub.add_parser("propagate", help="run a scenario, write trajectory CSV")
    p_prop.add_argument("--scenario", required=True, help="scenario file path")
    p_prop.add_argument(
        "--method", default="closed", help="closed | rk4 | euler (default closed)"
    )
    p_prop.add_argument(
        "--substeps", type=int, default=1, help="sub-steps per sample (default 1)"
    )
    p_prop.add_argument("--out", required=True, help="output CSV path")

    p_sweep = sub.add_parser("sweep", help="error vs step size, write CSV")
    p_sweep.add_argument("--scenario", required=True, help="scenario file path")
    p_sweep.add_argument(
        "--method", default="rk4", help="closed | rk4 | euler (default rk4)"
    )
    p_sweep.add_argument(
        "--h-list", required=True, help="comma-separated step sizes, e.g. 0.2,0.1,0.05"
    )
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.add_argument("--svg", default=None, help="optional log-log plot path")

    p_flops = sub.add_parser("flops", help="per-step operation counts, write CSV")
    p_flops.add_argument("--out", required=True, help="output CSV path")
    p_flops.add_argument("--svg", default=None, help="optional bar chart path")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "propagate":
            return cmd_propagate(args.scenario, args.method, args.substeps, args.out)
        if args.command == "sweep":
            h_list = _parse_h_list(args.h_list)
            return cmd_sweep(args.scenario, args.method, h_list, args.out, args.svg)
        return cmd_flops(args.out, args.svg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
