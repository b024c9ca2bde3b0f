"""Instrumented floating-point operation counting.

The kernels are written as straight-line scalar arithmetic, so running
them over a wrapper scalar that increments a tally on every operation
prices one propagation step exactly.  The wrapper performs the identical
IEEE arithmetic on the identical values, so an instrumented run is
bit-for-bit equal to a plain run; counting changes nothing but the tally.

Counting rules:
  - add, sub, mul, div each increment their own category; unary negation
    and ordering comparisons count as sub (one flop each).
  - sqrt counts in its own category; sin and cos count as trig.
  - totals are reported with and without the transcendental categories
    (sqrt, trig).

The closed-form count pins the coefficient evaluation to its general
branch so counts are input-independent; that branch divides by the
squared angle, so a zero angular rate cannot be priced and is rejected.
The competing method is classical fourth-order Runge-Kutta applied to
the dense 5x5 matrix form of the same initial value problem, which is
what a structure-agnostic integrator evaluates; on group elements it
produces value-identical results to the flattened-state stepper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "REFERENCE_RATIO",
    "Tally",
    "CountedScalar",
    "OpCountReport",
    "count_step",
    "report_table",
]

# Reference comparison point for the rk4/closed total-operation ratio,
# obtained on a symbolically simplified evaluation graph of the same two
# methods.  Reported alongside measured ratios for context; straight-line
# counting without common-subexpression elimination lands lower.
REFERENCE_RATIO = 12.0

CSV_COLUMNS = (
    "method",
    "add",
    "sub",
    "mul",
    "div",
    "sqrt",
    "trig",
    "total",
    "total_no_transcendental",
)


class Tally:
    """Mutable per-category operation counters for one counting session."""

    __slots__ = ("add", "sub", "mul", "div", "sqrt", "trig")

    def __init__(self):
        self.add = 0
        self.sub = 0
        self.mul = 0
        self.div = 0
        self.sqrt = 0
        self.trig = 0

    def total(self):
        return self.add + self.sub + self.mul + self.div + self.sqrt + self.trig


class CountedScalar:
    """A float that reports every arithmetic operation to a shared tally.

    Deliberately does not implement __float__: silent decay back to a
    plain float inside a kernel would leave operations uncounted, so any
    such path must fail loudly instead.  Only float and CountedScalar
    operands are accepted for the same reason.
    """

    __slots__ = ("value", "tally")

    def __init__(self, value, tally):
        self.value = value
        self.tally = tally

    def _operand(self, other):
        if isinstance(other, CountedScalar):
            return other.value
        if isinstance(other, float):
            return other
        return None

    def __repr__(self):
        return f"CountedScalar({self.value!r})"

    def __add__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.add += 1
        return CountedScalar(self.value + v, self.tally)

    def __radd__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.add += 1
        return CountedScalar(v + self.value, self.tally)

    def __sub__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.sub += 1
        return CountedScalar(self.value - v, self.tally)

    def __rsub__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.sub += 1
        return CountedScalar(v - self.value, self.tally)

    def __mul__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.mul += 1
        return CountedScalar(self.value * v, self.tally)

    def __rmul__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.mul += 1
        return CountedScalar(v * self.value, self.tally)

    def __truediv__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.div += 1
        return CountedScalar(self.value / v, self.tally)

    def __rtruediv__(self, other):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.div += 1
        return CountedScalar(v / self.value, self.tally)

    def __neg__(self):
        self.tally.sub += 1
        return CountedScalar(-self.value, self.tally)

    def _compare(self, other, op):
        v = self._operand(other)
        if v is None:
            return NotImplemented
        self.tally.sub += 1
        return op(self.value, v)

    def __lt__(self, other):
        return self._compare(other, lambda a, b: a < b)

    def __le__(self, other):
        return self._compare(other, lambda a, b: a <= b)

    def __gt__(self, other):
        return self._compare(other, lambda a, b: a > b)

    def __ge__(self, other):
        return self._compare(other, lambda a, b: a >= b)

    def sqrt(self):
        self.tally.sqrt += 1
        return CountedScalar(math.sqrt(self.value), self.tally)

    def sin(self):
        self.tally.trig += 1
        return CountedScalar(math.sin(self.value), self.tally)

    def cos(self):
        self.tally.trig += 1
        return CountedScalar(math.cos(self.value), self.tally)


def unwrap(node):
    """Recursively strip CountedScalar wrappers from nested tuples."""
    if isinstance(node, CountedScalar):
        return node.value
    if isinstance(node, tuple):
        return tuple(unwrap(item) for item in node)
    return node


@dataclass(frozen=True)
class OpCountReport:
    """Operation counts for one propagation step of one method."""

    method: str
    add: int
    sub: int
    mul: int
    div: int
    sqrt: int
    trig: int

    @property
    def total(self):
        return self.add + self.sub + self.mul + self.div + self.sqrt + self.trig

    @property
    def total_no_transcendental(self):
        return self.add + self.sub + self.mul + self.div

    def csv_row(self):
        return (
            f"{self.method},{self.add},{self.sub},{self.mul},{self.div},"
            f"{self.sqrt},{self.trig},{self.total},{self.total_no_transcendental}"
        )

    @classmethod
    def from_tally(cls, method, tally):
        return cls(
            method=method,
            add=tally.add,
            sub=tally.sub,
            mul=tally.mul,
            div=tally.div,
            sqrt=tally.sqrt,
            trig=tally.trig,
        )


# Fixed representative state for counting; counts are value-independent,
# so any generic (no special zeros) state prices the same.
_DEFAULT_ROT = _kernels.exp_so3_kernel((0.3, -0.2, 0.4))
_DEFAULT_VEL = (0.4, -1.1, 0.25)
_DEFAULT_POS = (2.0, -3.0, 1.5)


def _state_tuples(state):
    if state is None:
        return _DEFAULT_ROT, _DEFAULT_VEL, _DEFAULT_POS
    r = state.rot
    return (
        ((r[0, 0], r[0, 1], r[0, 2]),
         (r[1, 0], r[1, 1], r[1, 2]),
         (r[2, 0], r[2, 1], r[2, 2])),
        (state.vel[0], state.vel[1], state.vel[2]),
        (state.pos[0], state.pos[1], state.pos[2]),
    )


def counted_closed_step(rot, vel, pos, gyro, accel, grav, h, tally):
    """Run the closed-form step on wrapped scalars; returns counted tuples."""
    wrap = lambda x: CountedScalar(float(x), tally)
    wrap3 = lambda v: (wrap(v[0]), wrap(v[1]), wrap(v[2]))
    return _kernels.closed_step(
        (wrap3(rot[0]), wrap3(rot[1]), wrap3(rot[2])),
        wrap3(vel),
        wrap3(pos),
        wrap3(gyro),
        wrap3(accel),
        wrap3(grav),
        wrap(h),
        general=True,
    )


def counted_rk4_group_step(rot, vel, pos, gyro, accel, grav, h, tally):
    """Run dense-matrix RK4 on wrapped scalars; returns the counted 5x5.

    The state matrix is fully generic: all 25 entries are counted,
    including the constant bottom rows, because a dense integrator does
    not know they are structural.  Generator entries derived from inputs
    are counted; their structural zeros and clock constants stay plain.
    """
    wrap = lambda x: CountedScalar(float(x), tally)
    x = (
        (wrap(rot[0][0]), wrap(rot[0][1]), wrap(rot[0][2]), wrap(vel[0]), wrap(pos[0])),
        (wrap(rot[1][0]), wrap(rot[1][1]), wrap(rot[1][2]), wrap(vel[1]), wrap(pos[1])),
        (wrap(rot[2][0]), wrap(rot[2][1]), wrap(rot[2][2]), wrap(vel[2]), wrap(pos[2])),
        (wrap(0.0), wrap(0.0), wrap(0.0), wrap(1.0), wrap(0.0)),
        (wrap(0.0), wrap(0.0), wrap(0.0), wrap(0.0), wrap(1.0)),
    )
    g0, g1, g2 = wrap(grav[0]), wrap(grav[1]), wrap(grav[2])
    gen_left = (
        (0.0, 0.0, 0.0, g0, 0.0),
        (0.0, 0.0, 0.0, g1, 0.0),
        (0.0, 0.0, 0.0, g2, 0.0),
        (0.0, 0.0, 0.0, 0.0, -1.0),
        (0.0, 0.0, 0.0, 0.0, 0.0),
    )
    w0, w1, w2 = wrap(gyro[0]), wrap(gyro[1]), wrap(gyro[2])
    a0, a1, a2 = wrap(accel[0]), wrap(accel[1]), wrap(accel[2])
    gen_right = (
        (0.0, -w2, w1, a0, 0.0),
        (w2, 0.0, -w0, a1, 0.0),
        (-w1, w0, 0.0, a2, 0.0),
        (0.0, 0.0, 0.0, 0.0, 1.0),
        (0.0, 0.0, 0.0, 0.0, 0.0),
    )
    return _kernels.rk4_group_step(x, gen_left, gen_right, wrap(h))


def count_step(method, u, grav, h, state=None):
    """Price one propagation step of ``method`` in scalar flops.

    ``method`` is "closed" or "rk4".  Counts are deterministic and
    independent of the numeric values; ``state`` only matters for tests
    that compare the instrumented values against a plain run.
    """
    h = float(h)
    if not (np.isfinite(h) and h > 0.0):
        raise ValueError(f"step size must be finite and > 0, got {h}")
    rot, vel, pos = _state_tuples(state)
    gyro = (float(u.gyro[0]), float(u.gyro[1]), float(u.gyro[2]))
    accel = (float(u.accel[0]), float(u.accel[1]), float(u.accel[2]))
    grav_vec = (float(grav.accel[0]), float(grav.accel[1]), float(grav.accel[2]))
    tally = Tally()
    if method == "closed":
        if gyro[0] == 0.0 and gyro[1] == 0.0 and gyro[2] == 0.0:
            raise ValueError(
                "cannot count the closed step at zero angular rate: counting "
                "pins the general coefficient branch, which divides by the "
                "squared angle"
            )
        counted_closed_step(rot, vel, pos, gyro, accel, grav_vec, h, tally)
    elif method == "rk4":
        counted_rk4_group_step(rot, vel, pos, gyro, accel, grav_vec, h, tally)
    else:
        raise ValueError(f"unknown method {method!r}; expected 'closed' or 'rk4'")
    return OpCountReport.from_tally(method, tally)


def report_table(reports):
    """Render reports as an aligned text table and a CSV string.

    When both a "closed" and an "rk4" report are present, a per-category
    ratio row (rk4 over closed) is appended to both renderings and the
    table also carries the reference comparison point.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("need at least one report")
    csv_lines = [",".join(CSV_COLUMNS)]
    rows = []
    for rep in reports:
        csv_lines.append(rep.csv_row())
        rows.append(
            [
                rep.method,
                str(rep.add),
                str(rep.sub),
                str(rep.mul),
                str(rep.div),
                str(rep.sqrt),
                str(rep.trig),
                str(rep.total),
                str(rep.total_no_transcendental),
            ]
        )
    by_method = {rep.method: rep for rep in reports}
    ratio = None
    if "closed" in by_method and "rk4" in by_method:
        closed = by_method["closed"]
        rk4 = by_method["rk4"]
        ratio = rk4.total / closed.total
        cells = []
        for name in CSV_COLUMNS[1:]:
            denom = getattr(closed, name)
            if denom:
                cells.append(f"{getattr(rk4, name) / denom:.17g}")
            else:
                cells.append("")
        csv_lines.append("rk4_over_closed," + ",".join(cells))
        rows.append(["rk4_over_closed"] + cells)
    widths = [
        max(len(CSV_COLUMNS[i]), max(len(row[i]) for row in rows))
        for i in range(len(CSV_COLUMNS))
    ]
    header = "  ".join(name.ljust(widths[i]) for i, name in enumerate(CSV_COLUMNS))
    lines = [header]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    if ratio is not None:
        lines.append(
            f"rk4/closed total ratio: {ratio:.2f} "
            f"(reference comparison point: {REFERENCE_RATIO:g})"
        )
    return "\n".join(lines) + "\n", "\n".join(csv_lines) + "\n"
