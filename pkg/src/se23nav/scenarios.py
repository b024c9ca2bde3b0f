"""Test scenarios: analytic trajectories, IMU sample synthesis, config I/O.

A scenario bundles an initial state, a gravity model, an input model, and
a sampling grid.  Input models with constant body-frame measurements
(coordinated circle, free fall, explicit constants) admit closed-form
ground truth at any time, which is what benchmark error metrics compare
against; recorded IMU logs come in through CSV.

Scenario files are flat ``key = value`` text (see :func:`load_scenario`);
the CSV format is ``t,wx,wy,wz,ax,ay,az`` with strictly increasing
timestamps, each row holding over the interval to the next row.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .propagator import (
    STANDARD_GRAVITY,
    GravityModel,
    ImuInput,
    NavState,
    propagate,
)

__all__ = [
    "ConstantInput",
    "CircleInput",
    "FreefallInput",
    "CsvInput",
    "Scenario",
    "circle_scenario",
    "constant_input",
    "analytic_state",
    "imu_samples",
    "parse_imu_csv",
    "quat_to_matrix",
    "load_scenario",
]

IMU_CSV_HEADER = "t,wx,wy,wz,ax,ay,az"


@dataclass(frozen=True, eq=False)
class ConstantInput:
    """Fixed body-frame measurements for the whole duration."""

    gyro: np.ndarray
    accel: np.ndarray

    def __post_init__(self):
        u = ImuInput(self.gyro, self.accel)
        object.__setattr__(self, "gyro", u.gyro)
        object.__setattr__(self, "accel", u.accel)


@dataclass(frozen=True)
class CircleInput:
    """Coordinated turn in the world x-y plane at constant speed.

    Body x starts aligned with the velocity; the turn rate is
    speed/radius about world z, so the body measurements are constant
    and the closed form is exact per sample.
    """

    speed: float
    radius: float


@dataclass(frozen=True)
class FreefallInput:
    """Zero gyro and zero accelerometer reading: gravity only."""


@dataclass(frozen=True)
class CsvInput:
    """Recorded measurements from a CSV log."""

    path: str


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    initial: NavState
    gravity: GravityModel
    inputs: object
    duration: float
    dt: float

    def __post_init__(self):
        object.__setattr__(self, "duration", float(self.duration))
        object.__setattr__(self, "dt", float(self.dt))
        if not (np.isfinite(self.duration) and self.duration > 0.0):
            raise ValueError(f"duration must be > 0, got {self.duration}")
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if isinstance(self.inputs, CircleInput):
            if not (self.inputs.speed > 0.0 and self.inputs.radius > 0.0):
                raise ValueError("circle requires speed > 0 and radius > 0")
            g = self.gravity.accel
            if abs(g[0]) > 1e-12 or abs(g[1]) > 1e-12:
                raise ValueError(
                    "circle scenarios require gravity along world z; got "
                    f"{g.tolist()}"
                )
            expected_vel = np.array([self.inputs.speed, 0.0, 0.0])
            if not np.allclose(self.initial.vel, expected_vel, atol=1e-9):
                raise ValueError(
                    f"circle initial velocity must be {expected_vel.tolist()} "
                    f"(speed along world x), got {self.initial.vel.tolist()}"
                )


def circle_scenario(
    speed=1.0,
    radius=1.0,
    dt=0.1,
    duration=None,
    gravity=None,
    initial_rot=None,
    initial_pos=(0.0, 0.0, 0.0),
    name="circle",
):
    """Convenience constructor; default duration is one full loop."""
    if not (speed > 0.0 and radius > 0.0):
        raise ValueError("circle requires speed > 0 and radius > 0")
    if duration is None:
        duration = 2.0 * math.pi * radius / speed
    if gravity is None:
        gravity = GravityModel()
    rot = np.eye(3) if initial_rot is None else initial_rot
    initial = NavState(rot, np.array([speed, 0.0, 0.0]), np.asarray(initial_pos, float))
    return Scenario(
        name=name,
        initial=initial,
        gravity=gravity,
        inputs=CircleInput(speed=float(speed), radius=float(radius)),
        duration=duration,
        dt=dt,
    )


def constant_input(scenario):
    """The single body-frame input equivalent to the scenario's model.

    Defined for every model except CSV logs, whose inputs vary by row.
    """
    model = scenario.inputs
    if isinstance(model, ConstantInput):
        return ImuInput(model.gyro, model.accel)
    if isinstance(model, FreefallInput):
        return ImuInput.zero()
    if isinstance(model, CircleInput):
        rate = model.speed / model.radius
        r0t = scenario.initial.rot.T
        gyro = r0t @ np.array([0.0, 0.0, rate])
        centripetal = model.speed * model.speed / model.radius
        accel = r0t @ np.array([0.0, centripetal, -scenario.gravity.accel[2]])
        return ImuInput(gyro, accel)
    raise ValueError(f"{type(model).__name__} has no single constant input")


def analytic_state(scenario, t):
    """Ground-truth state at time ``t`` for scenarios with a closed form."""
    t = float(t)
    if not 0.0 <= t <= scenario.duration * (1.0 + 1e-12):
        raise ValueError(f"t={t} outside [0, {scenario.duration}]")
    model = scenario.inputs
    x0 = scenario.initial
    if isinstance(model, CircleInput):
        rate = model.speed / model.radius
        ang = rate * t
        c, s = math.cos(ang), math.sin(ang)
        yaw = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        vel = model.speed * np.array([c, s, 0.0])
        pos = x0.pos + model.radius * np.array([s, 1.0 - c, 0.0])
        return NavState(yaw @ x0.rot, vel, pos)
    if isinstance(model, FreefallInput):
        g = scenario.gravity.accel
        return NavState(
            x0.rot,
            x0.vel + g * t,
            x0.pos + x0.vel * t + 0.5 * g * t * t,
        )
    if isinstance(model, ConstantInput):
        # constant inputs make the one-step flow the exact solution
        if t == 0.0:
            return x0
        return propagate(x0, ImuInput(model.gyro, model.accel), scenario.gravity, t)
    raise ValueError("csv scenarios have no analytic state")


def _sampling_grid(duration, dt):
    nfull = int(math.floor(duration / dt + 1e-9))
    remainder = duration - nfull * dt
    if remainder > 1e-9 * max(1.0, duration):
        return nfull, remainder
    return nfull, 0.0


def imu_samples(scenario):
    """Materialize the scenario as ``(input, dt)`` samples covering duration.

    A trailing short sample is emitted when dt does not divide the
    duration; CSV scenarios pass through their parsed rows instead.
    """
    model = scenario.inputs
    if isinstance(model, CsvInput):
        return parse_imu_csv(model.path)
    u = constant_input(scenario)
    nfull, remainder = _sampling_grid(scenario.duration, scenario.dt)
    samples = [(u, scenario.dt)] * nfull
    if remainder > 0.0:
        samples.append((u, remainder))
    return samples


def parse_imu_csv(path):
    """Parse an IMU log; each row's inputs hold until the next timestamp."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    rows = []
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line.replace(" ", "") != IMU_CSV_HEADER:
                raise ValueError(
                    f"{path}:{lineno}: expected header '{IMU_CSV_HEADER}', got '{line}'"
                )
            header_seen = True
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 7:
            raise ValueError(
                f"{path}:{lineno}: expected 7 fields, got {len(fields)}"
            )
        try:
            values = [float(f) for f in fields]
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: non-numeric field ({exc})") from None
        rows.append((lineno, values))
    if not header_seen:
        raise ValueError(f"{path}: missing header '{IMU_CSV_HEADER}'")
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least 2 data rows, got {len(rows)}")
    samples = []
    for (lineno, row), (_, nxt) in zip(rows, rows[1:]):
        dt = nxt[0] - row[0]
        if not dt > 0.0:
            raise ValueError(
                f"{path}:{lineno}: timestamps must be strictly increasing"
            )
        samples.append((ImuInput(np.array(row[1:4]), np.array(row[4:7])), dt))
    return samples


def quat_to_matrix(q):
    """Unit-quaternion (w, x, y, z) to rotation matrix; normalizes input."""
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise ValueError(f"quaternion must have shape (4,), got {q.shape}")
    norm = float(np.linalg.norm(q))
    if not norm > 1e-12:
        raise ValueError("quaternion norm too small to normalize")
    w, x, y, z = q / norm
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


_COMMON_KEYS = {
    "name",
    "duration",
    "dt",
    "gravity",
    "initial_quat",
    "initial_vel",
    "initial_pos",
    "input",
}
_MODEL_KEYS = {
    "circle": {"speed", "radius"},
    "constant": {"gyro", "accel"},
    "freefall": set(),
    "csv": {"imu_csv"},
}


def _parse_floats(text, key, count):
    parts = text.split()
    if len(parts) != count:
        raise ValueError(f"key '{key}': expected {count} numbers, got {len(parts)}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise ValueError(f"key '{key}': non-numeric value '{text}'") from None


def load_scenario(path):
    """Read a flat ``key = value`` scenario file.

    Required keys: name, duration, dt, input (circle | constant |
    freefall | csv) plus the model's own keys (speed/radius, gyro/accel,
    or imu_csv; paths are relative to the file).  Optional keys: gravity
    (default 0 0 -9.80665), initial_quat (w x y z, default identity),
    initial_vel, initial_pos (default zero; circle defaults initial_vel
    to speed along world x).  '#' starts a comment.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    entries = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got '{line}'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in entries:
            raise ValueError(f"{path}:{lineno}: duplicate key '{key}'")
        if not value:
            raise ValueError(f"{path}:{lineno}: empty value for '{key}'")
        entries[key] = value
    for required in ("name", "duration", "dt", "input"):
        if required not in entries:
            raise ValueError(f"{path}: missing required key '{required}'")
    kind = entries["input"]
    if kind not in _MODEL_KEYS:
        raise ValueError(
            f"{path}: unknown input model '{kind}'; expected one of "
            f"{sorted(_MODEL_KEYS)}"
        )
    allowed = _COMMON_KEYS | _MODEL_KEYS[kind]
    unknown = sorted(set(entries) - allowed)
    if unknown:
        raise ValueError(f"{path}: unknown keys for input '{kind}': {unknown}")
    missing = sorted(_MODEL_KEYS[kind] - set(entries))
    if missing:
        raise ValueError(f"{path}: input '{kind}' requires keys {missing}")

    def number(key):
        try:
            return float(entries[key])
        except ValueError:
            raise ValueError(
                f"{path}: key '{key}': non-numeric value '{entries[key]}'"
            ) from None

    gravity = GravityModel(
        _parse_floats(entries["gravity"], "gravity", 3)
        if "gravity" in entries
        else np.array([0.0, 0.0, -STANDARD_GRAVITY])
    )
    rot = (
        quat_to_matrix(_parse_floats(entries["initial_quat"], "initial_quat", 4))
        if "initial_quat" in entries
        else np.eye(3)
    )
    pos = (
        _parse_floats(entries["initial_pos"], "initial_pos", 3)
        if "initial_pos" in entries
        else np.zeros(3)
    )
    if kind == "circle":
        model = CircleInput(speed=number("speed"), radius=number("radius"))
        default_vel = np.array([model.speed, 0.0, 0.0])
    else:
        default_vel = np.zeros(3)
    vel = (
        _parse_floats(entries["initial_vel"], "initial_vel", 3)
        if "initial_vel" in entries
        else default_vel
    )
    if kind == "constant":
        model = ConstantInput(
            _parse_floats(entries["gyro"], "gyro", 3),
            _parse_floats(entries["accel"], "accel", 3),
        )
    elif kind == "freefall":
        model = FreefallInput()
    elif kind == "csv":
        csv_path = entries["imu_csv"]
        if not os.path.isabs(csv_path):
            csv_path = os.path.join(os.path.dirname(os.path.abspath(path)), csv_path)
        model = CsvInput(path=csv_path)
    return Scenario(
        name=entries["name"],
        initial=NavState(rot, vel, pos),
        gravity=gravity,
        inputs=model,
        duration=number("duration"),
        dt=number("dt"),
    )
