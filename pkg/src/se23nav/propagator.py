"""Navigation state on SE2(3) and its exact zero-order-hold propagation.

The state packs attitude, world velocity, and world position into one
5x5 group element.  Under constant body rates and constant world gravity
the continuous kinematics factor into a world-side exponential applied on
the left and a body-side exponential applied on the right, so one step of
any duration is exact; sub-dividing an interval changes nothing but
round-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .mixedexp import MixedGenerator
from .so3 import hat, orthogonality_defect

__all__ = [
    "STANDARD_GRAVITY",
    "NavState",
    "ImuInput",
    "GravityModel",
    "TangentVector",
    "Trajectory",
    "wedge_se23",
    "build_generators",
    "propagate",
    "propagate_sequence",
]

STANDARD_GRAVITY = 9.80665

_CLOCK = np.array([[0.0, 1.0], [0.0, 0.0]])


def _vec3(value, name):
    out = np.array(value, dtype=float)
    if out.shape != (3,):
        raise ValueError(f"{name} must have shape (3,), got {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"non-finite entries in {name}")
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class NavState:
    """Attitude (body to world), world velocity, world position.

    The constructor checks shape and finiteness only.  Orthonormality of
    ``rot`` is a property of how the state was produced: the closed-form
    propagator preserves it to round-off and checks it on input, while
    the generic integrators are allowed to drift so the drift can be
    measured.  Arrays are copied and frozen; instances are values.
    """

    rot: np.ndarray
    vel: np.ndarray
    pos: np.ndarray

    def __post_init__(self):
        rot = np.array(self.rot, dtype=float)
        if rot.shape != (3, 3):
            raise ValueError(f"rot must have shape (3, 3), got {rot.shape}")
        if not np.all(np.isfinite(rot)):
            raise ValueError("non-finite entries in rot")
        rot.flags.writeable = False
        object.__setattr__(self, "rot", rot)
        object.__setattr__(self, "vel", _vec3(self.vel, "vel"))
        object.__setattr__(self, "pos", _vec3(self.pos, "pos"))

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3), np.zeros(3))

    @classmethod
    def from_matrix(cls, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (5, 5):
            raise ValueError(f"expected shape (5, 5), got {x.shape}")
        return cls(x[:3, :3], x[:3, 3], x[:3, 4])

    def as_matrix(self):
        out = np.eye(5)
        out[:3, :3] = self.rot
        out[:3, 3] = self.vel
        out[:3, 4] = self.pos
        return out


@dataclass(frozen=True, eq=False)
class ImuInput:
    """Body-frame angular rate (rad/s) and specific-force reading (m/s^2)."""

    gyro: np.ndarray
    accel: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gyro", _vec3(self.gyro, "gyro"))
        object.__setattr__(self, "accel", _vec3(self.accel, "accel"))

    @classmethod
    def zero(cls):
        return cls(np.zeros(3), np.zeros(3))


@dataclass(frozen=True, eq=False)
class GravityModel:
    """World-frame gravitational acceleration; default is z-up free air."""

    accel: np.ndarray = field(
        default_factory=lambda: np.array([0.0, 0.0, -STANDARD_GRAVITY])
    )

    def __post_init__(self):
        object.__setattr__(self, "accel", _vec3(self.accel, "gravity accel"))


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Algebra coordinates: velocity column, position column, rotation axis."""

    vel_part: np.ndarray
    pos_part: np.ndarray
    rot_part: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vel_part", _vec3(self.vel_part, "vel_part"))
        object.__setattr__(self, "pos_part", _vec3(self.pos_part, "pos_part"))
        object.__setattr__(self, "rot_part", _vec3(self.rot_part, "rot_part"))


def wedge_se23(x):
    """5x5 algebra element: skew of the rotation part plus the two columns."""
    out = np.zeros((5, 5))
    out[:3, :3] = hat(x.rot_part)
    out[:3, 3] = x.vel_part
    out[:3, 4] = x.pos_part
    return out


def build_generators(u, grav):
    """The (world, body) generator pair for constant inputs.

    The world generator holds gravity in its velocity column and the
    negated clock coupling; the body generator holds the gyro skew, the
    accelerometer column, and the positive coupling.  Their exponentials
    multiply the state from the left and right respectively.
    """
    zeros = np.zeros((3, 3))
    accel_m = np.zeros((3, 2))
    accel_m[:, 0] = grav.accel
    world = MixedGenerator(zeros, accel_m, -_CLOCK)
    accel_n = np.zeros((3, 2))
    accel_n[:, 0] = u.accel
    body = MixedGenerator(hat(u.gyro), accel_n, _CLOCK)
    return world, body


_ORTHONORMALITY_TOL = 1e-9


def propagate(x0, u, grav, t):
    """Exact flow of the strapdown kinematics over one interval of length t.

    ``u`` and ``grav`` are held constant over the interval.  Any finite t
    is accepted, negative included; t == 0.0 returns ``x0`` itself.  The
    input attitude must be orthonormal within 1e-9; the output attitude
    then stays orthonormal to ~1e-13 per step because only rotations are
    multiplied.
    """
    if isinstance(t, float) and t == 0.0:
        return x0
    t = float(t)
    if not np.isfinite(t):
        raise ValueError(f"step duration must be finite, got {t}")
    defect = orthogonality_defect(x0.rot)
    if not defect <= _ORTHONORMALITY_TOL:
        raise ValueError(
            f"input attitude defect {defect:.3e} exceeds {_ORTHONORMALITY_TOL:g}"
        )
    if t == 0.0:
        return x0
    r = x0.rot
    rot, vel, pos = _kernels.closed_step(
        ((r[0, 0], r[0, 1], r[0, 2]),
         (r[1, 0], r[1, 1], r[1, 2]),
         (r[2, 0], r[2, 1], r[2, 2])),
        (x0.vel[0], x0.vel[1], x0.vel[2]),
        (x0.pos[0], x0.pos[1], x0.pos[2]),
        (u.gyro[0], u.gyro[1], u.gyro[2]),
        (u.accel[0], u.accel[1], u.accel[2]),
        (grav.accel[0], grav.accel[1], grav.accel[2]),
        t,
    )
    return NavState(np.array(rot), np.array(vel), np.array(pos))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States at sample boundaries with their cumulative timestamps."""

    times: np.ndarray
    states: tuple

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        times.flags.writeable = False
        states = tuple(self.states)
        if times.shape != (len(states),):
            raise ValueError(
                f"{len(states)} states but {times.shape} timestamps"
            )
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return len(self.states)

    @property
    def final(self):
        return self.states[-1]


def propagate_sequence(x0, samples, grav):
    """Left fold of :func:`propagate` over ``(input, dt)`` samples.

    Emits the initial state plus one state per sample; an empty sample
    list yields the single-element trajectory.
    """
    times = [0.0]
    states = [x0]
    state = x0
    for index, (u, dt) in enumerate(samples):
        dt = float(dt)
        if not dt > 0.0:
            raise ValueError(f"sample {index}: dt must be > 0, got {dt}")
        state = propagate(state, u, grav, dt)
        times.append(times[-1] + dt)
        states.append(state)
    return Trajectory(np.array(times), tuple(states))
