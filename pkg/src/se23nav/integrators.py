"""Generic fixed-step integrators for the same kinematics.

These are the comparison baselines: classical fourth-order Runge-Kutta
and forward Euler, both operating on the raw flattened 15-dimensional
state (rotation row-major, then velocity, then position) with no
structure preservation.  The rotation block therefore drifts off the
group; the drift is a measured quantity, not a defect to be patched,
so re-orthonormalization is available only behind an explicit flag and
never participates in benchmarks.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .propagator import NavState, Trajectory, propagate
from .so3 import log_so3

__all__ = [
    "kinematics_rhs",
    "rk4_step",
    "euler_step",
    "integrate",
    "position_error",
    "attitude_error",
]


def _state_tuples(x):
    r = x.rot
    return (
        ((r[0, 0], r[0, 1], r[0, 2]),
         (r[1, 0], r[1, 1], r[1, 2]),
         (r[2, 0], r[2, 1], r[2, 2])),
        (x.vel[0], x.vel[1], x.vel[2]),
        (x.pos[0], x.pos[1], x.pos[2]),
    )


def _input_tuples(u, grav):
    return (
        (u.gyro[0], u.gyro[1], u.gyro[2]),
        (u.accel[0], u.accel[1], u.accel[2]),
        (grav.accel[0], grav.accel[1], grav.accel[2]),
    )


def kinematics_rhs(x, u, grav):
    """Time derivative of the flattened state under constant inputs.

    Returns the 15-vector (rotation row-major, velocity, position)
    derivative: rot @ hat(gyro), rot @ accel + gravity, vel.
    """
    rot, vel, pos = _state_tuples(x)
    gyro, accel, grav_vec = _input_tuples(u, grav)
    rot_dot, vel_dot, pos_dot = _kernels.kinematics_rhs_kernel(
        rot, vel, gyro, accel, grav_vec
    )
    return np.array(rot_dot[0] + rot_dot[1] + rot_dot[2] + vel_dot + pos_dot)


def _gram_schmidt(rot):
    q1 = rot[:, 0] / np.linalg.norm(rot[:, 0])
    q2 = rot[:, 1] - np.dot(q1, rot[:, 1]) * q1
    q2 = q2 / np.linalg.norm(q2)
    q3 = np.cross(q1, q2)
    return np.column_stack([q1, q2, q3])


def rk4_step(x, u, grav, h, project=False):
    """Classical Runge-Kutta step on the flattened state.

    The returned attitude is generally not orthonormal; ``project=True``
    applies a Gram-Schmidt repair afterwards for drift studies only and
    is excluded from the operation-count benchmark.
    """
    h = float(h)
    if not h > 0.0:
        raise ValueError(f"step size must be > 0, got {h}")
    rot, vel, pos = _state_tuples(x)
    gyro, accel, grav_vec = _input_tuples(u, grav)
    rot_n, vel_n, pos_n = _kernels.rk4_flat_step(
        rot, vel, pos, gyro, accel, grav_vec, h
    )
    rot_out = np.array(rot_n)
    if project:
        rot_out = _gram_schmidt(rot_out)
    return NavState(rot_out, np.array(vel_n), np.array(pos_n))


def euler_step(x, u, grav, h):
    """Forward Euler step on the flattened state; order-1 control case."""
    h = float(h)
    if not h > 0.0:
        raise ValueError(f"step size must be > 0, got {h}")
    rot, vel, pos = _state_tuples(x)
    gyro, accel, grav_vec = _input_tuples(u, grav)
    rot_n, vel_n, pos_n = _kernels.euler_flat_step(
        rot, vel, pos, gyro, accel, grav_vec, h
    )
    return NavState(np.array(rot_n), np.array(vel_n), np.array(pos_n))


_STEPPERS = {
    "closed": propagate,
    "rk4": rk4_step,
    "euler": euler_step,
}


def integrate(x0, samples, grav, method, substeps=1):
    """Drive any stepper over ``(input, dt)`` samples.

    Each sample interval is subdivided into ``substeps`` equal pieces;
    the trajectory records sample boundaries only.  For ``closed`` the
    subdivision changes nothing beyond round-off, which is the point of
    the comparison.
    """
    if method not in _STEPPERS:
        raise ValueError(
            f"unknown method {method!r}; expected one of {sorted(_STEPPERS)}"
        )
    substeps = int(substeps)
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")
    stepper = _STEPPERS[method]
    times = [0.0]
    states = [x0]
    state = x0
    for index, (u, dt) in enumerate(samples):
        dt = float(dt)
        if not dt > 0.0:
            raise ValueError(f"sample {index}: dt must be > 0, got {dt}")
        h = dt / substeps
        for _ in range(substeps):
            state = stepper(state, u, grav, h)
        times.append(times[-1] + dt)
        states.append(state)
    return Trajectory(np.array(times), tuple(states))


def position_error(state, reference):
    """Euclidean distance between the two position vectors, meters."""
    return float(np.linalg.norm(state.pos - reference.pos))


def attitude_error(state, reference):
    """Geodesic rotation distance in radians.

    Tolerates the orthogonality drift of generic integrators (defect up
    to 1e-2) since quantifying that drift is what the metric is for.
    """
    return float(np.linalg.norm(log_so3(reference.rot.T @ state.rot, tol=1e-2)))
