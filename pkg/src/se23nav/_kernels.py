"""Scalar-generic straight-line kernels for state propagation.

Everything in this module is written as explicit scalar arithmetic over
nested tuples so that one code path serves two purposes: fast ``float``
evaluation for the public API, and instrumented evaluation with counting
scalars for the floating-point operation reports.  Keep these kernels free
of numpy, free of direct ``math.*`` calls on operands (use the dispatch
helpers), and free of value-dependent shortcuts: the operation sequence is
part of the contract, and an instrumented run must execute bit-for-bit the
same arithmetic as a plain run.

The only branch is the small-angle switch for the sin/cos coefficient
family, which instrumented counting runs pin to the general branch.
"""

from __future__ import annotations

import math

# Crossover between the series and closed-form evaluation of the angle
# coefficients.  The closed forms of (theta - sin theta)/theta^3 and
# (theta^2/2 - 1 + cos theta)/theta^4 cancel catastrophically for small
# angles: their absolute error grows like eps/theta^2 and eps/theta^4, so
# they only reach ~1e-15 accuracy for theta above roughly 0.4.  Below the
# crossover an 8-term alternating series is exact to ~1e-16.
SMALL_ANGLE = 0.5
_SMALL_ANGLE_SQ = SMALL_ANGLE * SMALL_ANGLE

_INV_FACTORIAL = tuple(1.0 / math.factorial(n) for n in range(20))


def scalar_sqrt(x):
    """Square root that preserves instrumented scalar types."""
    return math.sqrt(x) if isinstance(x, float) else x.sqrt()


def scalar_sin(x):
    return math.sin(x) if isinstance(x, float) else x.sin()


def scalar_cos(x):
    return math.cos(x) if isinstance(x, float) else x.cos()


def _alternating_series(x, first):
    # sum_k (-1)^k x^k / (first + 2k)! for k = 0..7, Horner in x.
    acc = _INV_FACTORIAL[first + 14]
    for step in (12, 10, 8, 6, 4, 2, 0):
        acc = _INV_FACTORIAL[first + step] - x * acc
    return acc


def exp_coeffs(theta_sq, general=False):
    """Angle coefficients shared by the rotation and translation factors.

    Returns the tuple ``(sin t/t, (1-cos t)/t^2, (t-sin t)/t^3,
    (t^2/2-1+cos t)/t^4)`` for ``theta_sq`` = t^2.  ``general=True`` pins
    the closed-form branch regardless of angle; it divides by zero at t=0
    and exists for deterministic operation counting.
    """
    if general or theta_sq > _SMALL_ANGLE_SQ:
        theta = scalar_sqrt(theta_sq)
        s = scalar_sin(theta)
        c = scalar_cos(theta)
        k0 = s / theta
        k1 = (1.0 - c) / theta_sq
        k2 = (theta - s) / (theta_sq * theta)
        k3 = (0.5 * theta_sq - 1.0 + c) / (theta_sq * theta_sq)
        return k0, k1, k2, k3
    return (
        _alternating_series(theta_sq, 1),
        _alternating_series(theta_sq, 2),
        _alternating_series(theta_sq, 3),
        _alternating_series(theta_sq, 4),
    )


def _rotation_from(w, xx, yy, zz, k0, k1):
    # I + k0*hat(w) + k1*hat(w)^2 with hat(w)^2 = w w^T - |w|^2 I.
    xy = w[0] * w[1]
    xz = w[0] * w[2]
    yz = w[1] * w[2]
    sx = k0 * w[0]
    sy = k0 * w[1]
    sz = k0 * w[2]
    cxy = k1 * xy
    cxz = k1 * xz
    cyz = k1 * yz
    return (
        (1.0 - k1 * (yy + zz), cxy - sz, cxz + sy),
        (cxy + sz, 1.0 - k1 * (xx + zz), cyz - sx),
        (cxz - sy, cyz + sx, 1.0 - k1 * (xx + yy)),
    )


def exp_so3_kernel(w, general=False):
    """Rodrigues rotation exp(hat(w)) as nested 3-tuples."""
    xx = w[0] * w[0]
    yy = w[1] * w[1]
    zz = w[2] * w[2]
    theta_sq = xx + yy + zz
    k0, k1, _, _ = exp_coeffs(theta_sq, general)
    return _rotation_from(w, xx, yy, zz, k0, k1)


def mat3_mul(a, b):
    """3x3 by 3x3 product with a fixed left-to-right summation order."""
    return tuple(
        (
            a[i][0] * b[0][0] + a[i][1] * b[1][0] + a[i][2] * b[2][0],
            a[i][0] * b[0][1] + a[i][1] * b[1][1] + a[i][2] * b[2][1],
            a[i][0] * b[0][2] + a[i][1] * b[1][2] + a[i][2] * b[2][2],
        )
        for i in range(3)
    )


def mat3_vec(a, v):
    return (
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    )


def closed_step(rot, vel, pos, gyro, accel, grav, t, general=False):
    """One exact propagation step over a zero-order-hold interval.

    Implements the factored flow of the mixed-invariant kinematics: the
    gravity factor (identity rotation, world frame) applied on the left
    and the body-input factor on the right, folded into straight-line
    arithmetic.  All arguments are nested tuples / scalars; returns
    ``(rot, vel, pos)`` tuples.
    """
    wt0 = gyro[0] * t
    wt1 = gyro[1] * t
    wt2 = gyro[2] * t
    at = (accel[0] * t, accel[1] * t, accel[2] * t)
    xx = wt0 * wt0
    yy = wt1 * wt1
    zz = wt2 * wt2
    theta_sq = xx + yy + zz
    k0, k1, k2, k3 = exp_coeffs(theta_sq, general)
    rot_step = _rotation_from((wt0, wt1, wt2), xx, yy, zz, k0, k1)

    # Body-factor translation columns (velocity-like, position-like).
    u1 = (
        wt1 * at[2] - wt2 * at[1],
        wt2 * at[0] - wt0 * at[2],
        wt0 * at[1] - wt1 * at[0],
    )
    u2 = (
        wt1 * u1[2] - wt2 * u1[1],
        wt2 * u1[0] - wt0 * u1[2],
        wt0 * u1[1] - wt1 * u1[0],
    )
    pn1 = (
        at[0] + k1 * u1[0] + k2 * u2[0],
        at[1] + k1 * u1[1] + k2 * u2[1],
        at[2] + k1 * u1[2] + k2 * u2[2],
    )
    half_t = 0.5 * t
    k2t = k2 * t
    k3t = k3 * t
    pn2 = (
        half_t * at[0] + k2t * u1[0] + k3t * u2[0],
        half_t * at[1] + k2t * u1[1] + k3t * u2[1],
        half_t * at[2] + k2t * u1[2] + k3t * u2[2],
    )

    # Gravity-factor translation columns: [g*t, -g*t^2/2].
    gt = (grav[0] * t, grav[1] * t, grav[2] * t)
    neg_half_t = -half_t
    gq = (neg_half_t * gt[0], neg_half_t * gt[1], neg_half_t * gt[2])

    # Compose the two factors around the state; the left factor carries an
    # identity rotation, and the clock blocks cancel exactly.
    rot_new = mat3_mul(rot, rot_step)
    rv = mat3_vec(rot, pn1)
    rp = mat3_vec(rot, pn2)
    uv = (vel[0] + gt[0], vel[1] + gt[1], vel[2] + gt[2])
    vel_new = (rv[0] + uv[0], rv[1] + uv[1], rv[2] + uv[2])
    pos_new = (
        rp[0] + uv[0] * t + (pos[0] + gq[0]),
        rp[1] + uv[1] * t + (pos[1] + gq[1]),
        rp[2] + uv[2] * t + (pos[2] + gq[2]),
    )
    return rot_new, vel_new, pos_new


def kinematics_rhs_kernel(rot, vel, gyro, accel, grav):
    """Continuous-time kinematics: Rdot = R hat(w), vdot = R a + g, pdot = v."""
    omega = (
        (0.0, -gyro[2], gyro[1]),
        (gyro[2], 0.0, -gyro[0]),
        (-gyro[1], gyro[0], 0.0),
    )
    rot_dot = mat3_mul(rot, omega)
    ra = mat3_vec(rot, accel)
    vel_dot = (ra[0] + grav[0], ra[1] + grav[1], ra[2] + grav[2])
    return rot_dot, vel_dot, vel


def _rhs_flat(y, gyro, accel, grav):
    rot = (y[0:3], y[3:6], y[6:9])
    rot_dot, vel_dot, pos_dot = kinematics_rhs_kernel(rot, y[9:12], gyro, accel, grav)
    return rot_dot[0] + rot_dot[1] + rot_dot[2] + vel_dot + pos_dot


def _split_flat(y):
    return (y[0:3], y[3:6], y[6:9]), y[9:12], y[12:15]


def rk4_flat_step(rot, vel, pos, gyro, accel, grav, h):
    """Classical fourth-order Runge-Kutta step on the flattened 15-state."""
    y = tuple(rot[0]) + tuple(rot[1]) + tuple(rot[2]) + tuple(vel) + tuple(pos)
    k1 = _rhs_flat(y, gyro, accel, grav)
    half_h = 0.5 * h
    y2 = tuple(y[i] + half_h * k1[i] for i in range(15))
    k2 = _rhs_flat(y2, gyro, accel, grav)
    y3 = tuple(y[i] + half_h * k2[i] for i in range(15))
    k3 = _rhs_flat(y3, gyro, accel, grav)
    y4 = tuple(y[i] + h * k3[i] for i in range(15))
    k4 = _rhs_flat(y4, gyro, accel, grav)
    sixth_h = h / 6.0
    out = tuple(
        y[i] + sixth_h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        for i in range(15)
    )
    return _split_flat(out)


def euler_flat_step(rot, vel, pos, gyro, accel, grav, h):
    """Forward Euler step on the flattened 15-state."""
    y = tuple(rot[0]) + tuple(rot[1]) + tuple(rot[2]) + tuple(vel) + tuple(pos)
    k1 = _rhs_flat(y, gyro, accel, grav)
    out = tuple(y[i] + h * k1[i] for i in range(15))
    return _split_flat(out)


def mat5_mul(a, b):
    """Dense 5x5 product, left-to-right accumulation."""
    out = []
    for i in range(5):
        row = []
        for j in range(5):
            acc = a[i][0] * b[0][j]
            for k in range(1, 5):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mixed_rhs(x, gen_left, gen_right):
    # Xdot = M X + X N on the full matrix state, no structure exploited.
    mx = mat5_mul(gen_left, x)
    xn = mat5_mul(x, gen_right)
    return tuple(tuple(mx[i][j] + xn[i][j] for j in range(5)) for i in range(5))


def _mat5_axpy(x, s, k):
    return tuple(tuple(x[i][j] + s * k[i][j] for j in range(5)) for i in range(5))


def rk4_group_step(x, gen_left, gen_right, h):
    """Classical RK4 on the dense matrix form of the mixed-invariant flow.

    Treats the full 5x5 group element as a generic dense state, which is
    how a structure-agnostic integrator prices one step of the same
    initial value problem.  Restricted to valid group elements this map
    produces exactly the same values as :func:`rk4_flat_step`.
    """
    k1 = _mixed_rhs(x, gen_left, gen_right)
    half_h = 0.5 * h
    k2 = _mixed_rhs(_mat5_axpy(x, half_h, k1), gen_left, gen_right)
    k3 = _mixed_rhs(_mat5_axpy(x, half_h, k2), gen_left, gen_right)
    k4 = _mixed_rhs(_mat5_axpy(x, h, k3), gen_left, gen_right)
    sixth_h = h / 6.0
    return tuple(
        tuple(
            x[i][j]
            + sixth_h * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j])
            for j in range(5)
        )
        for i in range(5)
    )
