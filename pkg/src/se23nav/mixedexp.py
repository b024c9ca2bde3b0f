"""Closed-form exponentials of the block upper-triangular generators.

A generator pairs a rotation-rate block with an acceleration column pair
and a nilpotent clock coupling.  Because the clock block squares to zero,
the full matrix exponential collapses to a rotation block, a 3x2
translation block built from four trigonometric ratios, and an affine
clock block.  This module also carries a dense scaling-and-squaring
exponential used as an in-package oracle for tests and diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import exp_coeffs
from .so3 import exp_so3, vee

__all__ = [
    "RodriguesCoeffs",
    "coefficients",
    "translation_block",
    "MixedGenerator",
    "MixedExpFactor",
    "exp_factor",
    "expm_dense",
]

_NILPOTENCY_TOL = 1e-12


@dataclass(frozen=True)
class RodriguesCoeffs:
    """Even trigonometric ratios that collapse the exponential series.

    For angle t:
      sin_ratio          sin(t)/t                  -> 1    as t -> 0
      versine_ratio      (1 - cos t)/t^2           -> 1/2
      sin_residual_ratio (t - sin t)/t^3           -> 1/6
      cos_residual_ratio (t^2/2 - 1 + cos t)/t^4   -> 1/24

    The last three weight the first- and second-order skew powers in the
    translation block; the first two build the rotation block.
    """

    angle: float
    sin_ratio: float
    versine_ratio: float
    sin_residual_ratio: float
    cos_residual_ratio: float


def coefficients(angle):
    """Evaluate the coefficient family at ``angle`` >= 0 radians.

    Uses the closed trigonometric forms above a small-angle crossover and
    a truncated alternating series below it; both sides agree to ~1e-15
    at the switch, so the family is continuous and accurate on [0, pi]
    and beyond.
    """
    angle = float(angle)
    if not np.isfinite(angle) or angle < 0.0:
        raise ValueError(f"angle must be finite and >= 0, got {angle}")
    k0, k1, k2, k3 = exp_coeffs(angle * angle)
    return RodriguesCoeffs(angle, k0, k1, k2, k3)


def translation_block(skew, accel_cols, clock):
    """Top-right block of exp([[skew, accel_cols], [0, clock]]).

    ``skew`` is 3x3 antisymmetric, ``accel_cols`` is 3x2, and ``clock`` is
    2x2 with clock @ clock = 0; the nilpotency is what terminates the
    series, so it is checked rather than assumed.  Arguments are expected
    pre-scaled by the time step.
    """
    skew = np.asarray(skew, dtype=float)
    accel_cols = np.asarray(accel_cols, dtype=float)
    clock = np.asarray(clock, dtype=float)
    if accel_cols.shape != (3, 2) or clock.shape != (2, 2):
        raise ValueError(
            f"expected blocks (3, 2) and (2, 2), got {accel_cols.shape} and {clock.shape}"
        )
    nil_defect = float(np.linalg.norm(clock @ clock))
    if not nil_defect <= _NILPOTENCY_TOL:
        raise ValueError(f"clock block is not nilpotent (|B^2| = {nil_defect:.3e})")
    axis = vee(skew)  # also validates antisymmetry
    c = coefficients(float(np.linalg.norm(axis)))
    eye2 = np.eye(2)
    sa = skew @ accel_cols
    ssa = skew @ sa
    return (
        accel_cols
        + (accel_cols @ clock) / 2.0
        + sa @ (c.versine_ratio * eye2 + c.sin_residual_ratio * clock)
        + ssa @ (c.sin_residual_ratio * eye2 + c.cos_residual_ratio * clock)
    )


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class MixedGenerator:
    """One side of the mixed flow: [[skew, accel_cols], [0, clock]].

    The world-input generator carries a zero skew block, the gravity
    vector in the first accel column, and the negated clock coupling; the
    body-input generator carries the gyro skew, the accelerometer column,
    and the positive coupling.
    """

    skew_block: np.ndarray
    accel_block: np.ndarray
    clock_block: np.ndarray

    def __post_init__(self):
        skew = _frozen(self.skew_block)
        accel = _frozen(self.accel_block)
        clock = _frozen(self.clock_block)
        if skew.shape != (3, 3) or accel.shape != (3, 2) or clock.shape != (2, 2):
            raise ValueError(
                "generator blocks must be (3, 3), (3, 2), (2, 2); got "
                f"{skew.shape}, {accel.shape}, {clock.shape}"
            )
        for name, block in (("skew", skew), ("accel", accel), ("clock", clock)):
            if not np.all(np.isfinite(block)):
                raise ValueError(f"non-finite entries in {name} block")
        if not float(np.linalg.norm(skew + skew.T)) <= 1e-9:
            raise ValueError("skew block is not antisymmetric")
        nil_defect = float(np.linalg.norm(clock @ clock))
        if not nil_defect <= _NILPOTENCY_TOL:
            raise ValueError(f"clock block is not nilpotent (|B^2| = {nil_defect:.3e})")
        object.__setattr__(self, "skew_block", skew)
        object.__setattr__(self, "accel_block", accel)
        object.__setattr__(self, "clock_block", clock)

    def as_matrix(self):
        out = np.zeros((5, 5))
        out[:3, :3] = self.skew_block
        out[:3, 3:] = self.accel_block
        out[3:, 3:] = self.clock_block
        return out


@dataclass(frozen=True, eq=False)
class MixedExpFactor:
    """One factor exponential: rotation, 3x2 translation, affine clock."""

    rot: np.ndarray
    trans: np.ndarray
    clock: np.ndarray

    def __post_init__(self):
        rot = _frozen(self.rot)
        trans = _frozen(self.trans)
        clock = _frozen(self.clock)
        if rot.shape != (3, 3) or trans.shape != (3, 2) or clock.shape != (2, 2):
            raise ValueError(
                "factor blocks must be (3, 3), (3, 2), (2, 2); got "
                f"{rot.shape}, {trans.shape}, {clock.shape}"
            )
        object.__setattr__(self, "rot", rot)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "clock", clock)

    def as_matrix(self):
        out = np.zeros((5, 5))
        out[:3, :3] = self.rot
        out[:3, 3:] = self.trans
        out[3:, 3:] = self.clock
        return out


def exp_factor(gen, t):
    """Exponential of ``gen`` scaled by time ``t`` (any sign), in blocks."""
    t = float(t)
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    rot = exp_so3(vee(gen.skew_block) * t)
    trans = translation_block(
        gen.skew_block * t, gen.accel_block * t, gen.clock_block * t
    )
    clock = np.eye(2) + gen.clock_block * t
    return MixedExpFactor(rot, trans, clock)


def expm_dense(x, t=1.0):
    """Dense matrix exponential exp(x t) by scaling and squaring.

    A 20-term Taylor kernel is applied after halving the matrix until its
    Frobenius norm is at most 1/32, then the result is squared back up.
    Good to ~1e-13 relative for norms up to ~10; intended as the
    independent cross-check for the closed-form factors, so it shares no
    code with them.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {x.shape}")
    if not (np.all(np.isfinite(x)) and np.isfinite(t)):
        raise ValueError("non-finite input")
    a = x * float(t)
    norm = float(np.linalg.norm(a))
    squarings = 0
    if norm > 0.03125:
        squarings = int(np.ceil(np.log2(norm / 0.03125)))
        a = a / (2.0**squarings)
    eye = np.eye(a.shape[0])
    out = eye.copy()
    for k in range(20, 0, -1):
        out = eye + (a @ out) / k
    for _ in range(squarings):
        out = out @ out
    return out
