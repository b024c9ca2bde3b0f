"""Rotation-group helpers: hat/vee maps, exponential, logarithm."""

from __future__ import annotations

import numpy as np

from ._kernels import exp_so3_kernel

__all__ = [
    "hat",
    "vee",
    "exp_so3",
    "log_so3",
    "orthogonality_defect",
]


def hat(w):
    """Skew-symmetric matrix of a 3-vector, so that hat(w) @ x = w x x."""
    w = np.asarray(w, dtype=float)
    if w.shape != (3,):
        raise ValueError(f"expected shape (3,), got {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("non-finite vector")
    return np.array(
        [
            [0.0, -w[2], w[1]],
            [w[2], 0.0, -w[0]],
            [-w[1], w[0], 0.0],
        ]
    )


def vee(omega):
    """Inverse of :func:`hat`, tolerating round-off in the input.

    The symmetric part must vanish within 1e-9 (Frobenius); the result is
    read off the antisymmetric average so hat/vee round-trips are exact.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (3, 3):
        raise ValueError(f"expected shape (3, 3), got {omega.shape}")
    sym = float(np.linalg.norm(omega + omega.T))
    if not sym <= 1e-9:
        raise ValueError(f"matrix is not skew-symmetric (symmetric part {sym:.3e})")
    return 0.5 * np.array(
        [
            omega[2, 1] - omega[1, 2],
            omega[0, 2] - omega[2, 0],
            omega[1, 0] - omega[0, 1],
        ]
    )


def exp_so3(w):
    """Rotation matrix exp(hat(w)) via the Rodrigues formula.

    Accurate for all angles including w = 0; the sin/cos coefficient
    ratios switch to series evaluation below the small-angle crossover.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (3,):
        raise ValueError(f"expected shape (3,), got {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("non-finite rotation vector")
    return np.array(exp_so3_kernel((w[0], w[1], w[2])))


def _check_rotation(r, tol):
    defect = orthogonality_defect(r)
    if defect > tol:
        raise ValueError(
            f"matrix is not orthonormal within {tol:g} (defect {defect:.3e})"
        )
    if np.linalg.det(r) <= 0.0:
        raise ValueError("matrix has non-positive determinant")


def log_so3(r, tol=1e-6):
    """Rotation vector w with exp_so3(w) = r, for angles strictly below pi.

    ``tol`` bounds the allowed orthogonality defect of the input; inputs
    produced by non-structure-preserving integrators drift and need a
    looser gate than freshly constructed rotations.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise ValueError(f"expected shape (3, 3), got {r.shape}")
    _check_rotation(r, tol)
    cos_theta = np.clip((np.trace(r) - 1.0) / 2.0, -1.0, 1.0)
    theta = float(np.arccos(cos_theta))
    if theta > np.pi - 1e-6:
        raise ValueError(f"rotation angle {theta:.9f} too close to pi")
    axis_twice = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    if theta < 1e-4:
        # theta/sin(theta) ~ 1 + theta^2/6, error O(theta^4) ~ 1e-16
        scale = 0.5 * (1.0 + theta * theta / 6.0)
    else:
        scale = 0.5 * theta / np.sin(theta)
    return scale * axis_twice


def orthogonality_defect(r):
    """Frobenius norm of R^T R - I; zero for an exact rotation."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise ValueError(f"expected shape (3, 3), got {r.shape}")
    return float(np.linalg.norm(r.T @ r - np.eye(3)))
