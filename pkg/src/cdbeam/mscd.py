"""Minimum-effort design with a distortionless response constraint.

Solves

    minimize  w^H w   subject to  w^H d w = 0,  c^H w = 1,

in closed form: stationarity gives ``w = mu * (I - lam d)^-1 c`` with
``mu = 1 / (c^H (I - lam d)^-1 c)`` real, and substituting back into the
quadric constraint yields the same quadratic secular function used by the
projection step of the efficiency design, now built from ``u = V^H c``.
The minimizer corresponds to the secular root nearest zero, so no
iteration beyond the scalar root find is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import gdi
from .mecd import ConstraintMatrix
from .secular import build_secular, solve_secular

__all__ = ["ConstraintDegenerate", "MscdResult", "mscd_solve"]

# Relative floor for the resolvent quadratic form; below it the
# distortionless normalization blows up.
_DEGENERACY_FLOOR = 1e-12


class ConstraintDegenerate(Exception):
    """The distortionless constraint cannot be normalized at the root."""


@dataclass
class MscdResult:
    """Minimum-norm weights plus the multipliers of both constraints."""

    weights: np.ndarray
    norm_sq: float
    lam: float
    mu: float
    gdi_achieved: float


def mscd_solve(constraint: ConstraintMatrix, c) -> MscdResult:
    """Closed-form minimum-effort distortionless design.

    Arguments
    ---------
    constraint : indefinite directivity equality from
        :func:`cdbeam.mecd.build_constraint`.
    c : complex response vector (typically a steering vector toward the
        listening direction) that ``c^H w = 1`` holds against.

    Raises
    ------
    AllPolesOneSign
        If c has no component on one sign of the constraint spectrum; the
        combination of that response direction with this directivity
        target is structurally infeasible.
    ConstraintDegenerate
        If the resolvent form ``|u^H (I - lam E)^-1 u|`` collapses below
        ``1e-12 * |u|^2`` at the root, leaving no valid normalization.
    """
    c = np.asarray(c, dtype=np.complex128).ravel()
    e = constraint.eig.values
    vecs = constraint.eig.vectors
    if c.shape[0] != e.shape[0]:
        raise ValueError(f"vector length {c.shape[0]} does not match constraint size {e.shape[0]}")
    if not np.all(np.isfinite(c.view(np.float64))) or not np.any(c):
        raise ValueError("c must be finite and nonzero")

    u = vecs.conj().T @ c
    lam = solve_secular(build_secular(u, e)).lam
    resolvent = u / (1.0 - lam * e)
    denom = float((u.conj() @ resolvent).real)
    if abs(denom) < _DEGENERACY_FLOOR * float((u.conj() @ u).real):
        raise ConstraintDegenerate(
            f"resolvent form {denom:.3e} is negligible against |u|^2; "
            "the distortionless normalization is degenerate at this root"
        )
    w = vecs @ (resolvent / denom)
    return MscdResult(
        weights=w,
        norm_sq=float((w.conj() @ w).real),
        lam=lam,
        mu=1.0 / denom,
        gdi_achieved=gdi(constraint.a, constraint.r, w),
    )
