"""Maximum-efficiency design under an exact directivity equality.

The design problem is

    maximize  w^H c w   subject to  w^H d w = 0,  w^H w = 1,

where ``d = a - tau * r`` pins the generalized directivity index at tau.
For any tau strictly between the extreme generalized eigenvalues of
(a, r), d is indefinite and the constraint surface is a (scaled) quadric
cone intersected with the unit sphere.

Two solvers are provided. :func:`mecd_pa` is the projected-ascent method:
each iteration takes one gradient step on the objective and then re-enters
the constraint surface through the minimum-norm quadric projection, whose
multiplier comes from the nearest-zero root of a quadratic secular
equation. :func:`mecd_dm` is the differential-multiplier baseline that
follows the Lagrangian gradient flow with fixed step sizes; it is kept as
the comparison point the projected method is benchmarked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arrays import gdi
from .linalg import EigenDecomposition, eig_hermitian, generalized_eig, symmetrize
from .secular import AllPolesOneSign, build_secular, solve_secular

__all__ = [
    "ConstraintMatrix",
    "DivergenceError",
    "InfeasibleTau",
    "MecdResult",
    "build_constraint",
    "mecd_dm",
    "mecd_pa",
    "project_onto_quadric",
]

# Relative margin keeping tau away from the ends of the feasible interval.
_FEASIBILITY_MARGIN = 1e-9
# Clamp target just inside the top of the interval, relative.
_CLAMP_MARGIN = 1e-6
# Size of the rescue perturbation when a working vector has no component
# on one sign of the constraint spectrum.
_RESCUE_STEP = 1e-6
# Joint stopping tolerances: relative objective change and normalized
# constraint residual.
_STOP_TOL = 1e-10


class InfeasibleTau(Exception):
    """Target directivity outside the open feasible interval.

    Attributes
    ----------
    requested : the tau that was asked for (linear scale).
    feasible : tuple (e_min, e_max) of generalized eigenvalue bounds;
        feasible targets lie strictly between them.
    """

    def __init__(self, requested: float, feasible: tuple[float, float]):
        self.requested = requested
        self.feasible = feasible
        lo, hi = feasible
        super().__init__(
            f"tau = {requested:.6g} is outside the feasible interval "
            f"({lo:.6g}, {hi:.6g}); in dB: {_safe_db(requested):.3f} vs "
            f"({_safe_db(lo):.3f}, {_safe_db(hi):.3f})"
        )


class DivergenceError(Exception):
    """Differential-multiplier iteration produced non-finite state."""

    def __init__(self, message: str, trace: list[tuple[int, float, float]]):
        self.trace = trace
        super().__init__(message)


def _safe_db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0.0 else -math.inf


@dataclass
class ConstraintMatrix:
    """Indefinite directivity-equality matrix with its eigenstructure.

    The construction inputs a and r are retained so result objects can
    report the directivity the weights actually achieve.
    """

    d: np.ndarray
    tau: float
    eig: EigenDecomposition
    a: np.ndarray
    r: np.ndarray

    @property
    def spectral_norm(self) -> float:
        return float(np.abs(self.eig.values).max())


@dataclass
class MecdResult:
    """Converged (or best-effort) design weights and diagnostics.

    ``trace`` holds one ``(iteration, objective, residual)`` triple per
    iteration, where the residual is ``|w^H d w|`` normalized by the
    spectral norm of d.
    """

    weights: np.ndarray
    objective: float
    gdi_achieved: float
    mu: float
    lam: float
    converged: bool
    trace: list[tuple[int, float, float]] = field(repr=False)


def build_constraint(a, r, tau_db: float, *, clamp: bool = False) -> ConstraintMatrix:
    """Assemble ``d = a - tau * r`` for a directivity target given in dB.

    The target is feasible when it lies strictly inside the generalized
    eigenvalue interval of (a, r) with a relative margin of 1e-9. With
    ``clamp=True`` the target is first lowered to ``(1 - 1e-6) * e_max``
    when it exceeds the top of the interval, which keeps sweeps running at
    frequencies where the requested directivity is simply unavailable.

    Raises
    ------
    InfeasibleTau
        If tau (after any clamping) is not strictly inside the interval.
    NotPositiveDefinite
        If r is not positive definite (a one-shot ridge is attempted).
    """
    a = symmetrize(a)
    r = symmetrize(r)
    pair = generalized_eig(a, r, ridge=True)
    e_min = float(pair.values[0])
    e_max = float(pair.values[-1])
    tau = 10.0 ** (tau_db / 10.0)
    if clamp:
        tau = min(tau, (1.0 - _CLAMP_MARGIN) * e_max)
    margin = _FEASIBILITY_MARGIN * (e_max - e_min)
    if not (e_min + margin < tau < e_max - margin):
        raise InfeasibleTau(tau, (e_min, e_max))
    d = symmetrize(a - tau * r)
    return ConstraintMatrix(d=d, tau=tau, eig=eig_hermitian(d), a=a, r=r)


def project_onto_quadric(w, constraint: ConstraintMatrix) -> tuple[np.ndarray, float]:
    """Minimum-norm perturbation v placing ``w + v`` on the quadric.

    In the eigenbasis ``d = V E V^H`` the optimal perturbation is the
    resolvent correction ``v = lam * V (I - lam E)^-1 E V^H w`` whose
    multiplier lam is the nearest-zero root of the secular function; the
    projected point is ``V (I - lam E)^-1 V^H w``.

    If w has no component on one sign of the spectrum (no secular bracket),
    it is nudged once by ``1e-6 * |w|`` along the extreme eigenvector of
    the missing sign and the projection is retried; the returned v then
    includes that nudge so ``w + v`` still lands on the quadric.

    Returns ``(v, lam)``.
    """
    e = constraint.eig.values
    vecs = constraint.eig.vectors
    w = np.asarray(w, dtype=np.complex128).ravel()
    if w.shape[0] != e.shape[0]:
        raise ValueError(f"vector length {w.shape[0]} does not match constraint size {e.shape[0]}")
    norm_w = float(np.linalg.norm(w))
    if norm_w == 0.0:
        raise ValueError("cannot project the zero vector")

    base = w
    u = vecs.conj().T @ base
    try:
        problem = build_secular(u, e)
    except AllPolesOneSign:
        # Nudge toward the side of the spectrum the vector is blind to,
        # then retry once; a second failure is structural and propagates.
        significant = np.abs(u) ** 2 > 1e-14 * max(np.abs(u).max() ** 2, 1e-300)
        has_positive = bool(np.any(e[significant] > 0.0))
        rescue_index = int(np.argmin(e)) if has_positive else int(np.argmax(e))
        base = w + _RESCUE_STEP * norm_w * vecs[:, rescue_index]
        u = vecs.conj().T @ base
        problem = build_secular(u, e)

    lam = solve_secular(problem).lam
    v = vecs @ (lam * e / (1.0 - lam * e) * u)
    if base is not w:
        v = v + (base - w)
    return v, lam


def _unit_start(w0, n: int) -> np.ndarray:
    if w0 is None:
        w = np.ones(n, dtype=np.complex128)
    else:
        w = np.asarray(w0, dtype=np.complex128).ravel().copy()
        if w.shape[0] != n:
            raise ValueError(f"w0 has length {w.shape[0]}, expected {n}")
    norm = np.linalg.norm(w)
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("w0 must be nonzero and finite")
    return w


def _fix_phase(w: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.abs(w)))
    pivot = w[j]
    mag = abs(pivot)
    return w * (pivot.conjugate() / mag) if mag > 0.0 else w


def mecd_pa(
    c,
    constraint: ConstraintMatrix,
    alpha: float = 1.0,
    w0=None,
    max_iters: int = 100,
    residual_target: float | None = None,
) -> MecdResult:
    """Projected-ascent solver for the maximum-efficiency design.

    Each iteration ascends the objective (``w <- w + alpha * c w``),
    projects back onto the quadric with :func:`project_onto_quadric`, and
    renormalizes to the unit sphere. Iteration stops when the relative
    objective change and the normalized constraint residual both fall
    below 1e-10 (or, when ``residual_target`` is set, as soon as the
    residual alone reaches that target). Exhausting ``max_iters`` returns
    the last iterate with ``converged=False`` rather than raising.

    The returned weights are unit norm with the largest-magnitude entry
    rotated to be real positive.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    c = symmetrize(c)
    n = c.shape[0]
    if n != constraint.d.shape[0]:
        raise ValueError("objective and constraint sizes differ")
    w = _unit_start(w0, n)
    d = constraint.d
    d_norm = constraint.spectral_norm
    trace: list[tuple[int, float, float]] = []
    converged = False
    lam = 0.0
    objective = float("nan")
    previous = None
    for iteration in range(1, max_iters + 1):
        stepped = w + alpha * (c @ w)
        v, lam = project_onto_quadric(stepped, constraint)
        w = stepped + v
        w /= np.linalg.norm(w)
        objective = float((w.conj() @ c @ w).real)
        residual = abs(float((w.conj() @ d @ w).real)) / d_norm
        trace.append((iteration, objective, residual))
        if residual_target is not None:
            if residual <= residual_target:
                converged = True
                break
        elif (
            previous is not None
            and abs(objective - previous) <= _STOP_TOL * max(1.0, abs(objective))
            and residual <= _STOP_TOL
        ):
            converged = True
            break
        previous = objective
    w = _fix_phase(w)
    return MecdResult(
        weights=w,
        objective=objective,
        gdi_achieved=gdi(constraint.a, constraint.r, w),
        mu=objective,
        lam=lam,
        converged=converged,
        trace=trace,
    )


def mecd_dm(
    c,
    constraint: ConstraintMatrix,
    alpha_w: float = 1e-2,
    alpha_lambda: float = 1e-3,
    w0=None,
    max_iters: int = 100,
    residual_target: float | None = None,
) -> MecdResult:
    """Differential-multiplier baseline for the same design problem.

    Follows the Lagrangian dynamics with fixed step sizes: ascent on w
    along ``(c - lam d - mu I) w`` with ``mu = w^H c w``, descent on the
    multiplier via ``dL/dlam = -w^H d w``, then renormalization. Stopping
    matches :func:`mecd_pa`. Step sizes of zero are allowed (the iterate
    then just stays put), which makes the method's sensitivity to its step
    sizes easy to demonstrate.

    Raises
    ------
    DivergenceError
        If the objective or multiplier leaves the finite range; the
        partial trace is attached to the exception.
    """
    if alpha_w < 0.0 or alpha_lambda < 0.0:
        raise ValueError("step sizes must be nonnegative")
    c = symmetrize(c)
    n = c.shape[0]
    if n != constraint.d.shape[0]:
        raise ValueError("objective and constraint sizes differ")
    w = _unit_start(w0, n)
    w /= np.linalg.norm(w)
    d = constraint.d
    d_norm = constraint.spectral_norm
    lam = 0.0
    trace: list[tuple[int, float, float]] = []
    converged = False
    objective = float((w.conj() @ c @ w).real)
    previous = None
    for iteration in range(1, max_iters + 1):
        mu = float((w.conj() @ c @ w).real)
        quad = float((w.conj() @ d @ w).real)
        w = w + alpha_w * (c @ w - lam * (d @ w) - mu * w)
        lam = lam + alpha_lambda * quad
        norm = float(np.linalg.norm(w))
        if not (np.isfinite(norm) and norm > 0.0 and np.isfinite(lam)):
            raise DivergenceError(
                f"diverged at iteration {iteration} (|w| = {norm}, lam = {lam})", trace
            )
        w /= norm
        objective = float((w.conj() @ c @ w).real)
        residual = abs(float((w.conj() @ d @ w).real)) / d_norm
        if not np.isfinite(objective):
            raise DivergenceError(f"objective non-finite at iteration {iteration}", trace)
        trace.append((iteration, objective, residual))
        if residual_target is not None:
            if residual <= residual_target:
                converged = True
                break
        elif (
            previous is not None
            and abs(objective - previous) <= _STOP_TOL * max(1.0, abs(objective))
            and residual <= _STOP_TOL
        ):
            converged = True
            break
        previous = objective
    w = _fix_phase(w)
    return MecdResult(
        weights=w,
        objective=objective,
        gdi_achieved=gdi(constraint.a, constraint.r, w),
        mu=objective,
        lam=lam,
        converged=converged,
        trace=trace,
    )
