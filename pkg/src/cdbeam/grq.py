"""Maximizers of the generalized Rayleigh quotient, plain and penalized.

The plain problem maximizes ``w^H a w / w^H r w`` and is solved exactly by
the top generalized eigenpair of (a, r). The penalized variant adds a
per-transducer electrical term to the denominator,

    w^H a w / (w^H r w + w^H Gamma Sigma w),    Gamma = diag(diag(r)),

with the penalty expressed through weights ``lambda_n in (0, 1]`` via
``sigma_n = lambda_n**-2 - 1``. Substituting ``w = Lambda y`` turns the
penalized quotient into a plain one for the pair
``(Lambda a Lambda, rhat)`` with ``rhat = Gamma + Lambda (r - Gamma)
Lambda``, which conveniently keeps the diagonal of r untouched. Because the
penalty only ever inflates the denominator, the penalized optimum can never
exceed the plain one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import gdi
from .linalg import generalized_eig, symmetrize

__all__ = [
    "GrqResult",
    "PenaltyWeights",
    "build_penalty",
    "interpolate_lambdas",
    "max_grpq",
    "max_grq",
]

# Smallest penalty weight accepted at the API boundary; lambda = 0 would
# make the change of variables singular.
LAMBDA_FLOOR = 1e-6


@dataclass
class PenaltyWeights:
    """Per-transducer penalty weights lambda_n, each in [1e-6, 1]."""

    lambdas: np.ndarray

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=np.float64).ravel()
        if self.lambdas.size == 0:
            raise ValueError("empty penalty weights")
        if not np.all(np.isfinite(self.lambdas)):
            raise ValueError("penalty weights must be finite")
        if np.any(self.lambdas < LAMBDA_FLOOR) or np.any(self.lambdas > 1.0):
            raise ValueError(
                f"penalty weights must lie in [{LAMBDA_FLOOR}, 1], got {self.lambdas}"
            )

    @property
    def sigmas(self) -> np.ndarray:
        """Equivalent diagonal penalty strengths sigma_n = lambda_n**-2 - 1."""
        return 1.0 / self.lambdas**2 - 1.0


@dataclass
class GrqResult:
    """Optimal weights, the quotient value, and the value in dB."""

    weights: np.ndarray
    value: float
    value_db: float


def _to_db(value: float) -> float:
    return 10.0 * math.log10(value) if value > 0.0 else -math.inf


def max_grq(a, r) -> GrqResult:
    """Maximize ``w^H a w / w^H r w`` over nonzero w.

    r must be positive definite (a one-shot diagonal ridge is attempted on
    marginal input); the returned weights satisfy ``w^H r w = 1`` and the
    value is the top generalized eigenvalue.
    """
    a = symmetrize(a)
    r = symmetrize(r)
    pair = generalized_eig(a, r, ridge=True)
    w = pair.vectors[:, -1].copy()
    # w^H r w = 1 holds by construction; renormalize to squeeze out the
    # last rounding error so downstream equality checks see exactly 1.
    w /= math.sqrt((w.conj() @ r @ w).real)
    value = float(pair.values[-1])
    return GrqResult(weights=w, value=value, value_db=_to_db(value))


def build_penalty(r, weights: PenaltyWeights) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(gamma, rhat)`` for the penalized-to-plain substitution.

    gamma is diag(diag(r)); rhat = gamma + Lambda (r - gamma) Lambda, i.e.
    off-diagonal entries ``lambda_i * lambda_j * r_ij`` with the diagonal
    of r preserved exactly.
    """
    r = symmetrize(r)
    lam = weights.lambdas
    if lam.size != r.shape[0]:
        raise ValueError(f"{lam.size} penalty weights for a {r.shape[0]}-element array")
    diag = r.diagonal().real
    if np.any(diag <= 0.0):
        raise ValueError("r must have a strictly positive diagonal")
    gamma = np.diag(diag.astype(np.complex128))
    rhat = np.outer(lam, lam) * r
    np.fill_diagonal(rhat, diag)
    return gamma, rhat


def max_grpq(a, r, weights: PenaltyWeights) -> GrqResult:
    """Maximize the electrically penalized quotient.

    Solves the plain problem for ``(Lambda a Lambda, rhat)`` and maps the
    optimizer back as ``w = Lambda y``; the returned value is the penalized
    quotient of w (denominator ``w^H (r + gamma sigma) w`` normalized
    to 1), and is never above :func:`max_grq`'s value for the same (a, r).
    """
    a = symmetrize(a)
    lam = weights.lambdas
    _, rhat = build_penalty(r, weights)
    scaled = np.outer(lam, lam) * a
    inner = max_grq(scaled, rhat)
    return GrqResult(
        weights=lam * inner.weights,
        value=inner.value,
        value_db=inner.value_db,
    )


def interpolate_lambdas(breakpoints, frequency_hz: float) -> PenaltyWeights:
    """Evaluate per-transducer (frequency, lambda) breakpoints at one
    frequency, interpolating linearly in log-frequency and holding the end
    values outside the covered range.

    ``breakpoints`` is one sequence of (frequency_hz, lambda) pairs per
    transducer, each with strictly increasing positive frequencies.
    """
    if frequency_hz <= 0.0:
        raise ValueError(f"frequency must be positive, got {frequency_hz}")
    out = []
    for idx, points in enumerate(breakpoints):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError(f"transducer {idx}: breakpoints must be (frequency, lambda) pairs")
        freqs, lams = pts[:, 0], pts[:, 1]
        if np.any(freqs <= 0.0) or np.any(np.diff(freqs) <= 0.0):
            raise ValueError(f"transducer {idx}: breakpoint frequencies must be positive and increasing")
        out.append(np.interp(math.log(frequency_hz), np.log(freqs), lams))
    return PenaltyWeights(np.array(out))
