"""Root finding for the quadratic secular function of an indefinite form.

Both the quadric projection and the minimum-effort distortionless design
reduce to solving

    S(lam) = sum_n a_n * b_n / (lam - b_n)**2 = 0

where ``a_n = |u_n|^2 >= 0`` and the poles ``b_n = 1 / e_n`` come from the
nonzero eigenvalues of the indefinite constraint matrix. On the interval
between the largest negative pole and the smallest positive pole, S is
strictly increasing, runs from -inf to +inf, and therefore crosses zero
exactly once; that crossing is also the root of smallest magnitude over
the whole real line, which is the multiplier the solvers need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ConvergenceError

__all__ = [
    "AllPolesOneSign",
    "SecularProblem",
    "SecularRoot",
    "build_secular",
    "eval_secular",
    "solve_secular",
]

# Relative thresholds for dropping negligible terms when assembling the
# secular function.
_EIGENVALUE_DROP = 1e-12
_COEFF_DROP = 1e-14
# Poles closer than this (relatively) are merged and their coefficients
# summed, so near-degenerate eigenvalues cannot produce a spurious
# micro-interval.
_POLE_MERGE = 1e-10
# Termination: |S| below this multiple of the local magnitude scale, or a
# bracket narrower than this fraction of the initial pole gap.
_VALUE_TOL = 1e-10
_WIDTH_TOL = 1e-14
_MAX_ITERS = 200


class AllPolesOneSign(Exception):
    """Raised when the secular function has poles of only one sign.

    This happens when the expansion vector has no energy on one side of
    the indefinite matrix's spectrum, in which case the constraint surface
    cannot be reached along the resolvent path.
    """


@dataclass(frozen=True)
class SecularProblem:
    """Coefficients and poles of S, with the sign-change bracket."""

    coeffs: np.ndarray
    poles: np.ndarray
    bracket_low: float
    bracket_high: float


@dataclass(frozen=True)
class SecularRoot:
    lam: float
    residual: float
    iterations: int


def build_secular(u, e) -> SecularProblem:
    """Assemble the secular problem from eigenbasis data.

    Arguments
    ---------
    u : complex vector, the expansion of the solver's working vector in the
        eigenbasis of the constraint matrix.
    e : real eigenvalues of the constraint matrix, same length as u.

    Terms with ``|e_n| <= 1e-12 * max|e|`` (no pole) or
    ``|u_n|^2 <= 1e-14 * max|u|^2`` (no weight) are dropped; surviving
    poles within 1e-10 relative distance are merged with summed
    coefficients.

    Raises
    ------
    AllPolesOneSign
        If the surviving poles do not straddle zero.
    """
    u = np.asarray(u, dtype=np.complex128).ravel()
    e = np.asarray(e, dtype=np.float64).ravel()
    if u.shape != e.shape:
        raise ValueError(f"length mismatch: u has {u.size} entries, e has {e.size}")
    if u.size == 0:
        raise ValueError("empty eigenbasis data")
    if not (np.all(np.isfinite(u.view(np.float64))) and np.all(np.isfinite(e))):
        raise ValueError("non-finite eigenbasis data")

    coeffs = np.abs(u) ** 2
    e_scale = np.abs(e).max()
    a_scale = coeffs.max()
    keep = (np.abs(e) > _EIGENVALUE_DROP * e_scale) & (coeffs > _COEFF_DROP * a_scale)
    if not np.any(keep):
        raise AllPolesOneSign("no significant poles survive thresholding")

    poles = 1.0 / e[keep]
    coeffs = coeffs[keep]
    order = np.argsort(poles)
    poles = poles[order]
    coeffs = coeffs[order]

    merged_poles = [poles[0]]
    merged_coeffs = [coeffs[0]]
    for b, a in zip(poles[1:], coeffs[1:]):
        prev = merged_poles[-1]
        if abs(b - prev) <= _POLE_MERGE * max(abs(b), abs(prev)):
            merged_coeffs[-1] += a
        else:
            merged_poles.append(b)
            merged_coeffs.append(a)
    poles = np.array(merged_poles)
    coeffs = np.array(merged_coeffs)

    negative = poles[poles < 0.0]
    positive = poles[poles > 0.0]
    if negative.size == 0 or positive.size == 0:
        raise AllPolesOneSign(
            "all poles lie on one side of zero; the expansion vector has no "
            "component on one sign of the spectrum"
        )
    return SecularProblem(
        coeffs=coeffs,
        poles=poles,
        bracket_low=float(negative.max()),
        bracket_high=float(positive.min()),
    )


def eval_secular(problem: SecularProblem, lam: float) -> tuple[float, float]:
    """Return ``(S(lam), S'(lam))`` by direct summation."""
    d = lam - problem.poles
    if np.any(d == 0.0):
        raise ValueError(f"lam = {lam} coincides with a pole")
    ab = problem.coeffs * problem.poles
    with np.errstate(over="ignore"):
        s = float(np.sum(ab / d**2))
        ds = float(np.sum(-2.0 * ab / d**3))
    return s, ds


def _value_tolerance(problem: SecularProblem, lam: float) -> float:
    # S is a sum of signed terms that cancel at the root; the meaningful
    # "small" for |S(lam)| is relative to the total magnitude being
    # cancelled at this particular lam, not to any global scale. Using a
    # global scale over-relaxes the test when the root hugs a pole (tiny
    # coefficient on one side) and the solver would accept a non-root.
    d = lam - problem.poles
    with np.errstate(over="ignore"):
        magnitude = float(np.sum(problem.coeffs * np.abs(problem.poles) / d**2))
    return _VALUE_TOL * magnitude


def solve_secular(problem: SecularProblem, max_iters: int = _MAX_ITERS) -> SecularRoot:
    """Find the unique root of S between the innermost poles.

    Safeguarded bracketing: bisection steps, replaced by a Newton step
    whenever the Newton iterate stays strictly inside the current bracket.
    Converged when ``|S|`` falls below a scale-aware tolerance or the
    bracket narrows to 1e-14 of the initial pole gap; one last Newton step
    polishes the accepted root.

    Raises
    ------
    ConvergenceError
        If no sign change can be established or the iteration budget is
        exhausted.
    """
    b_low = problem.bracket_low
    b_high = problem.bracket_high
    gap = b_high - b_low

    # Pull the endpoints inside the interval; S diverges to -inf/+inf at
    # the poles, so the signs become (-, +) once the offset clears the
    # rounding plateau next to each pole.
    delta = 1e-12 * gap
    lo = hi = None
    while delta < 0.5 * gap:
        lo_try = b_low + delta
        hi_try = b_high - delta
        s_lo = _checked_eval(problem, lo_try)
        s_hi = _checked_eval(problem, hi_try)
        if s_lo is not None and s_hi is not None and s_lo < 0.0 < s_hi:
            lo, hi = lo_try, hi_try
            break
        delta *= 10.0
    if lo is None:
        raise ConvergenceError(
            "could not establish a (-, +) sign change inside the pole gap"
        )

    x = 0.5 * (lo + hi)
    iterations = 0
    s = ds = float("nan")
    for iterations in range(1, max_iters + 1):
        s, ds = eval_secular(problem, x)
        if abs(s) <= _value_tolerance(problem, x):
            break
        if s < 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= _WIDTH_TOL * gap:
            break
        newton = x - s / ds if ds > 0.0 and np.isfinite(ds) else None
        if newton is not None and lo < newton < hi:
            x = newton
        else:
            x = 0.5 * (lo + hi)
    else:
        raise ConvergenceError(f"secular root not found in {max_iters} iterations")

    # Final Newton polish; keep it only when it actually improves.
    if ds > 0.0 and np.isfinite(ds):
        polished = x - s / ds
        if b_low < polished < b_high:
            s_pol = _checked_eval(problem, polished)
            if s_pol is not None and abs(s_pol) <= abs(s):
                x, s = polished, s_pol

    return SecularRoot(lam=float(x), residual=abs(s), iterations=iterations)


def _checked_eval(problem: SecularProblem, lam: float) -> float | None:
    """S(lam), tolerating overflow to +/-inf; None when unusable."""
    d = lam - problem.poles
    if np.any(d == 0.0):
        return None
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        s = float(np.sum(problem.coeffs * problem.poles / d**2))
    return None if np.isnan(s) else s
