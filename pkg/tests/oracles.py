"""Independent cross-check machinery for the test suite.

Everything here is built from primitive numpy operations (polynomial
arithmetic, companion-matrix roots, rejection/cone sampling) so that the
library never gets to grade its own homework. Nothing in this module
imports cdbeam.
"""

from __future__ import annotations

import numpy as np


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) * (scale / 2.0)


def random_psd(rng: np.random.Generator, n: int) -> np.ndarray:
    m = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)
    h = m @ m.conj().T
    return (h + h.conj().T) / 2.0


def charpoly(m: np.ndarray) -> np.ndarray:
    """Characteristic polynomial coefficients via the Faddeev-LeVerrier
    recurrence (highest degree first)."""
    n = m.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    mk = np.zeros_like(m)
    eye = np.eye(n, dtype=m.dtype)
    for k in range(1, n + 1):
        mk = m @ mk + coeffs[k - 1] * eye
        coeffs[k] = -float(np.trace(m @ mk).real) / k
    return coeffs


def eigvals_by_charpoly(m: np.ndarray) -> np.ndarray:
    """Hermitian eigenvalues as sorted real roots of the characteristic
    polynomial. Only trustworthy for small, well-scaled matrices."""
    return np.sort(np.roots(charpoly(m)).real)


def secular_polynomial(coeffs: np.ndarray, poles: np.ndarray) -> np.ndarray:
    """Expanded numerator of sum a_n b_n / (x - b_n)^2, i.e.
    sum_n a_n b_n prod_{m != n} (x - b_m)^2, highest degree first."""
    total = np.zeros(1)
    for i in range(len(poles)):
        term = np.array([coeffs[i] * poles[i]])
        for j in range(len(poles)):
            if j != i:
                lin = np.array([1.0, -poles[j]])
                term = np.polymul(term, np.polymul(lin, lin))
        total = np.polyadd(total, term)
    return total


def polish_secular_root(coeffs: np.ndarray, poles: np.ndarray, lam: float, steps: int = 50) -> float:
    """Newton-refine a root of the rational secular function itself."""
    for _ in range(steps):
        gaps = lam - poles
        value = float(np.sum(coeffs * poles / gaps**2))
        slope = float(np.sum(-2.0 * coeffs * poles / gaps**3))
        if slope == 0.0:
            break
        step = value / slope
        lam -= step
        if abs(step) <= 1e-16 * max(1.0, abs(lam)):
            break
    return lam


def secular_critical_points(coeffs: np.ndarray, poles: np.ndarray) -> np.ndarray:
    """All real roots of the expanded secular polynomial, Newton-polished
    against the rational form and deduplicated."""
    roots = np.roots(secular_polynomial(coeffs, poles))
    if roots.size == 0:
        return np.array([])
    scale = max(1.0, float(np.abs(roots).max()))
    real = roots[np.abs(roots.imag) <= 1e-7 * scale].real
    out: list[float] = []
    for lam in np.sort(real):
        if np.min(np.abs(lam - poles)) <= 1e-9 * max(1.0, abs(lam)):
            continue
        lam = polish_secular_root(coeffs, poles, float(lam))
        if out and abs(lam - out[-1]) <= 1e-8 * max(1.0, abs(lam)):
            continue
        out.append(lam)
    return np.array(out)


def cone_unit_samples(
    rng: np.random.Generator, values: np.ndarray, vectors: np.ndarray, count: int
) -> np.ndarray:
    """Random unit vectors w with w^H D w = 0 for D = V diag(values) V^H.

    Sampled by drawing complex-normal coordinates in the eigenbasis and
    rescaling the positive-eigenvalue block so the quadratic form cancels
    exactly. Rows are unit norm; both spectrum signs must be present.
    """
    n = values.shape[0]
    z = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    pos = values > 0.0
    ppow = (np.abs(z[:, pos]) ** 2) @ values[pos]
    npow = (np.abs(z[:, ~pos]) ** 2) @ (-values[~pos])
    keep = (ppow > 0.0) & (npow > 0.0)
    z = z[keep]
    z[:, pos] *= np.sqrt(npow[keep] / ppow[keep])[:, None]
    w = z @ vectors.T
    return w / np.linalg.norm(w, axis=1)[:, None]


def distortionless_cone_samples(
    rng: np.random.Generator,
    values: np.ndarray,
    vectors: np.ndarray,
    c: np.ndarray,
    count: int,
) -> np.ndarray:
    """Random w with w^H D w = 0 and c^H w = 1, by scaling cone samples."""
    w = cone_unit_samples(rng, values, vectors, count)
    gain = w @ np.conj(c)
    keep = np.abs(gain) > 1e-9
    return w[keep] / gain[keep, None]
