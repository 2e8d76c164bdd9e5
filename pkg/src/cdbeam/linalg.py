"""Dense Hermitian linear algebra kernels shared by the beamformer solvers.

Everything here operates on small (transducer-count sized) complex matrices,
so the routines favour determinism and explicit failure modes over raw speed:
the eigensolver is a cyclic Jacobi iteration with a fixed sweep order and a
fixed eigenvector phase convention, and the Cholesky factorization fails
loudly on pivots that fall below a relative floor instead of silently
returning garbage.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "ConvergenceError",
    "EigenDecomposition",
    "GeneralizedEig",
    "NotPositiveDefinite",
    "cholesky",
    "eig_hermitian",
    "generalized_eig",
    "symmetrize",
]

# Relative floor under which a Cholesky pivot counts as a failure.
_PIVOT_FLOOR = 1e-12
# Relative diagonal ridge a caller may add, exactly once, to rescue a
# marginally indefinite matrix.
_RIDGE_SCALE = 1e-10
# Off-diagonal Frobenius threshold (relative to the full Frobenius norm)
# at which the Jacobi iteration counts as converged.
_JACOBI_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 30


class NotPositiveDefinite(Exception):
    """Raised when a matrix required to be positive definite is not."""


class ConvergenceError(Exception):
    """Raised when an iterative routine exhausts its iteration budget."""


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order and matching orthonormal columns."""

    values: np.ndarray
    vectors: np.ndarray


class GeneralizedEig(NamedTuple):
    """Solution of ``a w = e r w`` with r-orthonormal columns.

    ``vectors[:, k]`` is the back-transformed eigenvector for
    ``values[k]``; ``whitened[:, k]`` is the corresponding orthonormal
    eigenvector of the whitened matrix ``L^-1 a L^-H`` where ``r = L L^H``.
    """

    values: np.ndarray
    vectors: np.ndarray
    whitened: np.ndarray


def _as_square_matrix(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def symmetrize(m) -> np.ndarray:
    """Return the Hermitian part ``(m + m^H) / 2`` of a square matrix.

    The result has an exactly real diagonal, which downstream quadratic
    forms rely on.
    """
    a = _as_square_matrix(m)
    h = 0.5 * (a + a.conj().T)
    # The arithmetic already cancels the imaginary diagonal; this just
    # removes the representation's -0.0j noise.
    np.fill_diagonal(h, h.diagonal().real)
    return h


def _require_hermitian(a: np.ndarray, name: str) -> None:
    scale = max(np.abs(a).max(), 1.0)
    skew = np.abs(a - a.conj().T).max()
    if skew > 1e-10 * scale:
        raise ValueError(f"{name} is not Hermitian (skew {skew:.3e}); symmetrize it first")


def cholesky(m, *, ridge: bool = False) -> np.ndarray:
    """Lower Cholesky factor L with ``m = L L^H``.

    Arguments
    ---------
    m : Hermitian positive definite matrix.
    ridge : if True and the plain factorization fails, retry exactly once
        with ``1e-10 * max(diag(m))`` added to the diagonal before giving up.

    Raises
    ------
    NotPositiveDefinite
        If any pivot falls at or below ``1e-12 * max(diag(m))``.
    """
    a = _as_square_matrix(m)
    _require_hermitian(a, "cholesky input")
    try:
        return _cholesky_plain(a)
    except NotPositiveDefinite:
        if not ridge:
            raise
        eps = _RIDGE_SCALE * max(a.diagonal().real.max(), 0.0)
        if eps <= 0.0:
            raise
        return _cholesky_plain(a + eps * np.eye(a.shape[0]))


def _cholesky_plain(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    floor = _PIVOT_FLOOR * max(a.diagonal().real.max(), 0.0)
    low = np.zeros_like(a)
    for j in range(n):
        pivot = (a[j, j] - low[j, :j] @ low[j, :j].conj()).real
        if pivot <= floor:
            raise NotPositiveDefinite(
                f"pivot {pivot:.3e} at index {j} is below the floor {floor:.3e}"
            )
        low[j, j] = math.sqrt(pivot)
        if j + 1 < n:
            low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j].conj()) / low[j, j]
    return low


def _solve_lower(low: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``low x = b`` by forward substitution (b may be a matrix)."""
    x = np.array(b, dtype=np.complex128)
    for i in range(low.shape[0]):
        if i:
            x[i] -= low[i, :i] @ x[:i]
        x[i] /= low[i, i]
    return x


def _solve_lower_hermitian(low: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``low^H x = b`` by back substitution (b may be a matrix)."""
    n = low.shape[0]
    x = np.array(b, dtype=np.complex128)
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[i] -= low[i + 1 :, i].conj() @ x[i + 1 :]
        x[i] /= low[i, i].conjugate()
    return x


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(a.diagonal())
    return float(np.linalg.norm(off))


def eig_hermitian(m, max_sweeps: int = _JACOBI_MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps run in a fixed row-major pivot order until the off-diagonal
    Frobenius norm drops below ``1e-13`` times the Frobenius norm of the
    input. Eigenvalues are returned ascending (ties keep their diagonal
    order), and every eigenvector is rotated so that its largest-magnitude
    entry (lowest index on ties) is real and positive. Identical input
    therefore produces bit-identical output.

    Raises
    ------
    ConvergenceError
        If the threshold is not reached within ``max_sweeps`` sweeps.
    """
    a = symmetrize(m)
    n = a.shape[0]
    vec = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(a))
    threshold = _JACOBI_TOL * fro
    if n > 1 and fro > 0.0:
        converged = False
        for _ in range(max_sweeps):
            if _offdiag_norm(a) <= threshold:
                converged = True
                break
            _jacobi_sweep(a, vec)
        if not converged and _offdiag_norm(a) > threshold:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps"
            )
    values = a.diagonal().real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vec = vec[:, order]
    _fix_phases(vec)
    return EigenDecomposition(values, vec)


def _jacobi_sweep(a: np.ndarray, vec: np.ndarray) -> None:
    """One cyclic sweep of two-sided rotations, updating a and vec in place."""
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            b = abs(apq)
            if b == 0.0:
                continue
            phase = apq / b
            zeta = (a[q, q].real - a[p, p].real) / (2.0 * b)
            if zeta == 0.0:
                t = 1.0
            elif abs(zeta) > 1e8:
                t = -1.0 / (2.0 * zeta)
            else:
                t = -math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            # a <- J^H a J with J = I except J[[p,q],[p,q]] = [[c, -s*phase],
            # [s*conj(phase), c]]; apply the column product then the row one.
            col_p = a[:, p].copy()
            col_q = a[:, q].copy()
            a[:, p] = c * col_p + s * phase.conjugate() * col_q
            a[:, q] = -s * phase * col_p + c * col_q
            row_p = a[p, :].copy()
            row_q = a[q, :].copy()
            a[p, :] = c * row_p + s * phase * row_q
            a[q, :] = -s * phase.conjugate() * row_p + c * row_q
            # Zero by construction; writing it keeps rounding residue out.
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
            vcol_p = vec[:, p].copy()
            vcol_q = vec[:, q].copy()
            vec[:, p] = c * vcol_p + s * phase.conjugate() * vcol_q
            vec[:, q] = -s * phase * vcol_p + c * vcol_q


def _fix_phases(vec: np.ndarray) -> None:
    """Rotate each column so its largest-magnitude entry is real positive."""
    for k in range(vec.shape[1]):
        col = vec[:, k]
        j = int(np.argmax(np.abs(col)))
        pivot = col[j]
        mag = abs(pivot)
        if mag > 0.0:
            col *= pivot.conjugate() / mag


def generalized_eig(a, r, *, ridge: bool = False) -> GeneralizedEig:
    """Solve the Hermitian-definite generalized problem ``a w = e r w``.

    Whitens with the Cholesky factor of r (``q = L^-1 a L^-H``), decomposes
    q with :func:`eig_hermitian`, and back-transforms the eigenvectors as
    ``w = L^-H v`` so that ``w_k^H r w_k = 1`` and
    ``w_k^H a w_k = values[k]`` hold for every column.

    Raises
    ------
    NotPositiveDefinite
        If r fails the (optionally ridged) Cholesky factorization.
    """
    a = symmetrize(a)
    r = symmetrize(r)
    if a.shape != r.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {r.shape}")
    low = cholesky(r, ridge=ridge)
    y = _solve_lower(low, a)
    q = _solve_lower(low, y.conj().T).conj().T
    decomp = eig_hermitian(q)
    w = _solve_lower_hermitian(low, decomp.vectors)
    return GeneralizedEig(decomp.values, w, decomp.vectors)
