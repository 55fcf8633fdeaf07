"""Dense complex linear-algebra kernels shared by the simulation modules.

Only two factorizations are needed anywhere in this package: a truncated
singular value decomposition (splitting two-site blocks, compressing bonds)
and a Hermitian eigendecomposition (density-matrix spectra). Every matrix
that reaches these routines is small, a few hundred rows at the very most,
so explicit validation and deterministic behavior win over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Singular values below this absolute floor are treated as exact zeros before
# rank counting, so roundoff cannot inflate the kept rank.
SINGULAR_VALUE_FLOOR = 1e-14


@dataclass(frozen=True)
class SVDResult:
    """Truncated factorization M ~ left_isometry @ diag(singular_values) @ right_isometry_dag.

    ``left_isometry`` has orthonormal columns, ``right_isometry_dag`` has
    orthonormal rows, ``singular_values`` is non-negative and descending, and
    ``discarded_weight`` is the squared weight of the dropped values relative
    to the total (0 when nothing was dropped).
    """

    left_isometry: np.ndarray
    singular_values: np.ndarray
    right_isometry_dag: np.ndarray
    discarded_weight: float

    @property
    def rank(self) -> int:
        return int(self.singular_values.size)


def _as_matrix(matrix) -> np.ndarray:
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("matrix contains non-finite entries")
    return arr


def svd_truncate(matrix, max_rank: int, tol: float = 0.0) -> SVDResult:
    """SVD of ``matrix`` keeping at most ``max_rank`` singular values.

    The kept rank is ``min(max_rank, k)`` where ``k`` counts the singular
    values whose relative squared weight ``s_i^2 / sum(s^2)`` exceeds ``tol``;
    at least one value is always kept so downstream tensors never lose their
    bond. The reported ``discarded_weight`` equals the relative squared
    Frobenius reconstruction error of the truncated factorization.

    Raises:
        ValueError: on malformed input or invalid ``max_rank`` / ``tol``.
        RuntimeError: if the underlying factorization fails to converge.
    """
    m = _as_matrix(matrix)
    if max_rank < 1:
        raise ValueError(f"max_rank must be >= 1, got {max_rank}")
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    try:
        u, s, vdag = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"SVD failed to converge for a {m.shape[0]}x{m.shape[1]} matrix: {exc}"
        ) from exc

    total = float(np.sum(s * s))
    if total == 0.0:
        keep = 1
        discarded = 0.0
    else:
        effective = np.where(s < SINGULAR_VALUE_FLOOR, 0.0, s)
        weights = (effective * effective) / total
        significant = int(np.count_nonzero(weights > tol))
        keep = max(1, min(int(max_rank), significant))
        discarded = float(np.sum(s[keep:] ** 2) / total)

    return SVDResult(
        left_isometry=u[:, :keep].copy(),
        singular_values=s[:keep].copy(),
        right_isometry_dag=vdag[:keep, :].copy(),
        discarded_weight=discarded,
    )


def hermitian_eigs(matrix, herm_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (real, ascending) and eigenvectors of a Hermitian matrix.

    The input must be Hermitian within ``herm_tol`` elementwise; it is
    symmetrized before factorization so the returned spectrum is exactly real.

    Returns:
        ``(eigenvalues, eigenvectors)`` with ``eigenvectors[:, k]`` the
        eigenvector belonging to ``eigenvalues[k]``.
    """
    m = _as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    deviation = float(np.max(np.abs(m - m.conj().T)))
    if deviation > herm_tol:
        raise ValueError(
            f"matrix is not Hermitian: max |M - M^dag| = {deviation:.3e} exceeds {herm_tol:.1e}"
        )
    try:
        vals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigendecomposition failed to converge: {exc}") from exc
    return vals, vecs


def require_unitary(matrix, dim: int, tol: float = 1e-12, label: str = "gate") -> np.ndarray:
    """Validate that ``matrix`` is a ``dim x dim`` unitary within ``tol``."""
    m = _as_matrix(matrix)
    if m.shape != (dim, dim):
        raise ValueError(f"{label} must be {dim}x{dim}, got shape {m.shape}")
    deviation = float(np.max(np.abs(m.conj().T @ m - np.eye(dim))))
    if deviation > tol:
        raise ValueError(f"{label} is not unitary: max |G^dag G - I| = {deviation:.3e}")
    return m
