"""Dense complex-matrix helpers and the two structural predicates used
everywhere else: real-linear independence and Hurwitz-Radon orthogonality.

Matrices are plain ``numpy`` complex arrays.  Sets of matrices are passed
either as sequences of 2-D arrays or as a stacked ``(K, T, N)`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "stack",
    "vectorize_real",
    "rank_real_span",
    "is_hr_orthogonal",
    "hr_residual",
    "compose",
    "kron_all",
    "is_unitary",
    "is_hermitian",
    "matrix_rank",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical cut-offs.

    Parameters
    ----------
    rank_eps : float
        Singular values below ``rank_eps * sigma_max`` count as zero.
    zero_eps : float
        Entrywise magnitude below which a matrix entry counts as zero.
    """

    rank_eps: float = 1e-9
    zero_eps: float = 1e-9

    def __post_init__(self):
        if not (self.rank_eps > 0 and self.zero_eps > 0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def as_matrix(M) -> np.ndarray:
    """Return `M` as a 2-D complex array, rejecting NaN/Inf entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def stack(mats) -> np.ndarray:
    """Stack a sequence of equally sized matrices into a ``(K, T, N)`` array."""
    if isinstance(mats, np.ndarray) and mats.ndim == 3:
        return mats.astype(complex, copy=False)
    mats = [as_matrix(m) for m in mats]
    if not mats:
        return np.zeros((0, 0, 0), dtype=complex)
    shape = mats[0].shape
    for m in mats:
        if m.shape != shape:
            raise ValueError(f"dimension mismatch: {m.shape} vs {shape}")
    return np.stack(mats)


def vectorize_real(M) -> np.ndarray:
    """Real parts then imaginary parts, both in row-major order.

    Works on a single matrix or on a stack, in which case the result has
    one row per matrix.
    """
    A = np.asarray(M, dtype=complex)
    if A.ndim == 2:
        flat = A.reshape(-1)
        return np.concatenate([flat.real, flat.imag])
    flat = A.reshape(A.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def rank_real_span(mats, tol: Tolerance = DEFAULT_TOL) -> int:
    """Dimension over the reals of the span of `mats`."""
    A = stack(mats)
    if A.shape[0] == 0:
        return 0
    V = vectorize_real(A)
    s = np.linalg.svd(V, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol.rank_eps * s[0]))


def hr_residual(A, B) -> np.ndarray:
    """A^H B + B^H A."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    P = A.conj().T @ B
    return P + P.conj().T


def is_hr_orthogonal(A, B, tol: Tolerance = DEFAULT_TOL) -> bool:
    return bool(np.all(np.abs(hr_residual(A, B)) <= tol.zero_eps))


def _block_diag(parts):
    n = sum(p.shape[0] for p in parts)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for p in parts:
        k = p.shape[0]
        out[i:i + k, i:i + k] = p
        i += k
    return out


def compose(kind: str, parts: Sequence) -> np.ndarray:
    """Kronecker product of two matrices, or block-diagonal of square ones."""
    if not parts:
        raise ValueError("compose needs at least one part")
    parts = [as_matrix(p) for p in parts]
    if kind == "kronecker":
        if len(parts) != 2:
            raise ValueError("kronecker takes exactly two parts")
        return np.kron(parts[0], parts[1])
    if kind == "block_diag":
        for p in parts:
            if p.shape[0] != p.shape[1]:
                raise ValueError(f"block_diag needs square parts, got {p.shape}")
        return _block_diag(parts)
    raise ValueError(f"unknown composition {kind!r}")


def kron_all(*mats) -> np.ndarray:
    """Left-to-right Kronecker product of any number of matrices."""
    if not mats:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, [np.asarray(m, dtype=complex) for m in mats])


def is_unitary(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    A = np.asarray(A, dtype=complex)
    if A.shape[0] != A.shape[1]:
        return False
    return bool(np.all(np.abs(A.conj().T @ A - np.eye(A.shape[0])) <= tol.zero_eps))


def is_hermitian(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    A = np.asarray(A, dtype=complex)
    return A.shape[0] == A.shape[1] and bool(np.all(np.abs(A - A.conj().T) <= tol.zero_eps))


def matrix_rank(A, tol: Tolerance = DEFAULT_TOL) -> int:
    """Complex rank with the relative singular-value cut-off."""
    s = np.linalg.svd(np.asarray(A, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol.rank_eps * s[0]))
