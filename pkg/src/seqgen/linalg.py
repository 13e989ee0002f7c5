"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every routine is
a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

DEFAULT_RANK_TOL = 1e-12


@dataclass(frozen=True)
class SVDResult:
    """Thin SVD truncated to numerical rank: ``A ~= U @ diag(sigma) @ Wdag``."""

    U: np.ndarray
    sigma: np.ndarray
    Wdag: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.sigma)

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.sigma) @ self.Wdag


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Coerce ``A`` to a finite 2-D complex array."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise ValueError(f"invalid matrix: {name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"invalid matrix: {name} has non-finite entries")
    return A


def _fix_phases(U: np.ndarray, Wdag: np.ndarray) -> None:
    # first nonzero entry of each column of U made real and non-negative
    for j in range(U.shape[1]):
        col = U[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-14 * np.abs(col).max())
        z = col[nz[0]]
        phase = z / abs(z)
        U[:, j] = col / phase
        Wdag[j, :] = Wdag[j, :] * phase


def svd(A, rank_tol: float = DEFAULT_RANK_TOL) -> SVDResult:
    """Thin singular value decomposition truncated at ``rank_tol * sigma_max``.

    Singular values ``s_k <= rank_tol * s_max`` are discarded along with their
    vectors.  Columns of ``U`` are phase-fixed so their first nonzero entry is
    real and non-negative; nothing downstream depends on that choice.

    Raises
    ------
    ValueError
        ``"invalid matrix"`` for non-finite input, ``"zero input"`` for an
        all-zero matrix.
    """
    A = as_matrix(A)
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    if A.size == 0 or not np.any(A):
        raise ValueError("zero input: cannot decompose the zero matrix")
    U, s, Wdag = np.linalg.svd(A, full_matrices=False)
    keep = s > rank_tol * s[0]
    U = np.ascontiguousarray(U[:, keep])
    Wdag = np.ascontiguousarray(Wdag[keep, :])
    _fix_phases(U, Wdag)
    return SVDResult(U=U, sigma=s[keep].copy(), Wdag=Wdag)


def isometry_residual(V) -> float:
    """``max |V^dag V - I|`` elementwise."""
    V = as_matrix(V)
    return float(np.abs(V.conj().T @ V - np.eye(V.shape[1])).max(initial=0.0))


def is_isometry(V, tol: float = 1e-10) -> tuple[bool, float]:
    """Check ``V^dag V = I`` within ``tol``; returns ``(ok, residual)``."""
    V = as_matrix(V)
    if V.shape[0] < V.shape[1]:
        raise ValueError(
            f"cannot be isometric: {V.shape[0]}x{V.shape[1]} has more columns than rows"
        )
    res = isometry_residual(V)
    return res <= tol, res


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = as_matrix(U)
    return U.shape[0] == U.shape[1] and isometry_residual(U) <= tol


def _orthonormal_complement(
    V: np.ndarray, count: int, preferred: Optional[Sequence[int]] = None
) -> np.ndarray:
    """``count`` orthonormal columns orthogonal to the columns of ``V``.

    Modified Gram-Schmidt over the standard basis with pivoting on residual
    norm; each accepted vector is orthogonalized twice.  Basis vectors listed
    in ``preferred`` win whenever their residual is well conditioned.
    """
    m = V.shape[0]
    basis = V.copy()
    preferred = np.asarray(preferred if preferred is not None else [], dtype=int)
    out = []
    for _ in range(count):
        resid = np.eye(m, dtype=np.complex128) - basis @ basis.conj().T
        norms = np.linalg.norm(resid, axis=0)
        if preferred.size and norms[preferred].max() > 1 / np.sqrt(2):
            pick = preferred[np.argmax(norms[preferred])]
        else:
            pick = int(np.argmax(norms))
        v = resid[:, pick]
        v = v - basis @ (basis.conj().T @ v)
        v = v / np.linalg.norm(v)
        out.append(v)
        basis = np.column_stack([basis, v])
    if not out:
        return np.zeros((m, 0), dtype=np.complex128)
    return np.column_stack(out)


def complete_to_unitary(V, tol: float = 1e-10) -> np.ndarray:
    """Extend an ``m x k`` isometry to an ``m x m`` unitary.

    The first ``k`` columns of the result are exactly the columns of ``V``.
    """
    V = as_matrix(V)
    m, k = V.shape
    if k > m:
        raise ValueError(f"not an isometry: {m}x{k} has more columns than rows")
    ok, res = is_isometry(V, tol)
    if not ok:
        raise ValueError(f"not an isometry: residual {res:.3e} exceeds {tol:.1e}")
    return np.column_stack([V, _orthonormal_complement(V, m - k)])


def kron(A, B) -> np.ndarray:
    """Kronecker product, entry ``(i*rB + p, j*cB + q) = A[i, j] * B[p, q]``."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    rA, cA = A.shape
    rB, cB = B.shape
    return (A[:, None, :, None] * B[None, :, None, :]).reshape(rA * rB, cA * cB)


def exp_minus_iG(G, tol: float = 1e-12) -> np.ndarray:
    """Unitary ``exp(-iG)`` for Hermitian ``G`` via its eigendecomposition."""
    G = as_matrix(G, "G")
    if G.shape[0] != G.shape[1]:
        raise ValueError(f"generator must be square, got {G.shape}")
    scale = max(1.0, float(np.abs(G).max(initial=0.0)))
    if np.abs(G - G.conj().T).max(initial=0.0) > tol * scale:
        raise ValueError("generator is not Hermitian")
    w, Q = np.linalg.eigh((G + G.conj().T) / 2)
    return (Q * np.exp(-1j * w)) @ Q.conj().T
