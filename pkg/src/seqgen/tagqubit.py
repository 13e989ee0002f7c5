"""Isometries from a 2D-level emitter with a tag qubit.

The atom's ``2 d'`` levels are indexed ``alpha' * 2 + t`` where ``t`` is the tag
(``t = 1`` for the ``a`` manifold, ``t = 0`` for ``b``).  Together with the
time-bin qubit the layout is ``alpha' * 4 + t * 2 + b``.  Step isometries use
the recipe layout ``b * d' + alpha'``.
"""

from __future__ import annotations

import numpy as np

from .linalg import as_matrix, complete_to_unitary, exp_minus_iG, is_isometry, is_unitary


def d_standard_map(d_prime: int) -> np.ndarray:
    """Permutation unitary exchanging the tag and the time-bin qubit.

    On the empty time bin this is the emission map ``|phi>|1>_T|0>_B ->
    |phi>|0>_T|1>_B`` (and ``|0>_T|0>_B`` is left alone); the ``b = 1`` inputs are
    completed as the same swap.
    """
    if d_prime < 1:
        raise ValueError("d_prime must be >= 1")
    dim = 4 * d_prime
    T = np.zeros((dim, dim), dtype=np.complex128)
    for a in range(d_prime):
        for t in (0, 1):
            for b in (0, 1):
                T[a * 4 + b * 2 + t, a * 4 + t * 2 + b] = 1.0
    return T


def iso_from_atomic_unitary(U_A, tol: float = 1e-10) -> np.ndarray:
    """Isometry ``V|phi> = <0|_T T (U_A (|phi>|0>_T) (x) |0>_B)`` in recipe layout."""
    U_A = as_matrix(U_A, "U_A")
    if U_A.shape[0] % 2 or not is_unitary(U_A, tol):
        raise ValueError("U_A must be a unitary on 2*d' levels")
    d = U_A.shape[0] // 2
    eye_a = np.eye(d)
    ket0 = np.array([[1.0], [0.0]])
    with_tag = np.kron(eye_a, ket0)                 # H_A' -> H_A' (x) H_T
    with_bin = np.kron(np.eye(2 * d), ket0)         # H_A -> H_A (x) H_B
    drop_tag = np.kron(eye_a, np.kron(ket0.T, np.eye(2)))  # <0|_T
    V = drop_tag @ d_standard_map(d) @ with_bin @ U_A @ with_tag
    # (alpha', b) -> b * d' + alpha'
    return V.reshape(d, 2, d).transpose(1, 0, 2).reshape(2 * d, d)


def atomic_unitary_from_iso(V, tol: float = 1e-10) -> np.ndarray:
    """An atomic unitary ``U_A`` with ``iso_from_atomic_unitary(U_A) == V``.

    ``V``'s columns become the ``t = 0`` input columns of ``U_A``; the ``t = 1``
    columns complete it to a unitary.
    """
    V = as_matrix(V)
    rows, d = V.shape
    if rows != 2 * d:
        raise ValueError(f"expected a (2d') x d' isometry, got {rows}x{d}")
    ok, res = is_isometry(V, tol)
    if not ok:
        raise ValueError(f"not an isometry: residual {res:.3e}")
    # recipe rows b * d' + alpha' -> atom rows alpha' * 2 + b
    W = V.reshape(2, d, d).transpose(1, 0, 2).reshape(2 * d, d)
    C = complete_to_unitary(W, tol)
    U_A = np.empty_like(C)
    U_A[:, 0::2] = C[:, :d]
    U_A[:, 1::2] = C[:, d:]
    return U_A


def sqrt_swap() -> np.ndarray:
    """``exp(-iG)`` with ``G = (pi/4)(|a,0><b,1| + h.c.)``.

    Basis order is ``|a,0>, |a,1>, |b,0>, |b,1>``.
    """
    G = np.zeros((4, 4), dtype=np.complex128)
    G[0, 3] = G[3, 0] = np.pi / 4
    return exp_minus_iG(G)
