"""Qubit state vectors and open-boundary matrix-product states.

Bit convention (used everywhere in the package): the basis index of a
computational state is ``b = sum_k i_k * 2**(k-1)`` where ``i_k`` is the k-th
*emitted* qubit.  The first qubit produced by a sequential source is the
least significant bit.

An :class:`MPSState` stores, for every site ``k = 1..n``, an array of shape
``(2, D_k, D_{k-1})`` holding the pair ``(V^0_[k], V^1_[k])``.  The amplitude of
``|i_n ... i_1>`` is ``<phi_F| V^{i_n}_[n] ... V^{i_1}_[1] |phi_I>`` where the
bra conjugates ``phi_F``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import DEFAULT_RANK_TOL, svd

NORM_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    """Pure n-qubit state; ``amps`` has length ``2**n``.

    ``normalized=True`` (the default) asserts unit norm within ``1e-10``.
    Pass ``normalized=False`` to carry an unnormalized vector explicitly.
    """

    amps: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size < 2 or amps.size & (amps.size - 1):
            raise ValueError(f"state length must be 2**n with n >= 1, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state has non-finite amplitudes")
        if self.normalized and abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ValueError(
                f"state is not normalized (norm {np.linalg.norm(amps):.12g}); "
                "pass normalized=False to allow this"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def n(self) -> int:
        return self.amps.size.bit_length() - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalize(self) -> "StateVector":
        nrm = self.norm
        if nrm == 0:
            raise ValueError("zero-norm state cannot be normalized")
        return StateVector(self.amps / nrm)

    @classmethod
    def basis(cls, bits: Sequence[int]) -> "StateVector":
        """Product state with ``bits[k-1]`` the value of the k-th emitted qubit."""
        amps = np.zeros(2 ** len(bits), dtype=np.complex128)
        amps[sum(int(b) << k for k, b in enumerate(bits))] = 1.0
        return cls(amps)


def fidelity(a: StateVector, b: StateVector) -> float:
    """Overlap modulus ``|<a|b>| / (|a| |b|)``; insensitive to global phase."""
    if a.amps.size != b.amps.size:
        raise ValueError(f"size mismatch: {a.n} vs {b.n} qubits")
    na, nb = a.norm, b.norm
    if na == 0 or nb == 0:
        raise ValueError("fidelity undefined for a zero vector")
    return float(min(1.0, abs(np.vdot(a.amps, b.amps)) / (na * nb)))


@dataclass(frozen=True)
class MPSState:
    tensors: tuple
    phi_I: np.ndarray
    phi_F: np.ndarray = field(default=None)

    def __post_init__(self):
        tensors = tuple(np.asarray(t, dtype=np.complex128) for t in self.tensors)
        if not tensors:
            raise ValueError("an MPS needs at least one site")
        phi_I = np.asarray(self.phi_I, dtype=np.complex128).reshape(-1)
        phi_F = (
            np.ones(1, dtype=np.complex128)
            if self.phi_F is None
            else np.asarray(self.phi_F, dtype=np.complex128).reshape(-1)
        )
        prev = phi_I.size
        for k, t in enumerate(tensors, start=1):
            if t.ndim != 3 or t.shape[0] != 2:
                raise ValueError(f"site {k}: expected shape (2, D_k, D_k-1), got {t.shape}")
            if t.shape[2] != prev:
                raise ValueError(
                    f"dimension mismatch at site {k}: expects D_{k-1}={t.shape[2]}, "
                    f"previous bond has {prev}"
                )
            if min(t.shape) < 1:
                raise ValueError(f"site {k}: empty bond")
            prev = t.shape[1]
        if phi_F.size != prev:
            raise ValueError(f"dimension mismatch: phi_F has {phi_F.size}, last bond {prev}")
        object.__setattr__(self, "tensors", tensors)
        object.__setattr__(self, "phi_I", phi_I)
        object.__setattr__(self, "phi_F", phi_F)

    @property
    def n(self) -> int:
        return len(self.tensors)

    def site_matrix(self, k: int) -> np.ndarray:
        """Site ``k`` (1-based) stacked as ``[V^0; V^1]``, row ``i*D_k + alpha``."""
        t = self.tensors[k - 1]
        return t.reshape(2 * t.shape[1], t.shape[2])


def bond_dimensions(m: MPSState) -> list[int]:
    """``[D_0, D_1, ..., D_n]``."""
    return [m.phi_I.size] + [t.shape[1] for t in m.tensors]


def mps_evaluate(m: MPSState) -> StateVector:
    """Contract the MPS into a dense (generally unnormalized) state vector.

    The contraction is a single left-to-right sweep: ``W[alpha, b]`` holds the
    partial products applied to ``phi_I`` for every prefix ``b`` of emitted bits.
    """
    W = m.phi_I.reshape(-1, 1)
    for t in m.tensors:
        # new[alpha', i * 2**k + b] = sum_alpha V^i[alpha', alpha] W[alpha, b]
        W = np.concatenate([t[0] @ W, t[1] @ W], axis=1)
    return StateVector(m.phi_F.conj() @ W, normalized=False)


def state_to_mps(psi: StateVector, rank_tol: float = DEFAULT_RANK_TOL) -> MPSState:
    """Exact MPS of ``psi`` by successive SVDs from the last emitted qubit down.

    Bond ``D_k`` equals the numerical Schmidt rank between qubits ``1..k`` and
    ``k+1..n``; ``D_0 = D_n = 1`` and the norm of ``psi`` ends up in ``phi_I``.
    """
    if psi.normalized is False and psi.norm == 0:
        raise ValueError("zero-norm state has no MPS")
    n = psi.n
    # rows: (bond to the left-emitted side, i_k); columns: remaining lower bits
    R = psi.amps.reshape(1, -1)
    tensors = []
    for k in range(n, 0, -1):
        r = R.shape[0]
        R = R.reshape(2 * r, 2 ** (k - 1))
        dec = svd(R, rank_tol)
        # U[beta * 2 + i, gamma] = V^i_[k][beta, gamma]
        tensors.append(dec.U.reshape(r, 2, dec.rank).transpose(1, 0, 2))
        R = dec.sigma[:, None] * dec.Wdag
    tensors.reverse()
    return MPSState(tuple(tensors), phi_I=R.reshape(-1), phi_F=np.ones(1))


def random_mps(n: int, D: int, seed: int = 0) -> MPSState:
    """Random non-isometric MPS with every bond (boundaries included) equal to ``D``.

    Entries are i.i.d. complex Gaussians of variance ``1/(2D)`` so the norm of
    the contracted state stays of order one.
    """
    if n < 1 or D < 1:
        raise ValueError("random_mps needs n >= 1 and D >= 1")
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(4 * D)

    def gauss(*shape):
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    tensors = tuple(gauss(2, D, D) for _ in range(n))
    return MPSState(tensors, phi_I=gauss(D) * np.sqrt(2 * D), phi_F=gauss(D) * np.sqrt(2 * D))


def schmidt_ranks(psi: StateVector, rank_tol: float = DEFAULT_RANK_TOL) -> list[int]:
    """Rank of the ``2**(n-k) x 2**k`` amplitude matrix at every cut ``k = 0..n``.

    Independent of :func:`state_to_mps`: each cut is decomposed from scratch.
    """
    n = psi.n
    ranks = []
    for k in range(n + 1):
        s = np.linalg.svd(psi.amps.reshape(2 ** (n - k), 2**k), compute_uv=False)
        ranks.append(int(np.sum(s > rank_tol * s[0])))
    return ranks
