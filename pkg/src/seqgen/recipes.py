"""Three-level-atom protocols for W, GHZ and cluster states.

The atom has levels ``a, b1, b2`` (indices 0, 1, 2).  Each step applies an
atomic unitary ``U`` and then the emission map ``M_AB``, which turns ``|a>``
into ``|b1>`` plus a photon and leaves ``b1``/``b2`` with an empty time bin.
In operator products the rightmost factor acts first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Sequence

import numpy as np

from .compiler import Recipe
from .mps import StateVector


class Level(IntEnum):
    a = 0
    b1 = 1
    b2 = 2


@dataclass(frozen=True)
class RecipeParams:
    n: int
    theta: Sequence[float] = field(default_factory=tuple)
    phi: Sequence[float] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        object.__setattr__(self, "phi", tuple(float(p) for p in self.phi))
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def require(self, count: int, family: str) -> None:
        if len(self.theta) != count or len(self.phi) != count:
            raise ValueError(
                f"{family} with n={self.n} needs {count} theta and {count} phi values, "
                f"got {len(self.theta)} and {len(self.phi)}"
            )


def _ket(level: int) -> np.ndarray:
    v = np.zeros(3, dtype=np.complex128)
    v[level] = 1.0
    return v


def m_ab() -> np.ndarray:
    """Emission map as a 6x3 step (row ``i * 3 + level``)."""
    M = np.zeros((6, 3), dtype=np.complex128)
    M[1 * 3 + Level.b1, Level.a] = 1.0
    M[0 * 3 + Level.b1, Level.b1] = 1.0
    M[0 * 3 + Level.b2, Level.b2] = 1.0
    return M


def u_klm(k: int, l: int, m: int, Phi: float, Theta: float) -> np.ndarray:
    """Rotation between levels ``k`` and ``l`` with ``m`` untouched."""
    if sorted((int(k), int(l), int(m))) != [0, 1, 2]:
        raise ValueError(f"levels must be a permutation of a, b1, b2; got {(k, l, m)}")
    c, s = np.cos(Theta), np.sin(Theta)
    U = np.zeros((3, 3), dtype=np.complex128)
    U[k, k] = c
    U[l, l] = c
    U[k, l] = np.exp(1j * Phi) * s
    U[l, k] = -np.exp(-1j * Phi) * s
    U[m, m] = 1.0
    return U


def _steps(unitaries) -> list:
    M = m_ab()
    return [M @ U for U in unitaries]


A, B1, B2 = Level.a, Level.b1, Level.b2


def w_recipe(p: RecipeParams) -> Recipe:
    """W-type state; ``theta``/``phi`` hold ``n - 1`` angles each."""
    p.require(p.n - 1, "W recipe")
    us = [u_klm(A, B2, B1, ph, th) for th, ph in zip(p.theta, p.phi)]
    us.append(u_klm(A, B2, B1, 0.0, np.pi / 2))
    return Recipe(
        _steps(us),
        phi_I=_ket(B2),
        phi_F_expected=_ket(B1),
        metadata={"generator": "w", "parameters": _params(p)},
    )


def w_closed_form(p: RecipeParams) -> StateVector:
    """Single-excitation state: qubit ``j`` carries the photon with amplitude
    ``cos(T_1)...cos(T_{j-1}) e^{i P_j} sin(T_j)``; the last qubit gets the
    leftover product of cosines."""
    p.require(p.n - 1, "W state")
    amps = np.zeros(2**p.n, dtype=np.complex128)
    carry = 1.0 + 0j
    for j, (th, ph) in enumerate(zip(p.theta, p.phi)):
        amps[1 << j] = carry * np.exp(1j * ph) * np.sin(th)
        carry *= np.cos(th)
    amps[1 << (p.n - 1)] = carry
    return StateVector(amps)


def ghz_recipe(n: int, Phi1: float, Theta1: float) -> Recipe:
    if n < 2:
        raise ValueError("GHZ recipe needs n >= 2")
    us = [u_klm(A, B2, B1, Phi1, Theta1)]
    us += [u_klm(A, B1, B2, 0.0, np.pi / 2)] * (n - 2)
    us.append(u_klm(B1, B2, A, 0.0, np.pi / 2) @ u_klm(A, B1, B2, 0.0, np.pi / 2))
    return Recipe(
        _steps(us),
        phi_I=_ket(A),
        phi_F_expected=_ket(B1),
        metadata={"generator": "ghz", "parameters": {"n": n, "theta": [Theta1], "phi": [Phi1]}},
    )


def ghz_closed_form(n: int, Phi1: float, Theta1: float) -> StateVector:
    """``cos(T)|1...1> - e^{-iP} sin(T)|0...0>``, obtained by tracing the GHZ steps."""
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[-1] = np.cos(Theta1)
    amps[0] = -np.exp(-1j * Phi1) * np.sin(Theta1)
    return StateVector(amps)


def cluster_recipe(p: RecipeParams) -> Recipe:
    """Cluster-type chain; ``theta``/``phi`` hold ``n`` angles each."""
    p.require(p.n, "cluster recipe")
    swap_ab1 = u_klm(A, B1, B2, 0.0, np.pi / 2)
    us = [u_klm(A, B2, B1, ph, th) @ swap_ab1 for th, ph in zip(p.theta[:-1], p.phi[:-1])]
    us.append(
        u_klm(A, B1, B2, p.phi[-1], p.theta[-1]) @ u_klm(B1, B2, A, 0.0, np.pi / 2) @ swap_ab1
    )
    return Recipe(
        _steps(us),
        phi_I=_ket(B2),
        phi_F_expected=_ket(B1),
        metadata={"generator": "cluster", "parameters": _params(p)},
    )


def _neighbour_ops(theta: float, phi: float):
    """Diagonal operators on the previous qubit for the new qubit in ``|0>``/``|1>``."""
    c, s = np.cos(theta), np.sin(theta)
    O0 = np.diag([c, -np.exp(-1j * phi) * s])
    O1 = np.diag([np.exp(1j * phi) * s, c])
    return O0, O1


def cluster_closed_form(p: RecipeParams) -> StateVector:
    """Product over qubits of ``O^0 |0>_i + O^1 |1>_i`` with ``O`` acting on qubit ``i-1``.

    The factors are applied in emission order: factor ``i`` acts with its
    operators on the already built register (qubit ``i-1`` is the top bit) and
    appends qubit ``i``.  Qubit 1 uses the scalars ``cos T_1`` and
    ``e^{i P_1} sin T_1``.
    """
    p.require(p.n, "cluster state")
    psi = np.array([np.cos(p.theta[0]), np.exp(1j * p.phi[0]) * np.sin(p.theta[0])])
    for k in range(1, p.n):
        O0, O1 = _neighbour_ops(p.theta[k], p.phi[k])
        # psi has k qubits; qubit k (the previous one) is the top bit
        parts = psi.reshape(2, 2 ** (k - 1))
        psi = np.concatenate([(O0 @ parts).reshape(-1), (O1 @ parts).reshape(-1)])
    return StateVector(psi)


def cluster_standard(n: int) -> StateVector:
    """``2^{-n/2} prod_i (Z_{i-1}|0>_i + |1>_i)`` with ``Z_0 = 1``, by direct expansion."""
    if n < 1:
        raise ValueError("n must be >= 1")
    amps = np.empty(2**n)
    for b in range(2**n):
        sign = 1
        for i in range(1, n):
            prev, cur = (b >> (i - 1)) & 1, (b >> i) & 1
            if cur == 0 and prev == 1:
                sign = -sign
        amps[b] = sign
    return StateVector(amps / 2 ** (n / 2))


def _params(p: RecipeParams) -> dict:
    return {"n": p.n, "theta": list(p.theta), "phi": list(p.phi)}
