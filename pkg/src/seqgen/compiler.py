"""Compile matrix-product descriptions into sequences of isometries.

A :class:`Recipe` step ``k`` is a ``(2 D_k) x D_{k-1}`` matrix whose row
``i * D_k + alpha`` maps ancilla level ``beta`` to ancilla level ``alpha`` with
the freshly emitted qubit in state ``i``: the stacked pair ``[V^0; V^1]``.

:func:`compile_mps` sweeps from the last site to the first.  The final-state
bra is folded into the last site and split by SVD into an isometry times a
remainder; every earlier site is multiplied by the running remainder and split
the same way.  The last remainder applied to the initial boundary vector gives
the initial ancilla state.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import (
    DEFAULT_RANK_TOL,
    _orthonormal_complement,
    as_matrix,
    is_isometry,
    isometry_residual,
    svd,
)
from .mps import MPSState, StateVector, state_to_mps

logger = logging.getLogger(__name__)


class CompileError(ValueError):
    """Raised when the sweep cannot continue; ``step`` is the 1-based site."""

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


@dataclass
class Recipe:
    isometries: list
    phi_I: np.ndarray
    phi_F_expected: Optional[np.ndarray] = None
    norm: float = 1.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.isometries = [as_matrix(V, f"step {k}") for k, V in enumerate(self.isometries, 1)]
        self.phi_I = np.asarray(self.phi_I, dtype=np.complex128).reshape(-1)
        if self.phi_F_expected is not None:
            self.phi_F_expected = np.asarray(self.phi_F_expected, dtype=np.complex128).reshape(-1)
        self.check_shapes()

    @property
    def n(self) -> int:
        return len(self.isometries)

    @property
    def dims(self) -> list[int]:
        """Ancilla dimension before the first step and after each step."""
        return [self.phi_I.size] + [V.shape[0] // 2 for V in self.isometries]

    @property
    def shapes(self) -> list[tuple[int, int]]:
        return [V.shape for V in self.isometries]

    def check_shapes(self) -> None:
        prev = self.phi_I.size
        for k, V in enumerate(self.isometries, 1):
            rows, cols = V.shape
            if rows % 2:
                raise ValueError(f"step {k}: row count {rows} is odd")
            if cols != prev:
                raise ValueError(
                    f"step {k}: shape mismatch, takes ancilla dim {cols} but receives {prev}"
                )
            prev = rows // 2
        if self.phi_F_expected is not None and self.phi_F_expected.size != prev:
            raise ValueError(
                f"phi_F_expected has dim {self.phi_F_expected.size}, final ancilla dim {prev}"
            )

    def isometry_residuals(self) -> list[float]:
        return [isometry_residual(V) for V in self.isometries]


@dataclass(frozen=True)
class TraceStep:
    """One split of the sweep: ``lhs = isometry @ remainder`` up to ``residual``."""

    step: int
    remainder: np.ndarray
    shape: tuple
    rank: int
    residual: float


@dataclass
class CompilerTrace:
    steps: list = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((s.residual for s in self.steps), default=0.0)

    @property
    def ranks(self) -> list[int]:
        return [s.rank for s in sorted(self.steps, key=lambda s: s.step)]


def _stack(V0: np.ndarray, V1: np.ndarray) -> np.ndarray:
    return np.concatenate([V0, V1], axis=0)


def compile_mps(m: MPSState, rank_tol: float = DEFAULT_RANK_TOL):
    """Turn an arbitrary MPS into isometric steps; returns ``(Recipe, CompilerTrace)``.

    The trace records every remainder ``M_[k]`` together with the residual of
    ``(M_[k] (x) 1_2) V~_[k-1] = V'_[k-1] M_[k-1]`` (and of the first split of
    the folded last site).  Ranks follow the numerical rank of each SVD, so
    degenerate inputs give smaller ancillas.
    """
    n = m.n
    trace = CompilerTrace()
    isometries: list = [None] * n

    last = m.tensors[-1]
    lhs = np.stack([m.phi_F.conj() @ last[0], m.phi_F.conj() @ last[1]])
    for k in range(n, 0, -1):
        try:
            dec = svd(lhs, rank_tol)
        except ValueError as exc:
            raise CompileError(f"numerical rank collapsed ({exc})", step=k) from exc
        V, M = dec.U, dec.sigma[:, None] * dec.Wdag
        residual = float(np.linalg.norm(lhs - V @ M, 2))
        isometries[k - 1] = V
        trace.steps.append(TraceStep(k, M, V.shape, dec.rank, residual))
        if k > 1:
            t = m.tensors[k - 2]
            lhs = _stack(M @ t[0], M @ t[1])

    phi = M @ m.phi_I
    norm = float(np.linalg.norm(phi))
    if norm == 0 or not np.isfinite(norm):
        raise CompileError("target state has zero norm")
    trace.steps.reverse()
    recipe = Recipe(
        isometries,
        phi_I=phi / norm,
        phi_F_expected=np.ones(1),
        norm=norm,
        metadata={"generator": "compile_mps", "rank_tol": rank_tol},
    )
    logger.debug("compiled %d steps, dims %s", n, recipe.dims)
    return recipe, trace


def compile_state(psi: StateVector, rank_tol: float = DEFAULT_RANK_TOL):
    """Compile a normalized state; the ancilla needs the largest Schmidt rank."""
    if not psi.normalized:
        raise ValueError("compile_state expects a normalized state")
    recipe, trace = compile_mps(state_to_mps(psi, rank_tol), rank_tol)
    recipe.metadata["generator"] = "compile_state"
    return recipe, trace


def dimension_schedule(n: int, D: int) -> list[tuple[int, int]]:
    """Generic step shapes for a bond-``D`` MPS, listed for steps ``1..n``.

    Step ``n - k`` has shape ``(2 min(D, 2**k), min(D, 2**(k+1)))``.
    """
    if n < 1 or D < 1:
        raise ValueError("dimension_schedule needs n >= 1 and D >= 1")
    return [(2 * min(D, 2**k), min(D, 2 ** (k + 1))) for k in range(n - 1, -1, -1)]


def embed_isometry(V, D: int) -> np.ndarray:
    """Embed a step isometry into a ``(2D) x D`` isometry.

    ``V`` is read in step layout (``rows = 2 D_k``): the block for emitted value
    ``i`` lands on ancilla levels ``0..D_k-1`` of block ``i``, so ``V``'s action on
    its original columns is unchanged.  The extra columns are orthonormal and
    use the unused ancilla levels whenever those suffice.
    """
    V = as_matrix(V)
    rows, cols = V.shape
    if rows % 2:
        raise ValueError(f"step matrix must have an even row count, got {rows}")
    d_out = rows // 2
    if d_out > D or cols > D:
        raise ValueError(f"cannot embed a {rows}x{cols} step into {2 * D}x{D}")
    ok, res = is_isometry(V)
    if not ok:
        raise ValueError(f"not an isometry: residual {res:.3e}")
    E = np.zeros((2 * D, cols), dtype=np.complex128)
    E[:d_out] = V[:d_out]
    E[D : D + d_out] = V[d_out:]
    spare = [i * D + a for i in (0, 1) for a in range(d_out, D)]
    return np.column_stack([E, _orthonormal_complement(E, D - cols, preferred=spare)])


def embed_recipe(recipe: Recipe, D: Optional[int] = None) -> Recipe:
    """Run every step on a fixed ``D``-level ancilla (default: the largest needed)."""
    D = max(recipe.dims) if D is None else D
    phi_I = np.zeros(D, dtype=np.complex128)
    phi_I[: recipe.phi_I.size] = recipe.phi_I
    phi_F = None
    if recipe.phi_F_expected is not None:
        phi_F = np.zeros(D, dtype=np.complex128)
        phi_F[: recipe.phi_F_expected.size] = recipe.phi_F_expected
    return Recipe(
        [embed_isometry(V, D) for V in recipe.isometries],
        phi_I=phi_I,
        phi_F_expected=phi_F,
        norm=recipe.norm,
        metadata={**recipe.metadata, "embedded_dim": D},
    )

