"""Dense simulation of an ancilla emitting qubits one step at a time."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .compiler import Recipe
from .mps import StateVector, fidelity

MAX_QUBITS = 16
MAX_ANCILLA = 16


class DecouplingError(ValueError):
    """The ancilla is still entangled with the emitted qubits."""

    def __init__(self, spectrum, tol):
        self.spectrum = np.asarray(spectrum)
        super().__init__(
            f"ancilla not decoupled: second Schmidt coefficient "
            f"{self.spectrum[1]:.3e} >= {tol:.1e} (spectrum {np.round(self.spectrum[:4], 6)})"
        )


class StepError(ValueError):
    def __init__(self, message: str, step: int):
        super().__init__(f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class JointState:
    """Ancilla plus emitted register; ``amps[alpha * 2**emitted + b]``."""

    ancilla_dim: int
    emitted: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != self.ancilla_dim * 2**self.emitted:
            raise ValueError(
                f"joint state length {amps.size} != {self.ancilla_dim} * 2**{self.emitted}"
            )
        object.__setattr__(self, "amps", amps)

    def matrix(self) -> np.ndarray:
        """Amplitudes as an ``ancilla_dim x 2**emitted`` matrix."""
        return self.amps.reshape(self.ancilla_dim, 2**self.emitted)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def apply_step(state: JointState, V: np.ndarray) -> JointState:
    """Apply one ``(2 D') x D`` step; the new qubit becomes the next bit."""
    D_out = V.shape[0] // 2
    X = V @ state.matrix()
    # rows of X are (i, alpha'); move i next to the emitted bits as the top bit
    amps = X.reshape(2, D_out, -1).transpose(1, 0, 2)
    return JointState(D_out, state.emitted + 1, amps.reshape(-1))


def run_recipe(recipe: Recipe, history: bool = False):
    """Simulate the whole recipe starting from ``recipe.phi_I``.

    With ``history=True`` a list of the joint state after every step is
    returned (entry 0 is the initial ancilla).
    """
    if recipe.n > MAX_QUBITS:
        raise ValueError(f"simulation capped at {MAX_QUBITS} qubits, recipe has {recipe.n}")
    if max(recipe.dims) > MAX_ANCILLA:
        raise ValueError(f"simulation capped at ancilla dim {MAX_ANCILLA}, got {max(recipe.dims)}")
    state = JointState(recipe.phi_I.size, 0, recipe.phi_I)
    states = [state]
    for k, V in enumerate(recipe.isometries, 1):
        if V.ndim != 2 or V.shape[0] % 2 or V.shape[1] != state.ancilla_dim:
            raise StepError(
                f"shape mismatch: {V.shape} cannot act on ancilla dim {state.ancilla_dim}", k
            )
        state = apply_step(state, V)
        states.append(state)
    return states if history else state


def schmidt_spectrum(s: JointState) -> np.ndarray:
    """Schmidt coefficients across the ancilla / emitted-qubits cut, descending."""
    if s.emitted < 1:
        raise ValueError("no qubits emitted yet")
    sv = np.linalg.svd(s.matrix(), compute_uv=False)
    nrm = np.linalg.norm(sv)
    return sv / nrm if nrm > 0 else sv


def decoupling_residual(s: JointState) -> float:
    """Second Schmidt coefficient (0 for a one-level ancilla)."""
    spec = schmidt_spectrum(s)
    return float(spec[1]) if spec.size > 1 else 0.0


def decouple(s: JointState, tol: float = 1e-10):
    """Split a product joint state into ``(ancilla vector, StateVector)``."""
    spec = schmidt_spectrum(s)
    if spec.size > 1 and spec[1] >= tol:
        raise DecouplingError(spec, tol)
    U, sv, Wdag = np.linalg.svd(s.matrix(), full_matrices=False)
    anc = U[:, 0]
    lead = anc[np.argmax(np.abs(anc) > 1e-12)]
    phase = lead / abs(lead)
    qubits = sv[0] * Wdag[0] * phase
    return anc / phase, StateVector(qubits / np.linalg.norm(qubits))


def output_state(recipe: Recipe, tol: float = 1e-10) -> StateVector:
    """Simulate ``recipe`` and return the emitted register after decoupling."""
    return decouple(run_recipe(recipe), tol)[1]


@dataclass
class VerificationReport:
    isometry_residuals: list
    fidelity: float
    decoupling_residual: float
    tol: float
    ancilla_final: Optional[np.ndarray] = None
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [
            f"steps: {len(self.isometry_residuals)}",
            f"max isometry residual: {max(self.isometry_residuals, default=0.0):.3e}",
            f"decoupling residual: {self.decoupling_residual:.3e}",
            f"fidelity: {self.fidelity:.15f}",
            f"result: {'PASS' if self.passed else 'FAIL'}",
        ]
        lines += [f"  - {f}" for f in self.failures]
        return "\n".join(lines)


def verify_recipe(recipe: Recipe, target: Optional[StateVector] = None, tol: float = 1e-10):
    """Check every step's isometry residual, the final decoupling and the fidelity.

    Fidelity is compared against ``1 - tol`` when ``target`` is given.
    """
    residuals = recipe.isometry_residuals()
    failures = [
        f"step {k}: isometry residual {r:.3e} exceeds {tol:.1e}"
        for k, r in enumerate(residuals, 1)
        if r > tol
    ]
    final = run_recipe(recipe)
    dec = decoupling_residual(final)
    if dec >= tol:
        failures.append(f"ancilla not decoupled: second Schmidt coefficient {dec:.3e}")
    U, sv, Wdag = np.linalg.svd(final.matrix(), full_matrices=False)
    qubits = StateVector(sv[0] * Wdag[0], normalized=False)
    fid = float("nan")
    if target is not None:
        if target.n != recipe.n:
            raise ValueError(f"shape mismatch: recipe emits {recipe.n} qubits, target has {target.n}")
        fid = fidelity(qubits, target)
        if fid < 1 - tol:
            failures.append(f"fidelity {fid:.12f} below {1 - tol:.12f}")
    return VerificationReport(residuals, fid, dec, tol, ancilla_final=U[:, 0], failures=failures)
