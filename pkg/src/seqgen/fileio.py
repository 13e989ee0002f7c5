"""JSON interchange for states, MPS and recipes.

Complex numbers are ``[re, im]`` pairs; matrices are lists of rows.  Floats go
through ``json`` with ``repr`` precision, so round trips are bit-exact.  Amplitude
index ``b`` follows the package bit convention (first emitted qubit = bit 0).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .compiler import Recipe
from .mps import NORM_TOL, MPSState, StateVector


class FormatError(ValueError):
    """Input file is unreadable or violates its schema."""


def _c2list(a) -> list:
    a = np.asarray(a, dtype=np.complex128)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _list2c(x, ndim: int, what: str) -> np.ndarray:
    try:
        arr = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what}: expected nested [re, im] pairs") from exc
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise FormatError(f"{what}: expected {ndim}-d array of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FormatError(f"{what}: non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def _read(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be an object")
    return data


def _write(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=1) + "\n")


def state_to_dict(psi: StateVector) -> dict:
    return {"n": psi.n, "amps": _c2list(psi.amps), "normalized": bool(psi.normalized)}


def state_from_dict(data: dict) -> StateVector:
    """Parse a state object.

    A missing ``"normalized"`` key means normalized.  ``"normalized": false``
    accepts any nonzero vector and rescales it to unit norm.
    """
    if "n" not in data or "amps" not in data:
        raise FormatError("state file needs 'n' and 'amps'")
    n = data["n"]
    amps = _list2c(data["amps"], 1, "amps")
    if not isinstance(n, int) or n < 1 or amps.size != 2**n:
        raise FormatError(f"state file: n={n!r} but {amps.size} amplitudes")
    nrm = np.linalg.norm(amps)
    if data.get("normalized", True):
        if abs(nrm - 1) > NORM_TOL:
            raise FormatError(
                f"state is not normalized (norm {nrm:.12g}); set \"normalized\": false to rescale"
            )
        return StateVector(amps)
    if nrm == 0:
        raise FormatError("state has zero norm")
    return StateVector(amps / nrm)


def mps_to_dict(m: MPSState) -> dict:
    return {
        "n": m.n,
        "dims": [m.phi_I.size] + [t.shape[1] for t in m.tensors],
        "tensors": [[_c2list(t[0]), _c2list(t[1])] for t in m.tensors],
        "phi_I": _c2list(m.phi_I),
        "phi_F": _c2list(m.phi_F),
    }


def mps_from_dict(data: dict) -> MPSState:
    try:
        tensors = tuple(
            np.stack([_list2c(v0, 2, f"site {k} V0"), _list2c(v1, 2, f"site {k} V1")])
            for k, (v0, v1) in enumerate(data["tensors"], 1)
        )
        return MPSState(tensors, _list2c(data["phi_I"], 1, "phi_I"), _list2c(data["phi_F"], 1, "phi_F"))
    except KeyError as exc:
        raise FormatError(f"MPS file missing field {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"MPS file: {exc}") from exc


def recipe_to_dict(r: Recipe) -> dict:
    return {
        "n": r.n,
        "dims": r.dims,
        "isometries": [_c2list(V) for V in r.isometries],
        "phi_I": _c2list(r.phi_I),
        "phi_F_expected": None if r.phi_F_expected is None else _c2list(r.phi_F_expected),
        "norm": r.norm,
        "isometry_residuals": r.isometry_residuals(),
        "metadata": {**r.metadata, "tool_version": __version__},
    }


def recipe_from_dict(data: dict) -> Recipe:
    try:
        isos = [_list2c(V, 2, f"isometry {k}") for k, V in enumerate(data["isometries"], 1)]
        phi_F = data.get("phi_F_expected")
        recipe = Recipe(
            isos,
            phi_I=_list2c(data["phi_I"], 1, "phi_I"),
            phi_F_expected=None if phi_F is None else _list2c(phi_F, 1, "phi_F_expected"),
            norm=float(data.get("norm", 1.0)),
            metadata=dict(data.get("metadata", {})),
        )
    except KeyError as exc:
        raise FormatError(f"recipe file missing field {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"recipe file: {exc}") from exc
    if "n" in data and data["n"] != recipe.n:
        raise FormatError(f"recipe file: n={data['n']} but {recipe.n} isometries")
    if "dims" in data and list(data["dims"]) != recipe.dims:
        raise FormatError(f"recipe file: dims {data['dims']} disagree with matrices {recipe.dims}")
    return recipe


def load_state(path) -> StateVector:
    return state_from_dict(_read(path))


def save_state(path, psi: StateVector) -> None:
    _write(path, state_to_dict(psi))


def load_mps(path) -> MPSState:
    return mps_from_dict(_read(path))


def save_mps(path, m: MPSState) -> None:
    _write(path, mps_to_dict(m))


def load_recipe(path) -> Recipe:
    return recipe_from_dict(_read(path))


def save_recipe(path, r: Recipe) -> None:
    _write(path, recipe_to_dict(r))


def load_any(path):
    """A :class:`StateVector` or :class:`MPSState`, chosen by the keys present."""
    data = _read(path)
    return mps_from_dict(data) if "tensors" in data else state_from_dict(data)
