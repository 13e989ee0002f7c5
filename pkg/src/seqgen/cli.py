"""Command-line interface.

Exit codes: 0 success, 1 compile/verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import fileio, recipes
from .compiler import CompileError, compile_mps, compile_state, dimension_schedule
from .mps import MPSState, StateVector, bond_dimensions, fidelity, mps_evaluate, random_mps, state_to_mps
from .simulator import StepError, run_recipe, verify_recipe

OK, FAILED, BAD_INPUT = 0, 1, 2


def _fmt_state(amps: np.ndarray, n: int, cutoff: float = 1e-12) -> str:
    lines = []
    for b in np.flatnonzero(np.abs(amps) > cutoff):
        bits = format(b, f"0{n}b")  # |i_n ... i_1>
        z = amps[b]
        lines.append(f"  |{bits}>  {z.real:+.12f} {z.imag:+.12f}j")
    return "\n".join(lines)


def cmd_compile(args) -> int:
    src = fileio.load_any(args.input)
    if isinstance(src, MPSState):
        recipe, trace = compile_mps(src, args.rank_tol)
        profile = bond_dimensions(src)
    else:
        recipe, trace = compile_state(src, args.rank_tol)
        profile = bond_dimensions(state_to_mps(src, args.rank_tol))
    fileio.save_recipe(args.output, recipe)
    print(f"input bond dimensions: {tuple(profile)}")
    print(f"ancilla dimensions:    {tuple(recipe.dims)}")
    bound = dimension_schedule(recipe.n, max(profile))
    for k, (shape, lim) in enumerate(zip(recipe.shapes, bound), 1):
        print(f"  step {k}: {shape[0]}x{shape[1]}  (bound {lim[0]}x{lim[1]})")
    print(f"max induction residual: {trace.max_residual:.3e}")
    print(f"wrote {args.output}")
    return OK


def _report(recipe, target, tol, out=None) -> int:
    report = verify_recipe(recipe, target, tol)
    final = run_recipe(recipe)
    U, sv, Wdag = np.linalg.svd(final.matrix(), full_matrices=False)
    qubits = sv[0] * Wdag[0]
    qubits = qubits / np.linalg.norm(qubits)
    print(f"emitted state ({recipe.n} qubits, |i_n ... i_1>):")
    print(_fmt_state(qubits, recipe.n))
    print(report.summary())
    if out:
        fileio.save_state(out, StateVector(qubits))
        print(f"wrote {out}")
    return OK if report.passed else FAILED


def cmd_simulate(args) -> int:
    recipe = fileio.load_recipe(args.recipe)
    target = fileio.load_state(args.target) if args.target else None
    return _report(recipe, target, args.tol, args.output)


def cmd_verify(args) -> int:
    recipe = fileio.load_recipe(args.recipe)
    return _report(recipe, fileio.load_state(args.target), args.tol)


def cmd_recipe(args) -> int:
    theta = list(args.theta)
    phi = list(args.phi) if args.phi is not None else [0.0] * len(theta)
    if args.type == "ghz":
        if len(theta) != 1 or len(phi) != 1 or args.n < 2:
            raise fileio.FormatError("ghz needs --n >= 2, one --theta and at most one --phi")
        recipe = recipes.ghz_recipe(args.n, phi[0], theta[0])
        target = recipes.ghz_closed_form(args.n, phi[0], theta[0])
    else:
        params = recipes.RecipeParams(args.n, theta, phi)
        if args.type == "w":
            recipe, target = recipes.w_recipe(params), recipes.w_closed_form(params)
        else:
            recipe, target = recipes.cluster_recipe(params), recipes.cluster_closed_form(params)
    fileio.save_recipe(args.output, recipe)
    print(f"{args.type} recipe: {recipe.n} steps of shape 6x3, wrote {args.output}")
    if args.emit_target:
        fileio.save_state(args.emit_target, target)
        print(f"closed-form target written to {args.emit_target}")
    return OK


def cmd_mps(args) -> int:
    if args.random:
        n, D = args.random
        m = random_mps(n, D, args.seed)
    else:
        if not args.input:
            raise fileio.FormatError("mps needs an input state file or --random N D")
        psi = fileio.load_state(args.input)
        m = state_to_mps(psi, args.rank_tol)
        print(f"round-trip fidelity: {fidelity(mps_evaluate(m), psi):.15f}")
    fileio.save_mps(args.output, m)
    print(f"bond dimensions: {tuple(bond_dimensions(m))}")
    print(f"wrote {args.output}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqgen", description="Compile and simulate sequentially generated qubit states."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="state or MPS file -> recipe file")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--rank-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="run a recipe, optionally against a target")
    p.add_argument("recipe")
    p.add_argument("--target")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("-o", "--output", help="write the emitted state here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check a recipe against a target state")
    p.add_argument("recipe")
    p.add_argument("target")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("recipe", help="built-in W / GHZ / cluster protocols")
    p.add_argument("--type", choices=["w", "ghz", "cluster"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, nargs="*", default=[], help="radians")
    p.add_argument("--phi", type=float, nargs="*", default=None, help="radians; default zeros")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--emit-target", help="also write the closed-form state")
    p.set_defaults(func=cmd_recipe)

    p = sub.add_parser("mps", help="state file -> MPS file (or a random MPS)")
    p.add_argument("input", nargs="?")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--rank-tol", type=float, default=1e-12)
    p.add_argument("--random", type=int, nargs=2, metavar=("N", "D"))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_mps)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except fileio.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (CompileError, StepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except ValueError as exc:
        # parameter-count and shape errors raised while building inputs
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
