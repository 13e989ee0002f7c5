import json

import numpy as np
import pytest

from seqgen import fileio
from seqgen.cli import main
from seqgen.compiler import compile_state, dimension_schedule
from seqgen.mps import StateVector, fidelity, mps_evaluate, random_mps
from seqgen.recipes import ghz_closed_form
from seqgen.simulator import output_state

from conftest import ghz_state, random_state, w_state


@pytest.fixture
def tmp(tmp_path):
    return lambda name: str(tmp_path / name)


def test_state_round_trip_is_exact(rng, tmp):
    psi = random_state(rng, 5)
    fileio.save_state(tmp("s.json"), psi)
    assert np.array_equal(fileio.load_state(tmp("s.json")).amps, psi.amps)


def test_recipe_round_trip_is_exact(rng, tmp):
    recipe, _ = compile_state(random_state(rng, 4))
    fileio.save_recipe(tmp("r.json"), recipe)
    back = fileio.load_recipe(tmp("r.json"))
    assert back.dims == recipe.dims
    assert all(np.array_equal(a, b) for a, b in zip(back.isometries, recipe.isometries))
    assert np.array_equal(back.phi_I, recipe.phi_I)
    data = json.loads(open(tmp("r.json")).read())
    assert data["metadata"]["tool_version"] and len(data["isometry_residuals"]) == 4


def test_mps_round_trip_is_exact(tmp):
    m = random_mps(3, 2, seed=4)
    fileio.save_mps(tmp("m.json"), m)
    back = fileio.load_mps(tmp("m.json"))
    assert np.array_equal(mps_evaluate(back).amps, mps_evaluate(m).amps)


def test_state_file_schema(tmp):
    path = tmp("bad.json")
    open(path, "w").write(json.dumps({"n": 2, "amps": [[1, 0], [0, 0], [0, 0]]}))
    with pytest.raises(fileio.FormatError, match="n=2"):
        fileio.load_state(path)
    open(path, "w").write(json.dumps({"n": 1, "amps": [[3, 0], [4, 0]], "normalized": False}))
    np.testing.assert_allclose(fileio.load_state(path).amps, [0.6, 0.8])


def test_cli_compile_ghz(tmp, capsys):
    fileio.save_state(tmp("ghz.json"), ghz_state(3))
    assert main(["compile", tmp("ghz.json"), "-o", tmp("r.json")]) == 0
    out = capsys.readouterr().out
    assert "(1, 2, 2, 1)" in out
    recipe = fileio.load_recipe(tmp("r.json"))
    assert recipe.dims == [1, 2, 2, 1]
    for shape, bound in zip(recipe.shapes, dimension_schedule(3, 2)):
        assert shape[0] <= bound[0] and shape[1] <= bound[1]
    assert recipe.shapes[1:] == dimension_schedule(3, 2)[1:]


def test_cli_compile_mps_file(tmp):
    assert main(["mps", "--random", "4", "3", "--seed", "9", "-o", tmp("m.json")]) == 0
    assert main(["compile", tmp("m.json"), "-o", tmp("r.json")]) == 0
    recipe = fileio.load_recipe(tmp("r.json"))
    assert recipe.shapes == dimension_schedule(4, 3)
    assert fidelity(output_state(recipe), mps_evaluate(random_mps(4, 3, 9))) >= 1 - 1e-10


def test_cli_compile_input_errors(tmp):
    open(tmp("x.json"), "w").write("{not json")
    assert main(["compile", tmp("x.json"), "-o", tmp("r.json")]) == 2
    open(tmp("u.json"), "w").write(json.dumps({"n": 1, "amps": [[1, 0], [1, 0]]}))
    assert main(["compile", tmp("u.json"), "-o", tmp("r.json")]) == 2


def test_cli_simulate(rng, tmp, capsys):
    psi = random_state(rng, 5)
    fileio.save_state(tmp("t.json"), psi)
    assert main(["compile", tmp("t.json"), "-o", tmp("r.json")]) == 0
    assert main(["simulate", tmp("r.json"), "--target", tmp("t.json"), "-o", tmp("out.json")]) == 0
    assert "PASS" in capsys.readouterr().out
    assert fidelity(fileio.load_state(tmp("out.json")), psi) >= 1 - 1e-10
    assert main(["verify", tmp("r.json"), tmp("t.json")]) == 0


def test_cli_simulate_corrupted(tmp, capsys):
    fileio.save_state(tmp("t.json"), w_state(3))
    main(["compile", tmp("t.json"), "-o", tmp("r.json")])
    data = json.load(open(tmp("r.json")))
    data["isometries"][1] = (2 * np.asarray(data["isometries"][1])).tolist()
    json.dump(data, open(tmp("r.json"), "w"))
    capsys.readouterr()
    assert main(["simulate", tmp("r.json"), "--target", tmp("t.json")]) == 1
    assert "step 2" in capsys.readouterr().out


def test_cli_simulate_missing_file(tmp):
    assert main(["simulate", tmp("nope.json")]) == 2


def test_cli_recipe_ghz(tmp):
    code = main(
        ["recipe", "--type", "ghz", "--n", "4", "--theta", "0.7853981634", "--phi", "0",
         "-o", tmp("g.json"), "--emit-target", tmp("gt.json")]
    )
    assert code == 0
    psi = output_state(fileio.load_recipe(tmp("g.json")))
    assert fidelity(psi, ghz_closed_form(4, 0.0, 0.7853981634)) >= 1 - 1e-10
    assert main(["verify", tmp("g.json"), tmp("gt.json")]) == 0


def test_cli_recipe_w_and_counts(tmp):
    assert main(["recipe", "--type", "w", "--n", "3", "--theta", "0.6", "0.7", "-o", tmp("w.json")]) == 0
    assert main(["recipe", "--type", "w", "--n", "3", "--theta", "0.6", "-o", tmp("w.json")]) == 2
    assert main(["recipe", "--type", "cluster", "--n", "3", "--theta", "1", "-o", tmp("c.json")]) == 2
    args = ["recipe", "--type", "cluster", "--n", "3", "--theta", "1", "1", "1", "-o", tmp("c.json")]
    assert main(args + ["--emit-target", tmp("ct.json")]) == 0
    assert main(["verify", tmp("c.json"), tmp("ct.json")]) == 0


def test_cli_mps(tmp, capsys):
    fileio.save_state(tmp("p.json"), StateVector.basis([1, 0, 1]))
    assert main(["mps", tmp("p.json"), "-o", tmp("m.json")]) == 0
    assert "(1, 1, 1, 1)" in capsys.readouterr().out
    fileio.save_state(tmp("w.json"), w_state(5))
    assert main(["mps", tmp("w.json"), "-o", tmp("m.json")]) == 0
    out = capsys.readouterr().out
    assert "(1, 2, 2, 2, 2, 1)" in out
    m = fileio.load_mps(tmp("m.json"))
    assert fidelity(mps_evaluate(m), w_state(5)) >= 1 - 1e-10


def test_cli_mps_needs_input(tmp):
    assert main(["mps", "-o", tmp("m.json")]) == 2
