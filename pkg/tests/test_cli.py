import json
import math
import os
import subprocess
import sys

import pytest

from crossed_ell1 import serialize as S
from crossed_ell1.cli import main
from crossed_ell1.dynsys import AperiodicOrbitModel
from crossed_ell1.reps import SeqVector, aperiodic_apply


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), (json.loads(err) if err.strip() else None)


@pytest.fixture
def files(tmp_path):
    def w(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return {
        "S": w("S.json", {"backend": "finite_perm", "perm": [1, 2, 0, 4, 3]}),
        "one": w("one.json", {"backend": "finite_perm", "perm": [0]}),
        "aper": w("aper.json", {"backend": "aperiodic_orbit", "window": 64}),
        "rot": w("rot.json", {"backend": "rational_rotation", "p": 1, "q": 3}),
        "dd": w("dd.json", {"coeffs": {"1": {"table": [[1, 0]]}, "-1": {"table": [[1, 0]]}}}),
        "rho": w("rho.json", {"entries": {"0": [1, 0], "1": [0.3, 0]}}),
        "tau": w("tau.json", {"entries": {"2": [4, 0], "-1": [-1, 0]}}),
        "E": w("E.json", {"0": {"arcs": [[0.25, 0.75]]}}),
        "a5": w("a5.json", {"coeffs": {"1": {"table": [[1, 0], [2, 0], [3, 0], [0, 0], [0, 0]]}}}),
        "dir": tmp_path,
    }


def test_orbits(capsys, files):
    assert run(capsys, "orbits", "--system", files["S"])[:2] == (0, [[0, 1, 2], [3, 4]])
    code, out, _ = run(capsys, "orbits", "--system", files["rot"], "--samples", "0,1/6,1/3")
    assert code == 0 and out == [["0", "1/3", "2/3"], ["1/6", "1/2", "5/6"]]


def test_solve_verified(capsys, files):
    code, out, _ = run(capsys, "solve", "--system", files["aper"], "--x", "0", "--rho", files["rho"],
                       "--tau", files["tau"], "--gamma", "0.5")
    assert code == 0 and out["residual_norms"] == [0.0]
    ap = AperiodicOrbitModel()
    a = S.decode_element(ap, out["element"])
    rho = S.decode_seqvector(json.load(open(files["rho"])))
    tau = S.decode_seqvector(json.load(open(files["tau"])))
    assert (aperiodic_apply(ap, 0, a, rho) - tau).norm(1) < 1e-12


def test_spectrum(capsys, files):
    code, out, _ = run(capsys, "spectrum", "--system", files["one"], "--element", files["dd"], "--samples", "256")
    assert code == 0 and len(out) == 256
    assert all(isinstance(v, float) and -2 - 1e-12 <= v <= 2 + 1e-12 for v in out)


def test_rep_matrix_exact(capsys, files):
    exact = '{"coeffs":{"1":{"table":[["1","0"],["2","0"],["3","0"],["0","0"],["0","0"]]}}}'
    code, out, _ = run(capsys, "rep-matrix", "--system", files["S"], "--x", "0", "--lambda", "3/5,4/5",
                       "--element", exact)
    # diag(1, 2, 3) T: the corner entry is f(x) lambda
    assert code == 0 and out[0][2] == ["3/5", "4/5"] and out[1][0] == ["2", "0"]
    code, out, _ = run(capsys, "rep-matrix", "--system", files["S"], "--x", "0", "--lambda", "0.6,0.8",
                       "--element", files["a5"])
    assert out[0][2] == [0.6, 0.8]


def test_ideal_commands(capsys, files):
    code, out, _ = run(capsys, "ideal-member", "--system", files["S"], "--ideal", '{"orbit_of":3,"lambda":[0,1]}',
                       "--element", files["a5"])
    assert code == 0 and out == {"member": True}
    code, out, _ = run(capsys, "radical-witness", "--system", files["S"], "--element", files["a5"])
    assert code == 0 and out["orbit_of"] == 0
    code, out, _ = run(capsys, "inclusion", "--system", files["S"], "--ideal1", '{"orbit_of":0,"lambda":[1,0]}',
                       "--ideal2", '{"orbit_of":1,"lambda":[1,0]}')
    assert out == {"included": True}


def test_closure_witness_structure(capsys, files):
    code, out, _ = run(capsys, "closure", "--system", files["S"], "--set", files["E"])
    assert code == 0 and out["closure"] == {"0": {"arcs": [[0.25, 0.75]], "points": []}}
    code, out, _ = run(capsys, "witness", "--arc", "0.25,0.75", "--lambda0", "0", "--tol", "1e-3")
    assert code == 0 and out["forbidden_sup"] <= 1e-3 and out["N"] <= 2000
    code, out, _ = run(capsys, "structure", "--system", files["rot"])
    assert code == 0 and out["orbit_chart"] == "z -> z^3"


def test_extract_and_apply(capsys, files):
    code, out, _ = run(capsys, "extract-e0", "--system", files["aper"], "--rho", '{"entries":{"0":[1,0],"5":[0.1,0]}}',
                       "--N", "3", "--p", "2")
    assert code == 0 and out["error"] <= out["error_bound"] + 1e-15
    code, out, _ = run(capsys, "apply", "--system", files["aper"], "--x", "0",
                       "--element", '{"coeffs":{"1":{"orbit_table":{"1":[2,0]}}}}', "--vector", '{"entries":{"0":[1,0]}}')
    assert code == 0 and out["entries"] == {"1": [2.0, 0.0]}


def test_exit_codes(capsys, files):
    code, _, err = run(capsys, "orbits", "--system", str(files["dir"] / "missing.json"))
    assert code == 2 and err["error"] == "parse"
    code, _, err = run(capsys, "orbits", "--system", files["aper"])
    assert code == 3 and err["error"] == "domain"
    code, _, err = run(capsys, "witness", "--arc", "0.25,0.75", "--tol", "1e-12", "--maxN", "40")
    assert code == 4 and err["error"] == "tolerance"
    code, _, err = run(capsys, "solve", "--system", files["aper"], "--rho", files["rho"], "--tau", files["tau"],
                       "--gamma", "1.5")
    assert code == 2
    code, _, err = run(capsys, "bogus")
    assert code == 2
    code, _, _ = run(capsys, "witness", "--arc", "0.25,0.75", "--lambda0", "0.5")
    assert code == 3


def test_validate_cmd(capsys, files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"backend":"finite_perm","perm":[0,0]}')
    code, out, _ = run(capsys, "validate", files["S"], str(bad))
    assert code == 0 and out[files["S"]] == [] and "not a bijection" in out[str(bad)][0]


def test_deterministic_and_round_trip(capsys, files):
    argv = ["closure", "--system", files["S"], "--set", files["E"]]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    code, out, _ = run(capsys, "solve", "--system", files["aper"], "--rho", files["rho"], "--tau", files["tau"])
    ap = AperiodicOrbitModel()
    assert S.encode_element(S.decode_element(ap, out["element"])) == out["element"]


def test_console_entry_point(files):
    env = {**os.environ, "CROSSED_ELL1_NO_JIT": "1"}
    out = subprocess.run([sys.executable, "-m", "crossed_ell1", "orbits", "--system", files["S"]],
                         capture_output=True, text=True, env=env, check=True)
    assert json.loads(out.stdout) == [[0, 1, 2], [3, 4]]
