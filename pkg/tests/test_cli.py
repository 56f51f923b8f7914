import json
import math

import numpy as np
import pytest

from heisgeo.cli import main

IDENTITY = '{"n": 1, "A_tilde": [[1, 0], [0, 1]], "rho": 0}'
LAT1 = '{"n": 1, "r": [1]}'


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_volume_popp_golden(capsys):
    # k = 2, r = 1: total Popp measure is 1/(sqrt(2) * 16)
    code, out = run_cli(capsys, "volume", "--kind", "popp",
                        "--metric", '{"n": 1, "A_tilde": [[2, 0], [0, 2]], "rho": 0}',
                        "--lattice", LAT1)
    assert code == 0
    result = json.loads(out)["results"][0]
    assert np.isclose(result["total_measure"], 1.0 / (math.sqrt(2.0) * 16.0), rtol=1e-12)


def test_malformed_lattice_exit_code(capsys):
    code, out = run_cli(capsys, "systole", "--metric", IDENTITY,
                        "--lattice", '{"n": 2, "r": [2, 3]}')
    assert code == 2
    assert json.loads(out)["detail"]["index"] == 1


def test_invalid_json_exit_code(capsys):
    code, out = run_cli(capsys, "canonicalize", "--metric", "{not json")
    assert code == 2
    assert json.loads(out)["error"] == "MalformedInput"


def test_distance_subcommand(capsys):
    code, out = run_cli(capsys, "distance", "--metric", IDENTITY, "--lattice", LAT1,
                        "--from", '{"x": [0], "y": [0], "z": 0}',
                        "--to", '{"x": [0.5], "y": [0], "z": 0}')
    assert code == 0
    assert np.isclose(json.loads(out)["value"], 0.5)


def test_geodesic_from_file(tmp_path, capsys):
    record = {"metric": json.loads(IDENTITY),
              "covector": {"p_x": [1], "p_y": [0], "p_z": 1},
              "t_grid": [0.0, 2 * math.pi]}
    path = tmp_path / "geodesic.json"
    path.write_text(json.dumps(record))
    code, out = run_cli(capsys, "geodesic", "--input", f"@{path}")
    assert code == 0
    assert np.isclose(json.loads(out)["samples"][1]["z"], math.pi)


def test_selftest_subset_exit_zero(capsys):
    code, out = run_cli(capsys, "selftest", "--seed", "7",
                        "--checks", "group_axioms", "canonicalize_idempotent")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_byte_identical_reruns(capsys):
    argv = ["canonicalize", "--metric", '{"n": 1, "A_tilde": [[1.3, 0.4], [-0.2, 0.8]], "rho": 0.3}']
    code1, out1 = run_cli(capsys, *argv)
    code2, out2 = run_cli(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_output_roundtrips_through_json(capsys):
    code, out = run_cli(capsys, "fingerprint", "--metric",
                        '{"n": 1, "A_tilde": [[1.7, -0.3], [0.9, 1.1]], "rho": 0}')
    assert code == 0
    from heisgeo.serialization import dumps
    parsed = json.loads(out)
    assert dumps(parsed) + "\n" == out


def test_collapse_csv(capsys):
    entries = json.dumps([
        {"lattice": json.loads(LAT1),
         "metric": {"n": 1, "A_tilde": [[k, 0], [0, k]], "rho": 0}, "k": k}
        for k in range(1, 5)
    ])
    code, out = run_cli(capsys, "collapse", "--entries", entries,
                        "--diameter-bound", "5.0", "--csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,measure,fiber_diam,minima_1,minima_2"
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "1"
    assert np.isclose(float(first[2]), math.sqrt(2 * math.pi))


def test_classify_flag(capsys):
    code, out = run_cli(capsys, "systole", "--metric",
                        '{"n": 1, "A_tilde": [[100, 0], [0, 1]], "rho": 0}',
                        "--lattice", '{"n": 1, "r": [100]}', "--classify-3d")
    assert code == 0
    body = json.loads(out)
    assert body["classification"]["case"] == "2"
    assert body["classification"]["equality"] is True


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_combined_record_accepted_everywhere(capsys):
    # one record carrying both lattice and metric fields works for either flag
    record = '{"n": 1, "r": [1], "A_tilde": [[2, 0], [0, 2]], "rho": 0}'
    code, out = run_cli(capsys, "systole", "--metric", record, "--lattice", record)
    assert code == 0
    assert np.isclose(json.loads(out)["systole"], 0.5)


def test_infinity_roundtrips(capsys):
    code, out = run_cli(capsys, "volume", "--kind", "all", "--metric", IDENTITY,
                        "--lattice", LAT1)
    assert code == 0
    from heisgeo.serialization import dumps
    parsed = json.loads(out)
    assert parsed["results"][0]["coeff"] == math.inf
    assert dumps(parsed) + "\n" == out
