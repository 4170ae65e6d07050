"""Smoke tests for the python bindings and the CLI surface."""

import math
import os
import subprocess

import pytest

import paircorr as pc

PHI = (math.sqrt(5.0) - 1.0) / 2.0


def test_resolve_alpha_golden():
    out = pc.resolve_alpha("quad:1,2,5", 128)
    assert out["value"] == pytest.approx(PHI, abs=1e-15)
    assert out["error_bound"] <= 2.0 ** (-127)


def test_frac_parts_match_math():
    vals = pc.frac_parts("quad:1,2,5", [1, 2, 3, 4, 5])
    for n, v in zip(range(1, 6), vals):
        assert v == pytest.approx((n * PHI) % 1.0, abs=1e-12)


def test_cf_digits_and_convergents():
    assert pc.cf_digits("rat:5/8", 16) == [1, 1, 1, 2]
    assert pc.cf_digits("quad:0,1,2", 6) == [2] * 6
    dens = [q for _, q in pc.convergents("quad:1,2,5", 7)]
    assert dens == [1, 1, 2, 3, 5, 8, 13]


def test_generate_and_energy():
    assert pc.generate("ap:2,3", 4) == [2, 5, 8, 11]
    out = pc.additive_energy("id", 4)
    assert out["energy"] == 44
    prof = pc.difference_profile("id", 4)
    assert prof == {"1": 3, "2": 2, "3": 1}


def test_r2_kronecker_vs_control():
    golden = pc.r2("quad:1,2,5", "id", 2000, ["1"])[0]
    assert golden["pair_count"] % 2 == 0
    assert abs(golden["value"] - 2.0) > 0.5  # Kronecker sequences are not Poissonian
    control = pc.r2("quad:0,1,2", "squares", 2000, ["1"])[0]
    assert abs(control["value"] - 2.0) < 0.5


def test_gaps_summary():
    out = pc.gaps("quad:1,2,5", 100)
    assert out["q"] == 89
    assert out["distinct_neighbor_gaps"] <= 3
    assert set(out["bundle_sizes"]) <= {out["b"], out["b"] + 1}


def test_detect_and_witness():
    cert = pc.detect("ap:2,3", 100)
    assert cert is not None and cert["k"] == 3
    assert pc.detect("squares", 400, c="0.5", K="4", k_max=50) is None
    out = pc.witness("id", "quad:1,2,5", n_list=[500, 1000])
    assert out["witness_found"]
    assert out["max_abs_deviation"] >= 0.5


def test_error_mapping():
    with pytest.raises(pc.PcError):
        pc.resolve_alpha("quad:1,2,9")  # perfect square


@pytest.mark.skipif("PC_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_json_against_shipped_schemas():
    import json

    import jsonschema

    cli = os.environ["PC_CLI"]
    root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    out = subprocess.run([cli, "detect", "--seq", "ap:2,3", "--N", "50"],
                         capture_output=True, text=True, check=True)
    with open(os.path.join(root, "schemas", "detect.schema.json")) as fh:
        jsonschema.validate(json.loads(out.stdout), json.load(fh))

    wit = subprocess.run([cli, "witness", "--seq", "id", "--alpha", "quad:1,2,5",
                          "--N", "500,1000"], capture_output=True, text=True)
    assert wit.returncode == 0  # witness found
    with open(os.path.join(root, "schemas", "witness.schema.json")) as fh:
        jsonschema.validate(json.loads(wit.stdout), json.load(fh))


@pytest.mark.skipif("PC_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_exit_codes():
    cli = os.environ["PC_CLI"]
    ok = subprocess.run([cli, "r2", "--alpha", "quad:1,2,5", "--seq", "id", "--N", "100", "--s", "1"],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    assert "N,s,pair_count,value,poisson_ref" in ok.stdout

    usage = subprocess.run([cli, "r2", "--no-such-flag"], capture_output=True, text=True)
    assert usage.returncode == 2

    # identical configs reproduce the output byte for byte
    again = subprocess.run([cli, "r2", "--alpha", "quad:1,2,5", "--seq", "id", "--N", "100", "--s", "1"],
                           capture_output=True, text=True)
    assert again.stdout == ok.stdout
