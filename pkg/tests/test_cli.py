import json
from pathlib import Path

import pytest

from cbspair.cli import main


def _read_lines(path: Path) -> list[str]:
    return path.read_text().splitlines()


def test_spectrum_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "spectrum.csv"
    rc = main(["spectrum", "--delta", "0,2", "--s", "0.05",
               "--n-points", "1001", "--out", str(out)])
    assert rc == 0
    lines = _read_lines(out)
    assert lines[0].startswith("# config_hash=") and "units=" in lines[0]
    assert lines[1] == "delta,omega_minus_omegaL_in_Gamma,P_in_per_eta"
    assert len(lines) == 2 + 2 * 1001
    sidecar = json.loads((tmp_path / "spectrum.json").read_text())
    per_delta = {entry["delta"]: entry for entry in sidecar["per_delta"]}
    assert abs(per_delta[0.0]["fwhm"] - 0.64) < 0.01
    assert per_delta[0.0]["norm"] == 0.05**2 / 2.0
    assert len(per_delta[2.0]["peaks"]) == 2


def test_spectrum_empty_delta_list_is_config_error(tmp_path, capsys):
    rc = main(["spectrum", "--delta", "", "--out", str(tmp_path / "s.csv")])
    assert rc == 2
    assert "deltas" in capsys.readouterr().err


def test_spectrum_invalid_s_reports_field(tmp_path, capsys):
    rc = main(["spectrum", "--delta", "0", "--s", "0.7", "--out", str(tmp_path / "s.csv")])
    assert rc == 2
    assert "s:" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "common": {"s": 0.1},
        "spectrum": {"deltas": [1.0], "n_points": 501,
                     "out": str(tmp_path / "from_config.csv")},
    }))
    rc = main(["--config", str(config), "spectrum", "--s", "0.05"])
    assert rc == 0
    sidecar = json.loads((tmp_path / "from_config.json").read_text())
    assert sidecar["s"] == 0.05  # flag wins over the common section
    assert sidecar["per_delta"][0]["delta"] == 1.0


def test_unknown_config_key_is_rejected(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"spectrum": {"detunings": [1.0]}}))
    rc = main(["--config", str(config), "spectrum", "--out", str(tmp_path / "s.csv")])
    assert rc == 2
    assert "detunings" in capsys.readouterr().err


def test_malformed_config_is_config_error(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text("{not json")
    rc = main(["--config", str(config), "verify"])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_enhancement_outputs(tmp_path):
    out = tmp_path / "enh.csv"
    rc = main(["enhancement", "--s0", "0,1,2,4,8", "--delta", "10", "--out", str(out)])
    assert rc == 0
    lines = _read_lines(out)
    assert lines[1] == "s0,alpha_exact,alpha_large_detuning,alpha_linear"
    first = lines[2].split(",")
    assert float(first[0]) == 0.0 and float(first[1]) == 2.0
    row4 = dict(zip(lines[1].split(","), (float(v) for v in lines[5].split(","))))
    assert row4["alpha_large_detuning"] == 1.5
    sidecar = json.loads((tmp_path / "enh.json").read_text())
    assert abs(sidecar["slope_at_zero"] + 0.25) < 1e-4


def test_enhancement_out_of_domain_is_config_error(tmp_path, capsys):
    rc = main(["enhancement", "--s0", "2", "--delta", "0", "--out", str(tmp_path / "e.csv")])
    assert rc == 2
    assert "perturbative" in capsys.readouterr().err


def test_cone_outputs(tmp_path):
    out = tmp_path / "cone.csv"
    rc = main(["cone", "--delta", "1", "--s", "0.1", "--r12-in-wavelengths", "8",
               "--n-theta", "101", "--out", str(out)])
    assert rc == 0
    lines = _read_lines(out)
    assert lines[1] == "theta,I_fixed,I_avg_omega,I_avg_omega_and_positions"
    assert len(lines) == 2 + 101
    meta = json.loads((tmp_path / "cone.json").read_text())
    # center of the grid is exact backscattering: L_in + C_in in the last column
    center = lines[2 + 50].split(",")
    assert abs(float(center[0])) < 1e-12
    assert float(center[3]) == pytest.approx(meta["l_in"] + meta["c_in"], rel=1e-6)


def test_csv_outputs_are_byte_identical(tmp_path):
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (out_a, out_b):
        assert main(["spectrum", "--delta", "0,1", "--n-points", "801",
                     "--out", str(out)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_unwritable_output_path_is_io_error(tmp_path, capsys):
    rc = main(["spectrum", "--delta", "0", "--n-points", "301",
               "--out", str(tmp_path / "missing_dir" / "s.csv")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_http_status_to_exit_code_mapping():
    from cbspair.cli import EXIT_CONFIG, EXIT_NUMERIC, _fail_from_response
    import httpx

    def response(status, payload):
        return httpx.Response(status, json=payload, request=httpx.Request("POST", "http://x/y"))

    assert _fail_from_response(response(400, {"kind": "config", "detail": "bad"})) == EXIT_CONFIG
    assert _fail_from_response(
        response(422, {"detail": [{"loc": ["body", "s"], "msg": "too large"}]})
    ) == EXIT_CONFIG
    assert _fail_from_response(response(500, {"kind": "numeric", "detail": "diverged"})) == EXIT_NUMERIC


def test_verify_reports_are_byte_identical(tmp_path):
    out_a, out_b = tmp_path / "a.json", tmp_path / "b.json"
    rc_a = main(["verify", "--seed", "20260811", "--out", str(out_a)])
    rc_b = main(["verify", "--seed", "20260811", "--out", str(out_b)])
    assert out_a.read_bytes() == out_b.read_bytes()
    report = json.loads(out_a.read_text())
    assert rc_a == rc_b == (0 if report["passed"] else 1)
    # any failure must be confined to the documented peak-position items
    failing = [
        (check["id"], item["label"])
        for check in report["checks"]
        for item in check["items"]
        if not item["passed"]
    ]
    assert all(cid == "c02" and "peak position" in label for cid, label in failing)


def test_verify_zero_tolerance_self_test(tmp_path):
    out = tmp_path / "strict.json"
    rc = main(["verify", "--seed", "1", "--zero-tolerance", "--out", str(out)])
    assert rc == 1
    report = json.loads(out.read_text())
    assert report["zero_tolerance"] is True
    deltas = [
        item["delta"]
        for check in report["checks"]
        for item in check["items"]
        if not item["passed"]
    ]
    assert deltas and all(d > 0.0 for d in deltas)
