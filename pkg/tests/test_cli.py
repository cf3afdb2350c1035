import json
import math

import numpy as np
import pytest

from mlsurf import cli

GENERIC_ARGS = ["--a1", "1.3", "--psi-re", "-1", "--psi-im", "0",
                "--theta", str(math.pi / 5)]


def run(argv, capsys=None):
    code = cli.main(argv)
    return code


def test_compute_generic(tmp_path):
    csv = tmp_path / "out.csv"
    rep = tmp_path / "rep.json"
    code = run(["compute", *GENERIC_ARGS, "--grid=-0.3,0.3,0.0,0.9,3,4",
                "--csv", str(csv), "--report", str(rep)])
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 1 + 3 * 4
    report = json.loads(rep.read_text())
    assert report["kind"] == "generic"
    assert report["all_passed"] is True
    assert report["constants"]["beta"] == pytest.approx(2.6 + 1 / 1.69)
    per = report["per_theta"][0]
    assert len(per["d"]) == 3
    # beta1(2w) has imaginary part 2w; beta2(2w) purely imaginary
    two_w = 2 * report["constants"]["omega"]
    assert per["beta1_2omega"]["im"] == pytest.approx(two_w, abs=1e-9)
    assert abs(per["beta2_2omega"]["re"]) < 1e-9


def test_compute_clifford_flat_path(tmp_path):
    csv = tmp_path / "c.csv"
    rep = tmp_path / "c.json"
    code = run(["compute", "--a1", "1", "--psi-re", "-1",
                "--csv", str(csv), "--report", str(rep)])
    assert code == 0
    report = json.loads(rep.read_text())
    assert report["kind"] == "flat"
    # default theta list is [0.0]; u identically 0
    rows = csv.read_text().splitlines()[1:]
    thetas = {row.split(",")[0] for row in rows}
    assert thetas == {"0"}
    us = {row.split(",")[3] for row in rows}
    assert us == {"0"}
    # |F| = 1 on every row
    for row in rows:
        vals = [float(v) for v in row.split(",")]
        norm = math.sqrt(sum(v * v for v in vals[5:]))
        assert abs(norm - 1.0) < 1e-10


def test_compute_rejects_degenerate_theta(tmp_path):
    code = run(["compute", "--a1", "1.3", "--psi-re", "-1", "--theta", "0",
                "--csv", str(tmp_path / "x.csv")])
    assert code == 3


def test_compute_rejects_bad_grid(tmp_path):
    code = run(["compute", *GENERIC_ARGS, "--grid=0,1,0,1,1,4",
                "--csv", str(tmp_path / "x.csv")])
    assert code == 2


def test_config_roundtrip_byte_identical(tmp_path):
    cfg = cli.RunConfig(a1=1.3, psi_re=-1.0, psi_im=0.0,
                        thetas=[math.pi / 5], grid=(-0.4, 0.4, 0.0, 0.8, 4, 3),
                        csv_path=str(tmp_path / "a.csv"),
                        report_path=str(tmp_path / "a.json"))
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps(cfg.to_dict()))
    assert run(["compute", "--config", str(cfg_file)]) == 0

    reparsed = cli.RunConfig.from_dict(json.loads(cfg_file.read_text()))
    assert reparsed.to_dict() == cfg.to_dict()
    reparsed.csv_path = str(tmp_path / "b.csv")
    reparsed.report_path = str(tmp_path / "b.json")
    cfg2_file = tmp_path / "cfg2.json"
    cfg2_file.write_text(json.dumps(reparsed.to_dict()))
    assert run(["compute", "--config", str(cfg2_file)]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_csv_deterministic_across_threads(tmp_path):
    args = ["compute", *GENERIC_ARGS, "--grid=-0.4,0.4,0.0,0.8,4,5",
            "--report", "/dev/null"]
    assert run([*args, "--csv", str(tmp_path / "t1.csv"), "--threads", "1"]) == 0
    assert run([*args, "--csv", str(tmp_path / "t4.csv"), "--threads", "4"]) == 0
    assert (tmp_path / "t1.csv").read_bytes() == (tmp_path / "t4.csv").read_bytes()


def test_threads_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("MLSURF_THREADS", "2")
    args = ["compute", *GENERIC_ARGS, "--grid=-0.4,0.4,0.0,0.8,3,3",
            "--report", "/dev/null", "--csv", str(tmp_path / "env.csv")]
    assert run(args) == 0


def test_verify_pass(tmp_path):
    rep = tmp_path / "v.json"
    code = run(["verify", *GENERIC_ARGS, "--report", str(rep)])
    assert code == 0
    payload = json.loads(rep.read_text())
    assert payload["all_passed"] is True
    assert all(c["passed"] for c in payload["checks"])
    names = {c["name"] for c in payload["checks"]}
    assert "frame_unitarity" in names and "monodromy_vanishing" in names


def test_verify_forced_failure(tmp_path):
    code = run(["verify", *GENERIC_ARGS, "--tol", "frame_unitarity=0",
                "--report", str(tmp_path / "f.json")])
    assert code == 1


def test_verify_unknown_tolerance():
    assert run(["verify", *GENERIC_ARGS, "--tol", "nonsense=1"]) == 2


def test_clifford_closing_command(capsys):
    code = run(["clifford-closing", "--theta", "0", "--l1", "-1",
                "--l2", "0", "--l3", "0", "--k", "0"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["delta"]["re"] == pytest.approx(-2 * math.pi / 3)
    assert payload["checks"]["off_diagonal"] < 1e-12
    assert payload["checks"]["c_cubed_error"] < 1e-12


def test_clifford_closing_rejection():
    code = run(["clifford-closing", "--theta", "0", "--l1", "0",
                "--l2", "0", "--l3", "0", "--k", "0"])
    assert code == 2


def test_vacuum_command(capsys):
    code = run(["vacuum", "--a-re", "0", "--a-im", "2", "--b-re", "0", "--b-im", "2"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["delta_rot"] == 0.0
    assert payload["scale"]["re"] == pytest.approx(2.0)
    assert payload["residual"] < 1e-12


def test_vacuum_rejects_non_vacuum():
    assert run(["vacuum", "--a-re", "0", "--a-im", "1",
                "--b-re", "0", "--b-im", "2"]) == 2


def test_compute_complex_psi(tmp_path):
    rep = tmp_path / "cp.json"
    code = run(["compute", "--a1", "1.4", "--psi-re", "0.6", "--psi-im", "0.8",
                "--theta", "0.9", "--grid=-0.2,0.2,0.0,0.6,3,3",
                "--csv", str(tmp_path / "cp.csv"), "--report", str(rep)])
    assert code == 0
    report = json.loads(rep.read_text())
    assert report["kind"] == "generic"
    assert report["all_passed"] is True


def test_csv_values_roundtrip_float64(tmp_path):
    # 17 significant digits: parsing the CSV recovers the doubles exactly
    csv = tmp_path / "rt.csv"
    assert run(["compute", *GENERIC_ARGS, "--grid=-0.2,0.2,0.1,0.5,3,3",
                "--csv", str(csv), "--report", "/dev/null"]) == 0
    rows = [r.split(",") for r in csv.read_text().splitlines()[1:]]
    f = np.array([[float(v) for v in row] for row in rows])
    for row in f:
        assert f"{row[1]:.17g}" == f"{float(f'{row[1]:.17g}'):.17g}"
    norms = np.sqrt((f[:, 5:] ** 2).sum(axis=1))
    assert np.max(np.abs(norms - 1.0)) < 1e-8
