"""End-to-end command-line behavior: outputs, exit codes, determinism."""

import json

import numpy as np
import pytest
from imagegen import blob_image, warp_similarity

from clifford_mellin import cli
from clifford_mellin.algebra import CL02
from clifford_mellin.cfmt import read_clmf
from clifford_mellin.cli import RunConfig
from clifford_mellin.imaging import write_pgm
from clifford_mellin.signal import default_geometry, random_signal, read_clms, write_clms


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture()
def signal_file(tmp_path):
    path = tmp_path / "input.clms"
    write_clms(path, random_signal(default_geometry(32), CL02, seed=3))
    return path


def test_transform_and_invert_round_trip(tmp_path, capsys, signal_file):
    spectrum_path = tmp_path / "out.clmf"
    code, out = run(
        capsys, "transform", str(signal_file), "--ns", "32", "--ntheta", "32",
        "--out", str(spectrum_path),
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["relative_difference"] <= 1e-10
    assert summary["time_fast_s"] > 0.0
    assert summary["time_direct_s"] > 0.0
    assert spectrum_path.exists()

    back_path = tmp_path / "back.clms"
    code, out = run(capsys, "invert", str(spectrum_path), "--out", str(back_path))
    assert code == 0
    original = read_clms(signal_file)
    recovered = read_clms(back_path)
    assert original.max_abs_diff(recovered) <= 1e-10


def test_transform_parseval_fields_blade_pair(tmp_path, capsys, signal_file):
    code, out = run(capsys, "transform", str(signal_file))
    assert code == 0
    summary = json.loads(out)
    assert summary["norm_signal"] == pytest.approx(summary["norm_spectrum"], rel=1e-10)


def test_config_echo_round_trip(capsys, signal_file):
    code, out = run(capsys, "transform", str(signal_file), "--seed", "9")
    assert code == 0
    config = RunConfig.from_dict(json.loads(out)["config"])
    assert config == RunConfig.from_dict(config.to_dict())
    assert config.seed == 9
    assert config.command == "transform"


def test_exit_codes(tmp_path, capsys, signal_file):
    # usage: unknown algebra string
    code = cli.main(["transform", str(signal_file), "--algebra", "Cl(5,0)"])
    assert code == 1
    # format: missing and malformed files
    assert cli.main(["transform", str(tmp_path / "missing.clms")]) == 2
    broken = tmp_path / "broken.clms"
    broken.write_bytes(b"algebra=Cl(0,2)\nns=4\n")
    assert cli.main(["transform", str(broken)]) == 2
    # contract: --f does not square to -1
    assert cli.main(["transform", str(signal_file), "--f", "1,1,0,0"]) == 3


def test_split_command(capsys):
    code, out = run(capsys, "split", "--x", "1,0,0,0")
    assert code == 0
    summary = json.loads(out)
    assert summary["plus"] == [0.5, 0.0, 0.0, 0.5]
    assert summary["minus"] == [0.5, 0.0, 0.0, -0.5]


def test_manifold_command(tmp_path, capsys):
    path = tmp_path / "cloud.csv"
    code, out = run(capsys, "manifold", "--algebra", "Cl(0,2)", "--resolution", "2",
                    "--out", str(path))
    assert code == 0
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "b1,b2,beta,branch"
    assert len(lines) == 1 + 4
    for line in lines[1:]:
        b1, b2, beta, branch = line.split(",")
        constraint = float(b1) ** 2 + float(b2) ** 2 + float(beta) ** 2
        assert abs(constraint - 1.0) <= 1e-12
    assert json.loads(out)["points"] == 4


def test_manifold_hyperboloid(tmp_path, capsys):
    path = tmp_path / "cloud.csv"
    code, _ = run(capsys, "manifold", "--algebra", "Cl(2,0)", "--resolution", "9",
                  "--out", str(path))
    assert code == 0
    for line in path.read_text().strip().splitlines()[1:]:
        b1, b2, beta, _ = map(float, line.split(","))
        assert abs(beta**2 - b1**2 - b2**2 - 1.0) <= 1e-12


def test_descriptor_command(tmp_path, capsys, signal_file):
    path = tmp_path / "desc.csv"
    code, out = run(capsys, "descriptor", str(signal_file), "--out", str(path))
    assert code == 0
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "j,k,v,mag"
    assert len(lines) == 1 + 32 * 32
    for line in lines[1:]:
        j, k, v, mag = line.split(",")
        assert float(mag) >= 0.0 and np.isfinite(float(v))
    assert json.loads(out)["bins"] == 32 * 32


def test_register_command(tmp_path, capsys):
    image = blob_image(128, seed=11)
    a = tmp_path / "a.pgm"
    b = tmp_path / "b.pgm"
    write_pgm(a, image)
    write_pgm(b, warp_similarity(image, np.pi / 8, 1.0, center=(63.5, 63.5)))
    code, out = run(
        capsys, "register", str(a), str(b),
        "--smin", "0.7", "--smax", "4.0", "--center", "63.5,63.5",
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["matched"] is True
    dtheta = 2 * np.pi / 64
    assert abs(summary["angle_rad"] - np.pi / 8) <= dtheta


def test_register_no_match_exit_code(tmp_path, capsys):
    a = tmp_path / "a.pgm"
    rings = tmp_path / "rings.pgm"
    write_pgm(a, blob_image(128, seed=11))
    ys, xs = np.mgrid[0:128, 0:128]
    write_pgm(rings, 0.5 + 0.5 * np.cos(np.hypot(xs - 63.5, ys - 63.5)))
    code, out = run(
        capsys, "register", str(a), str(rings),
        "--smin", "0.7", "--smax", "4.0", "--center", "63.5,63.5",
    )
    assert code == 4
    summary = json.loads(out)
    assert summary["matched"] is False
    assert summary["confidence"] < 1.05


def test_register_image_from_pgm_transform(tmp_path, capsys):
    # transform accepts images directly and writes a valid spectrum
    path = tmp_path / "img.pgm"
    write_pgm(path, blob_image(64, seed=4))
    out_path = tmp_path / "img.clmf"
    code, _ = run(
        capsys, "transform", str(path), "--ns", "32", "--ntheta", "32",
        "--smin", "-1.0", "--smax", "3.0", "--out", str(out_path),
    )
    assert code == 0
    spectrum = read_clmf(out_path)
    assert spectrum.geometry.n_s == 32


def test_verify_default_passes(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    code, out = run(capsys, "verify", "--ns", "16", "--ntheta", "16",
                    "--out", str(report_path))
    assert code == 0
    report = json.loads(out)
    assert report["failures"] == 0
    assert report_path.exists()
    gated = [r for r in report["results"] if r["pass"] is not None]
    assert all(r["pass"] for r in gated)
    names = {r["property"] for r in report["results"]}
    assert {"transform_round_trip", "parseval", "symmetry_separation"} <= names


def test_verify_deterministic_reports(capsys):
    code1, out1 = run(capsys, "verify", "--ns", "16", "--ntheta", "16", "--seed", "5")
    code2, out2 = run(capsys, "verify", "--ns", "16", "--ntheta", "16", "--seed", "5")
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_degenerate_flag_skips_symmetry(capsys):
    code, out = run(capsys, "verify", "--ns", "16", "--ntheta", "16", "--pair-degenerate")
    assert code == 0
    report = json.loads(out)
    skipped = [
        r for r in report["results"]
        if r["property"] == "symmetry_separation" and r["pair"] == "degenerate"
    ]
    assert len(skipped) == 3
    assert all(r["status"] == "skipped (g=±f)" for r in skipped)


def test_verify_tolerance_override_can_fail(capsys):
    code, out = run(capsys, "verify", "--ns", "16", "--ntheta", "16", "--tol", "1e-18")
    assert code == 3
    assert json.loads(out)["failures"] > 0


def test_threads_env_validation(monkeypatch, capsys, signal_file):
    monkeypatch.setenv("CLIFFORD_MELLIN_THREADS", "4")
    code, out = run(capsys, "transform", str(signal_file))
    assert code == 0
    assert json.loads(out)["config"]["threads"] == 4
    monkeypatch.setenv("CLIFFORD_MELLIN_THREADS", "zero")
    assert cli.main(["transform", str(signal_file)]) == 1
