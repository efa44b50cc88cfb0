import csv
import json
import subprocess
import sys

import pytest

from whitham_cap.cli import (EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, PRESETS, ConfigError,
                             build_config, main, parse_config_text, read_coefficients)


def test_config_parsing():
    vals = parse_config_text("# comment\nT = 0.5\n\nc=0.8  # trailing\n")
    assert vals == {"T": "0.5", "c": "0.8"}
    cfg = build_config(vals)
    assert cfg.T == 0.5 and cfg.c == 0.8 and cfg.N == 300


@pytest.mark.parametrize("text", ["T 0.5", "= 3", "colour = red", "N = many", "mode = fly",
                                  "stride = 2.5", "N = 4"])
def test_bad_config_rejected(text):
    with pytest.raises(ConfigError):
        build_config(parse_config_text(text))


def test_presets_build():
    for name, vals in PRESETS.items():
        cfg = build_config(vals)
        assert cfg.N >= 300, name


def test_bad_config_file_gives_config_exit(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("d = 0.5\n")
    assert main(["--config", str(f), "--mode", "solve"]) == EXIT_CONFIG
    assert main(["--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG


def test_stability_needs_existence(tmp_path):
    code = main(["--preset", "whitham-small", "--mode", "stability", "--set", f"workdir={tmp_path}"])
    assert code == EXIT_CONFIG


def test_export_profile(tmp_path):
    args = ["--mode", "export", "--set", "d=20", "--set", "N=128", "--set", "c=1.1",
            "--set", "export_points=201", "--set", f"workdir={tmp_path}"]
    assert main(args) == EXIT_OK
    rows = list(csv.DictReader((tmp_path / "profile.csv").open()))
    assert len(rows) == 201
    x = [float(r["x"]) for r in rows]
    assert all(a < b for a, b in zip(x, x[1:]))
    assert all(float(r["u_lo"]) <= float(r["u_hi"]) for r in rows)
    mid = rows[100]
    assert float(mid["u_lo"]) > float(rows[0]["u_hi"])
    vals, head = read_coefficients(tmp_path / "coefficients.txt")
    assert len(vals) == 129 and int(head["N"]) == 128


def test_recheck_exit_codes(small_pipeline, tmp_path):
    work, _ = small_pipeline
    assert main(["--mode", "recheck", "--set", f"cert_in={work / 'certificate.json'}"]) == EXIT_OK
    assert main(["--mode", "recheck", "--set", f"cert_in={work / 'stability.json'}"]) == EXIT_OK
    doc = json.loads((work / "certificate.json").read_text())
    doc["radii"]["r"] = {"lo": "1.0", "hi": "1.0"}
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["--mode", "recheck", "--set", f"cert_in={bad}"]) == EXIT_VERIFY
    doc["radii"]["r"] = ["1.0", "1.0"]
    bad.write_text(json.dumps(doc))
    assert main(["--mode", "recheck", "--set", f"cert_in={bad}"]) == EXIT_VERIFY


def test_mismatched_coefficients_refused(small_pipeline, tmp_path):
    work, _ = small_pipeline
    lines = (work / "coefficients.txt").read_text().splitlines()
    lines[5] = repr(float(lines[5]) * (1 + 1e-9))
    (tmp_path / "coefficients.txt").write_text("\n".join(lines) + "\n")
    code = main(["--preset", "whitham-small", "--mode", "stability", "--set", f"workdir={tmp_path}",
                 "--set", "coeff_in=coefficients.txt",
                 "--set", f"cert_in={work / 'certificate.json'}"])
    assert code == EXIT_CONFIG


def test_certificate_is_deterministic(small_pipeline, tmp_path):
    work, _ = small_pipeline
    assert main(["--preset", "whitham-small", "--mode", "prove", "--set", f"workdir={tmp_path}"]) == 0
    a = json.loads((work / "certificate.json").read_text())
    b = json.loads((tmp_path / "certificate.json").read_text())
    for doc in (a, b):
        doc.pop("timestamp")
        doc["digests"].pop("input_file", None)
        doc.pop("config")
    assert a == b


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "whitham_cap", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "--preset" in out.stdout
    out = subprocess.run([sys.executable, "-m", "whitham_cap", "--mode", "constants",
                          "--threads", "1", "--set", "c=1.1"], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert "C2" in out.stdout
