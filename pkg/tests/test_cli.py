import csv
import io
import json
import math
import subprocess
import sys

import pytest

from phonon_casimir import cli

PI = math.pi


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize("argv", [
    ["freespace", "--dx", "1"],
    ["freespace", "--dx", "1", "--dt", "0.5", "--variant", "printed"],
    ["squeezed", "--r", "0.5", "--k", "1", "--V", "1"],
    ["plate", "--z", "1"],
    ["plates", "--a", "1", "--z", "0.3"],
    ["torus", "--L1", "1", "--L2", "1", "--L3", "1"],
    ["wedge", "--alpha", "2", "--r", "1", "--theta", "0.7"],
    ["string", "--alpha", "4", "--r", "1"],
    ["parabola", "rho2", "--a", "0.001", "--b", "1", "--theta0", "1.5708"],
    ["parabola", "rays", "--gamma", "1.5708", "--alpha", "0.7", "--theta0", "1.5", "--a", "0.001"],
    ["scattering", "--material", "neon", "--lambda-nm", "350", "--theta", "3.14159"],
])
def test_every_subcommand_round_trips(capsys, argv):
    doc = run_json(capsys, *argv)
    assert doc["value"] == doc["coefficient"] * doc["scale"]
    assert doc["units"] in ("natural", "SI")
    # deterministic: same input, identical bytes
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_plate_value(capsys):
    doc = run_json(capsys, "plate", "--z", "1")
    assert doc["value"] == pytest.approx(-1 / (32 * PI**2), rel=1e-15)


def test_torus_oracle_fields(capsys):
    doc = run_json(capsys, "torus", "--L1", "1", "--L2", "1", "--L3", "1", "--oracle", "--radius", "20")
    assert doc["oracle"]["method"] == "shells"
    assert doc["discrepancy_ratio"] == pytest.approx(1.0, abs=0.05)


def test_plates_image_sum_reports_ratio(capsys):
    doc = run_json(capsys, "plates", "--a", "1", "--z", "0.3", "--image-sum")
    assert doc["discrepancy_ratio"] == pytest.approx(PI**2, rel=1e-8)


def test_wedge_oracle(capsys):
    doc = run_json(capsys, "wedge", "--alpha", str(PI), "--r", "1", "--theta", str(PI / 2), "--oracle")
    assert doc["discrepancy_ratio"] == pytest.approx(-PI**4, rel=1e-6)


def test_freespace_epsilon_and_oracle_exclusive(capsys):
    code, _, err = run(capsys, "freespace", "--dx", "1", "--epsilon", "0.1", "--oracle")
    assert code == cli.EXIT_USAGE and "not allowed" in err


def test_profiles_default_to_csv(capsys):
    code, out, _ = run(capsys, "plates", "--a", "1", "--profile", "5")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["z_over_a", "rho2_R_natural"] and len(rows) == 6
    code, out, _ = run(capsys, "parabola", "gcurve", "--n", "4")
    assert out.splitlines()[0] == "theta0_rad,g" and len(out.splitlines()) == 5
    code, out, _ = run(capsys, "squeezed", "--r", "0.3", "--k", "1", "--V", "1", "--profile", "8")
    assert out.startswith("phase_rad,")


def test_profile_as_json(capsys):
    doc = run_json(capsys, "plates", "--a", "1", "--profile", "3", "--output", "json")
    assert doc["columns"][0] == "z_over_a" and len(doc["rows"]) == 3


def test_scalar_as_csv(capsys):
    code, out, _ = run(capsys, "plate", "--z", "2", "--output", "csv")
    header, values = list(csv.reader(io.StringIO(out)))
    rec = dict(zip(header, values))
    assert float(rec["value"]) == pytest.approx(-1 / (32 * PI**2 * 16), rel=1e-15)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "plate", "--z", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["coefficient"] == pytest.approx(-1 / (32 * PI**2))


@pytest.mark.parametrize("argv,code", [
    (["plate"], cli.EXIT_USAGE),
    (["plates", "--a", "1"], cli.EXIT_USAGE),
    (["nosuch"], cli.EXIT_USAGE),
    (["plate", "--z", "-1"], cli.EXIT_DOMAIN),
    (["wedge", "--alpha", "1", "--r", "1", "--theta", "2"], cli.EXIT_DOMAIN),
    (["parabola", "rho2", "--a", "0.5", "--b", "1", "--theta0", "1"], cli.EXIT_DOMAIN),
    (["scattering", "--material", "neon", "--lambda-nm", "350", "--theta", "3", "--temperature", "0"],
     cli.EXIT_DOMAIN),
    (["scattering", "--material", "/no/such/material.json", "--lambda-nm", "350", "--theta", "3"],
     cli.EXIT_CONFIG_MISSING),
    (["torus", "--L1", "1", "--L2", "1", "--L3", "1", "--tol", "1e-30"], cli.EXIT_CONVERGENCE),
])
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code and out == "" and err


def test_config_handling(capsys, tmp_path, monkeypatch):
    assert run(capsys, "plate", "--z", "1", "--config", str(tmp_path / "missing.json"))[0] == cli.EXIT_CONFIG_MISSING
    bad = tmp_path / "bad.json"
    for text in ('{"hbar": 1, "units": "SI"}', '{"hbar": "one"}', '{"rho0": -1}', '{"h": 1}', "{oops"):
        bad.write_text(text)
        assert run(capsys, "plate", "--z", "1", "--config", str(bad))[0] == cli.EXIT_CONFIG_MALFORMED, text
    good = tmp_path / "si.json"
    good.write_text(json.dumps({"hbar": 1.054571817e-34, "rho0": 1000.0, "cS": 1500.0, "units": "SI"}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(good))
    doc = run_json(capsys, "plate", "--z", "1e-6")
    assert doc["units"] == "SI"
    assert doc["scale"] == pytest.approx(1.054571817e-34 * 1000 / (1500 * 1e-24), rel=1e-14)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "phonon_casimir", "plate", "--z", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["geometry"]
