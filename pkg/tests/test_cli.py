import json
import subprocess
import sys

import numpy as np
import pytest

import erasure_spectra.cli as cli_module
from erasure_spectra import LawParams, NORM_THEOREM, NumericsError, SpectralLaw
from erasure_spectra.cli import SEED_ENV_VAR, main, read_samples_csv


def run(*argv):
    return main([str(a) for a in argv])


# ---------------------------------------------------------------------------
# theory


def test_theory_writes_curve_and_sidecar(tmp_path):
    out = tmp_path / "th.csv"
    assert run("theory", "--p", 0.2, "--q", 0.5, "--grid", 32, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,density"
    assert len(lines) == 33
    density = np.array([float(line.split(",")[1]) for line in lines[1:]])
    assert np.all(density >= 0)
    meta = json.loads((tmp_path / "th.meta.json").read_text())
    assert abs(meta["edges"]["r_minus"] - 0.1) < 1e-12
    assert abs(meta["edges"]["r_plus"] - 0.9) < 1e-12
    manifest = json.loads((tmp_path / "th.manifest.json").read_text())
    assert manifest["command"] == "theory"
    assert "th.csv" in manifest["outputs"]


def test_theory_atom_vanishes_past_critical_sum(tmp_path):
    out = tmp_path / "th.csv"
    assert run("theory", "--p", 0.6, "--q", 0.5, "--out", out) == 0
    meta = json.loads((tmp_path / "th.meta.json").read_text())
    assert meta["atoms"]["atom1"] == 0.0


def test_theory_invalid_parameters_exit_2(tmp_path, capsys):
    out = tmp_path / "th.csv"
    assert run("theory", "--p", 1.5, "--q", 0.5, "--out", out) == 2
    assert "(0, 1)" in capsys.readouterr().err


def test_unwritable_output_exit_3(tmp_path):
    out = tmp_path / "missing" / "th.csv"
    assert run("theory", "--p", 0.2, "--q", 0.5, "--out", out) == 3


# ---------------------------------------------------------------------------
# sample


def test_sample_schema_and_manifest(tmp_path):
    out = tmp_path / "s.csv"
    code = run(
        "sample", "--ensemble", "dft", "--p", 0.5, "--q", 0.5,
        "--dim", 100, "--trials", 2, "--seed", 9, "--out", out,
    )
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "trial,rank,value"
    trials = {line.split(",")[0] for line in rows[1:]}
    assert trials == {"0", "1"}
    manifest = json.loads((tmp_path / "s.manifest.json").read_text())
    assert manifest["parameters"]["ambient_n"] == 200
    assert manifest["seed"] == 9
    assert manifest["seed_source"] == "flag"


def test_sample_rerun_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sample", "--p", 0.4, "--q", 0.4, "--dim", 40, "--trials", 3, "--seed", 1]
    assert run(*args, "--out", a) == 0
    assert run(*args, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(SEED_ENV_VAR, "123")
    out = tmp_path / "s.csv"
    assert run("sample", "--p", 0.4, "--q", 0.4, "--dim", 30, "--trials", 1, "--out", out) == 0
    manifest = json.loads((tmp_path / "s.manifest.json").read_text())
    assert manifest["seed"] == 123
    assert manifest["seed_source"] == "env"


def test_sample_bad_environment_seed(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(SEED_ENV_VAR, "not-a-number")
    out = tmp_path / "s.csv"
    assert run("sample", "--p", 0.4, "--q", 0.4, "--dim", 30, "--trials", 1, "--out", out) == 2


# ---------------------------------------------------------------------------
# compare


@pytest.fixture()
def samples_file(tmp_path):
    out = tmp_path / "samples.csv"
    assert run(
        "sample", "--ensemble", "dft", "--p", 0.2, "--q", 0.5,
        "--dim", 100, "--trials", 50, "--seed", 0, "--workers", 2, "--out", out,
    ) == 0
    return out


def test_compare_roundtrip_desk_scale(tmp_path, samples_file):
    out = tmp_path / "report.json"
    assert run("compare", samples_file, "--p", 0.2, "--q", 0.5, "--out", out) == 0
    report = json.loads(out.read_text())
    assert report["p"] == 0.2 and report["q"] == 0.5
    assert report["ks_distance"] < 0.05
    assert report["manifest_mismatch_warning"] is None
    for key in ("l1_hist_distance", "atom1_error", "mean_error"):
        assert report[key] >= 0


def test_compare_flags_manifest_mismatch(tmp_path, samples_file):
    out = tmp_path / "report.json"
    assert run("compare", samples_file, "--p", 0.3, "--q", 0.5, "--out", out) == 0
    report = json.loads(out.read_text())
    assert report["manifest_mismatch_warning"] is not None
    assert "p=" in report["manifest_mismatch_warning"]


def test_compare_empty_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "empty.csv"
    bad.write_text("trial,rank,value\n")
    assert run("compare", bad, "--p", 0.5, "--q", 0.5, "--out", tmp_path / "r.json") == 2


def test_compare_malformed_row_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("trial,rank,value\n0,0,0.5\n0,1,oops\n")
    assert run("compare", bad, "--p", 0.5, "--q", 0.5, "--out", tmp_path / "r.json") == 2
    assert "line 3" in capsys.readouterr().err


def test_compare_wrong_header_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n0,0,0.5\n")
    assert run("compare", bad, "--p", 0.5, "--q", 0.5, "--out", tmp_path / "r.json") == 2


def test_read_samples_groups_by_trial(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("trial,rank,value\n0,0,0.9\n0,1,0.4\n2,0,0.7\n")
    groups = read_samples_csv(f)
    assert len(groups) == 2
    np.testing.assert_array_equal(groups[0], [0.9, 0.4])
    np.testing.assert_array_equal(groups[1], [0.7])


# ---------------------------------------------------------------------------
# figure


def test_figure_arch_shape_and_theory_column(tmp_path):
    out = tmp_path / "fig.csv"
    code = run(
        "figure", "--ensemble", "haar", "--p", 0.5, "--q", 0.5,
        "--dim", 100, "--trials", 100, "--bins", 40, "--seed", 0,
        "--workers", 4, "--out", out,
    )
    assert code == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    x = np.array([float(r[0]) for r in rows])
    empirical = np.array([float(r[1]) for r in rows])
    theory = np.array([float(r[2]) for r in rows])
    # density blows up toward both interval ends on the critical line p + q = 1
    middle = slice(15, 25)
    assert empirical[1] > empirical[middle].max()
    assert empirical[-2] > empirical[middle].max()
    law = SpectralLaw(LawParams(0.5, 0.5), NORM_THEOREM)
    np.testing.assert_allclose(theory, law.density(x), atol=1e-12)


def test_figure_support_spillover_small(tmp_path):
    out = tmp_path / "fig.csv"
    assert run(
        "figure", "--ensemble", "dft", "--p", 0.2, "--q", 0.5,
        "--dim", 100, "--trials", 100, "--bins", 50, "--seed", 0, "--out", out,
    ) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    x = np.array([float(r[0]) for r in rows])
    empirical = np.array([float(r[1]) for r in rows])
    width = x[1] - x[0]
    outside = (x < 0.1 - width / 2) | ((x > 0.9 + width / 2) & (x < 1 - width))
    spilled = empirical[outside].sum() * width
    assert spilled < 0.02


def test_figure_deterministic_across_workers(tmp_path):
    outs = []
    for workers, name in ((1, "w1.csv"), (3, "w3.csv")):
        out = tmp_path / name
        assert run(
            "figure", "--p", 0.3, "--q", 0.3, "--dim", 40, "--trials", 6,
            "--seed", 5, "--workers", workers, "--out", out,
        ) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


# ---------------------------------------------------------------------------
# parser basics


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_numerical_failure_exit_4(tmp_path, monkeypatch, capsys):
    def explode(config, workers=1):
        raise NumericsError("clamp guard tripped")

    monkeypatch.setattr(cli_module, "run_trials", explode)
    code = run("sample", "--p", 0.4, "--q", 0.4, "--dim", 30, "--trials", 1,
               "--out", tmp_path / "s.csv")
    assert code == 4
    assert "numerical failure" in capsys.readouterr().err


def test_module_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "erasure_spectra", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip()


def test_float_values_have_17_significant_digits(tmp_path):
    out = tmp_path / "th.csv"
    assert run("theory", "--p", 0.2, "--q", 0.5, "--grid", 8, "--out", out) == 0
    cell = out.read_text().splitlines()[2].split(",")[1]
    assert float(cell) != 0
    assert len(cell.replace("-", "").replace(".", "").lstrip("0")) >= 16
