"""Command-line surface: pipelines, exit statuses, output determinism."""

import pytest

from lemsim.cli import main

FERRO3 = """
[cluster]
n = 3
j = -1.0
bias = 0.1
tunneling = 0.038

[noise]
z_noise = 0.038
x_noise = 0.038
kind = ou
tau = 2.6

[run]
seed = 7
"""

SWEEP = """
[sweep]
n_values = 2 3 4
ratios = 0.01
channels = rates

[run]
seed = 99
"""


@pytest.fixture
def ferro3_cfg(tmp_path):
    path = tmp_path / "ferro3.cfg"
    path.write_text(FERRO3)
    return path


@pytest.fixture
def sweep_cfg(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(SWEEP)
    return path


def run_cli(*args):
    return main([str(a) for a in args])


def test_landscape_pipeline(ferro3_cfg, tmp_path, capsys):
    out = tmp_path / "landscape.csv"
    assert run_cli("landscape", "--config", ferro3_cfg, "--out", out) == 0
    text = out.read_text()
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    assert lines[0] == "configuration,energy,distance_to_global,is_global"
    assert lines[1].startswith("000,")
    assert lines[2].startswith("111,")
    assert ",3,false" in lines[2]
    summary = capsys.readouterr().err
    assert "global 000" in summary


def test_spectrum_pipeline(ferro3_cfg, tmp_path):
    out = tmp_path / "spec.csv"
    assert run_cli("spectrum", "--config", ferro3_cfg, "--out", out, "--quiet") == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "index,eigenvalue"
    assert len(lines) == 1 + 8
    values = [float(l.split(",")[1]) for l in lines[1:]]
    assert values == sorted(values)


def test_overlaps_pipeline(ferro3_cfg, tmp_path):
    out = tmp_path / "overlaps.csv"
    assert run_cli("overlaps", "--config", ferro3_cfg, "--out", out, "--quiet") == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    # two anchors, distances 0..3 each
    assert len(lines) == 1 + 2 * 4


def test_rates_pipeline(ferro3_cfg, tmp_path):
    out = tmp_path / "rates.csv"
    assert run_cli("rates", "--config", ferro3_cfg, "--out", out, "--quiet") == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    record = lines[1].split(",")
    assert header[:3] == ["matrix_element", "rate_ratio", "rate_bound"]
    ratio = float(record[header.index("rate_ratio")])
    bound = float(record[header.index("rate_bound")])
    assert 0 < ratio < bound * 100


def test_pathsum_pipeline(ferro3_cfg, tmp_path):
    out = tmp_path / "pathsum.csv"
    assert run_cli("pathsum", "--config", ferro3_cfg, "--out", out, "--quiet") == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(lines) == 1 + 3  # orders 1..3
    assert lines[1].split(",")[0] == "1"


def test_dynamics_pipeline_and_determinism(tmp_path):
    cfg = tmp_path / "dyn.cfg"
    cfg.write_text(
        FERRO3
        + """
[dynamics]
time_step = auto
total_time = 10.0
trajectories = 8
"""
    )
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run_cli("dynamics", "--config", cfg, "--out", a, "--quiet") == 0
    assert run_cli("dynamics", "--config", cfg, "--out", b, "--quiet") == 0
    assert a.read_bytes() == b.read_bytes()
    lines = [l for l in a.read_text().splitlines() if not l.startswith("#")]
    assert lines[0].split(",")[:3] == ["time", "coherence", "ensemble_coherence"]
    assert float(lines[1].split(",")[1]) == pytest.approx(0.5, abs=1e-12)


def test_sweep_pipeline_byte_identical(sweep_cfg, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run_cli("sweep", "--config", sweep_cfg, "--out", a, "--quiet") == 0
    assert run_cli("sweep", "--config", sweep_cfg, "--out", b, "--quiet") == 0
    assert a.read_bytes() == b.read_bytes()
    lines = [l for l in a.read_text().splitlines() if not l.startswith("#")]
    assert lines[0].startswith("n,ratio,a_typ")
    assert len(lines) == 1 + 3


def test_seed_override_changes_metadata(sweep_cfg, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run_cli("sweep", "--config", sweep_cfg, "--out", a, "--quiet") == 0
    assert run_cli("sweep", "--config", sweep_cfg, "--out", b, "--quiet", "--seed", 1) == 0
    assert a.read_bytes() != b.read_bytes()
    assert "# seed = 1" in b.read_text()


def test_config_echo_in_metadata(sweep_cfg, tmp_path):
    out = tmp_path / "rows.csv"
    assert run_cli("sweep", "--config", sweep_cfg, "--out", out, "--quiet") == 0
    text = out.read_text()
    assert "# config-begin" in text
    assert "# n_values = 2 3 4" in text
    assert "# lemsim" in text


def test_unknown_subcommand_exits_one(capsys):
    assert run_cli("frobnicate", "--config", "x.cfg") == 1


def test_missing_subcommand_exits_one(capsys):
    assert main([]) == 1


def test_missing_config_file_exits_one(tmp_path, capsys):
    assert run_cli("landscape", "--config", tmp_path / "nope.cfg") == 1


def test_config_error_exit_status(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[cluster]\nn = 3\nbogus = 1\n")
    assert run_cli("landscape", "--config", bad) == 1
    assert "bogus" in capsys.readouterr().err


def test_capacity_error_exit_status(tmp_path, capsys):
    big = tmp_path / "big.cfg"
    big.write_text("[cluster]\nn = 15\nj = -1.0\nbias = 0.1\n")
    assert run_cli("landscape", "--config", big) == 3


def test_numerical_error_exit_status(tmp_path, capsys):
    # degenerate single-flip gap makes the typical spacing undefined
    cfg = tmp_path / "degen.cfg"
    cfg.write_text(
        """
[cluster]
n = 2
j_upper = 0.0
bias = 0.0 0.4
tunneling = 0.01

[dynamics]
anchors = 00 11
"""
    )
    assert run_cli("rates", "--config", cfg) == 2


def test_help_exits_zero():
    assert main(["--help"]) == 0
