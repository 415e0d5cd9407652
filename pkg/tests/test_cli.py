import numpy as np

from remimo.cli import main, parse_snr_spec


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_snr_spec():
    assert parse_snr_spec("0:24:2") == tuple(float(x) for x in range(0, 25, 2))
    assert parse_snr_spec("1,5,9") == (1.0, 5.0, 9.0)


def test_design_qpsk(capsys):
    code, out, _ = run_cli(capsys, "design", "--mod", "qpsk")
    assert code == 0
    assert f"{np.arctan(0.5):.9f}" in out
    assert "min coding gain" in out and "0.160000000" in out
    assert "injectivity" in out


def test_design_with_antenna_optimum(capsys):
    code, out, _ = run_cli(capsys, "design", "--mod", "qpsk",
                           "--k", "20", "--b3db", str(np.pi / 4))
    assert code == 0
    assert "antenna optimum" in out
    assert "g1(phi1) = 4.000000000" in out  # boundary gain for k = 20, B = pi/4


def test_verify_reports_zero_mismatches(capsys):
    code, out, _ = run_cli(capsys, "verify", "--mod", "qpsk",
                           "--trials", "1500", "--seed", "3")
    assert code == 0
    assert "mismatches       : 0" in out
    assert "exhaustive=256.0 pair=32.0 conditional=8.0" in out
    assert "config hash" in out


def test_simulate_writes_csv(tmp_path, capsys):
    out_path = tmp_path / "ber.csv"
    code, out, _ = run_cli(capsys, "simulate", "--mod", "qpsk",
                           "--snr", "0:24:2", "--trials", "1024",
                           "--seed", "5", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert len(lines) == 14  # header + 13 grid points
    assert "config hash" in out


def test_help_exits_zero(capsys):
    for sub in ("design", "verify", "simulate"):
        code, out, _ = run_cli(capsys, sub, "--help")
        assert code == 0


def test_unknown_flag_exits_two(capsys):
    code, _, err = run_cli(capsys, "simulate", "--wat")
    assert code == 2


def test_bad_snr_spec_exits_two(capsys):
    code, _, err = run_cli(capsys, "simulate", "--snr", "24:0:2")
    assert code == 2
    assert "error" in err


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text("mod = bpsk\nsnr = 0:8:4\nseed = 11\nmax_trials = 512\n"
                   "target_errors = 10  # stop early\n")
    out_path = tmp_path / "b.csv"
    code, out, _ = run_cli(capsys, "simulate", "--config", str(cfg),
                           "--seed", "12", "--out", str(out_path))
    assert code == 0
    rows = out_path.read_text().splitlines()[1:]
    assert len(rows) == 3
    assert all(row.split(",")[5] == "12" for row in rows)  # flag beats file


def test_config_file_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense_key = 3\n")
    code, _, err = run_cli(capsys, "simulate", "--config", str(bad))
    assert code == 2
    assert "unknown key" in err
    missing = tmp_path / "missing.cfg"
    code, _, err = run_cli(capsys, "simulate", "--config", str(missing))
    assert code == 2


def test_rejected_design_exits_three(tmp_path, capsys):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text(f"theta1 = {np.pi / 4}\nsnr = 0:4:4\nmax_trials = 256\n")
    code, _, err = run_cli(capsys, "simulate", "--config", str(cfg),
                           "--out", str(tmp_path / "x.csv"))
    assert code == 3
    assert "design rejected" in err


def test_physical_channel_smoke(tmp_path, capsys):
    out_path = tmp_path / "phys.csv"
    code, out, _ = run_cli(capsys, "simulate", "--channel", "physical",
                           "--snr", "0:8:4", "--trials", "2048",
                           "--out", str(out_path))
    assert code == 0
    assert len(out_path.read_text().splitlines()) == 4
