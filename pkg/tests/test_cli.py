import json
from pathlib import Path

import pytest

from cohchan.cli import main
from cohchan.sweep import read_output

GOLDEN = Path(__file__).parent / "golden"


def parse_kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


def test_coeffs(capsys):
    assert main(["coeffs", "--family", "alpha", "--n", "3"]) == 0
    assert capsys.readouterr().out.strip() == "3 3 1"
    assert main(["coeffs", "--family", "beta", "--n", "2"]) == 0
    assert capsys.readouterr().out.strip() == "3 6 2"


def test_coeffs_invalid_n(capsys):
    assert main(["coeffs", "--family", "eta", "--n", "1"]) == 1
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("args,golden", [
    (["--channel", "bitflip", "--p", "0.9", "--mu", "0.3", "--n", "3"], "report_bitflip_p0.9_mu0.3_n3.txt"),
    (["--channel", "phaseflip", "--p", "0.25", "--mu", "1", "--n", "2"], "report_phaseflip_p0.25_mu1_n2.txt"),
])
def test_report_golden(capsys, args, golden):
    assert main(["report", *args]) == 0
    out = capsys.readouterr().out
    assert out == (GOLDEN / golden).read_text()


def test_report_bit_flip_values(capsys):
    main(["report", "--channel", "bitflip", "--p", "0.9", "--mu", "0.3", "--n", "3"])
    kv = parse_kv(capsys.readouterr().out)
    assert float(kv["c_l1_norm"]) == 1.0
    assert float(kv["c_re_norm"]) == 1.0


def test_report_phase_flip_values_match_closed_forms(capsys):
    main(["report", "--channel", "phaseflip", "--p", "0.25", "--mu", "1", "--n", "2"])
    kv = parse_kv(capsys.readouterr().out)
    assert float(kv["c_l1_norm"]) == pytest.approx(2 / 3, abs=1e-12)
    assert float(kv["c_re_norm"]) == pytest.approx(0.594361, abs=1e-6)
    assert float(kv["uqc"]) == pytest.approx(float(kv["mutual_info"]), abs=1e-12)


def test_verify_exit_codes(capsys, monkeypatch):
    assert main(["verify", "--n-max", "2"]) == 0
    assert "PASS overall" in capsys.readouterr().out

    import cohchan.cli as cli
    from cohchan.verify import CheckResult, VerificationReport

    monkeypatch.setattr(cli, "verify", lambda n: VerificationReport(n, [CheckResult("x", 1.0, 0.0)]))
    assert main(["verify", "--n-max", "2"]) == 2


@pytest.mark.parametrize("argv", [
    ["report", "--channel", "phaseflip", "--p", "0.2", "--mu", "0.1"],
    ["report", "--channel", "phaseflip", "--p", "0.2", "--mu", "0.1", "--n", "2", "--bogus"],
    ["report", "--channel", "amplitude", "--p", "0.2", "--mu", "0.1", "--n", "2"],
    ["report", "--channel", "phaseflip", "--p", "1.2", "--mu", "0.1", "--n", "2"],
    ["figure", "--id", "4"],
    ["verify", "--n-max", "9"],
    ["coeffs", "--family", "gamma", "--n", "3"],
    ["launch"],
    [],
])
def test_invalid_invocations_exit_one(capsys, argv):
    assert main(argv) == 1
    assert capsys.readouterr().err


@pytest.mark.parametrize("sub", ["sweep", "figure", "verify", "coeffs", "report"])
def test_every_subcommand_has_help(capsys, sub):
    with pytest.raises(SystemExit) as exc:
        main([sub, "--help"])
    assert exc.value.code == 0
    assert "usage" in capsys.readouterr().out


def test_sweep_command(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kinds": ["phaseflip"], "p_grid": [0.25], "mu_grid": [1.0], "n_list": [2],
                               "engine": "both"}))
    out = tmp_path / "out.json"
    assert main(["sweep", "--config", str(cfg), "--out", str(out), "--format", "json"]) == 0
    rows = read_output(out, "json").rows
    assert rows[0].abs_deviation <= 1e-10
    assert main(["sweep", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.startswith("kind,N,p,mu")
    assert main(["sweep", "--config", str(tmp_path / "nope.json")]) == 1


def test_figure_two_panel_a(tmp_path):
    out = tmp_path / "fig2a.csv"
    assert main(["figure", "--id", "2", "--panel", "a", "--out", str(out)]) == 0
    rows = read_output(out).rows
    by_p = {}
    for r in rows:
        by_p.setdefault(r.p, []).append(r.c_re_norm)
    assert max(max(v) - min(v) for v in by_p.values()) <= 1e-9
