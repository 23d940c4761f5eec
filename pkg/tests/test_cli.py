import csv
import json

import numpy as np
import pytest

from analytic_pr import up_to_sign_error
from analytic_pr.cli import build_parser, main


def _read_complex(path):
    d = json.loads(path.read_text())
    return np.asarray(d["re"]) + 1j * np.asarray(d["im"])


def _round_trip(tmp_path, case_args, case="1"):
    sig = tmp_path / "signal.json"
    win = tmp_path / "windows.json"
    meas = tmp_path / "meas.csv"
    rec = tmp_path / "recovered.json"
    assert main(["gen-signal", "--n", "8", "--seed", "3", "--output", str(sig)]) == 0
    assert (
        main(
            ["gen-window", "--case", case, "--n", "8", "--seed", "4",
             "--output", str(win), *case_args]
        )
        == 0
    )
    assert (
        main(["measure", "--signal", str(sig), "--windows", str(win),
              "--output", str(meas)])
        == 0
    )
    assert (
        main(["recover", "--measurements", str(meas), "--windows", str(win),
              "--output", str(rec)])
        == 0
    )
    return _read_complex(sig), _read_complex(rec)


def test_round_trip_case1(tmp_path):
    z, z_hat = _round_trip(tmp_path, ["--bandlimit", "3", "--i", "5"])
    assert up_to_sign_error(z_hat, z) <= 1e-9


def test_round_trip_case2(tmp_path):
    z, z_hat = _round_trip(tmp_path, ["--i", "2"], case="2")
    assert up_to_sign_error(z_hat, z) <= 1e-9


def test_round_trip_case3(tmp_path):
    z, z_hat = _round_trip(tmp_path, [], case="3")
    assert up_to_sign_error(z_hat, z) <= 1e-9


def test_measure_json_format(tmp_path):
    sig, win = tmp_path / "s.json", tmp_path / "w.json"
    meas, rec = tmp_path / "m.json", tmp_path / "r.json"
    main(["gen-signal", "--n", "8", "--seed", "5", "--output", str(sig)])
    main(["gen-window", "--case", "3", "--n", "8", "--seed", "6", "--output", str(win)])
    assert (
        main(["measure", "--signal", str(sig), "--windows", str(win),
              "--format", "json", "--output", str(meas)])
        == 0
    )
    payload = json.loads(meas.read_text())
    assert payload["case"] == "case3" and len(payload["measurements"]) == 11
    assert (
        main(["recover", "--measurements", str(meas), "--windows", str(win),
              "--output", str(rec)])
        == 0
    )
    assert up_to_sign_error(_read_complex(rec), _read_complex(sig)) <= 1e-9


def test_gen_window_figure(tmp_path):
    win = tmp_path / "w.json"
    fig = tmp_path / "w.png"
    code = main(
        ["gen-window", "--case", "1", "--n", "8", "--bandlimit", "3", "--i", "5",
         "--seed", "7", "--output", str(win), "--figure", str(fig)]
    )
    assert code == 0
    assert fig.exists() and fig.stat().st_size > 1000


def test_run_reports(tmp_path):
    out = tmp_path / "results"
    code = main(
        ["run", "--case", "1", "--n-list", "6,8", "--trials", "3",
         "--seed", "11", "--output-dir", str(out)]
    )
    assert code == 0
    assert (out / "trials.csv").exists()
    assert (out / "summary.json").exists()
    assert (out / "success_rate.png").exists()
    assert (out / "error_distribution.png").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert [c["n"] for c in summary["cells"]] == [6, 8]
    with open(out / "trials.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["seed", "n", "case", "error", "status", "wall_time_ms"]
    assert len(rows) == 1 + 6


def test_run_determinism_modulo_timing(tmp_path):
    args = ["run", "--case", "3", "--n-list", "6,8", "--trials", "2",
            "--seed", "21", "--no-figures"]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--output-dir", str(out_a)]) == 0
    assert main(args + ["--output-dir", str(out_b)]) == 0
    assert not (out_a / "success_rate.png").exists()

    def stable_rows(p):
        with open(p / "trials.csv", newline="") as fh:
            return [row[:-1] for row in csv.reader(fh)]

    assert stable_rows(out_a) == stable_rows(out_b)
    assert (out_a / "summary.json").read_bytes() == (out_b / "summary.json").read_bytes()


def test_run_noise_flag_changes_errors(tmp_path):
    base = ["run", "--case", "1", "--n-list", "8", "--trials", "2",
            "--seed", "31", "--no-figures"]
    clean, noisy = tmp_path / "clean", tmp_path / "noisy"
    assert main(base + ["--output-dir", str(clean)]) == 0
    assert main(base + ["--noise-sigma", "1e-9", "--output-dir", str(noisy)]) == 0
    errs = lambda p: json.loads((p / "summary.json").read_text())["cells"][0]["median_error"]
    assert errs(clean) != errs(noisy)


def test_demo_case1_triangle(capsys):
    assert main(["demo", "--case", "1", "--n", "6", "--seed", "2"]) == 0
    out = capsys.readouterr().out
    assert "case1: n=6, bandlimit=3, zero run starts at 3" in out
    assert "row 1  k= 3" in out and "z[3]*w[0]" in out
    assert "z[2]*w[0]  z[3]*w[1]" in out
    assert "z[1]*w[0]  z[2]*w[1]  z[3]*w[2]" in out
    assert "z[0]*w[0]  z[1]*w[1]  z[2]*w[2]" in out
    assert "measurements (window, k, m -> magnitude):" in out
    err = float(out.rsplit("up-to-sign error:", 1)[1].strip())
    assert err <= 1e-8


def test_demo_case2_and_case3_annotations(capsys):
    assert main(["demo", "--case", "2", "--n", "6", "--seed", "2"]) == 0
    out2 = capsys.readouterr().out
    assert "z[0]*w[3]" in out2 and "z[3]*w[0]" in out2
    assert "all four windows" in out2
    assert main(["demo", "--case", "3", "--n", "8", "--seed", "2"]) == 0
    out3 = capsys.readouterr().out
    assert "z[0]*w[4]" in out3 and "z[4]*w[0]" in out3
    assert "both windows" in out3


def test_demo_zero_signal_reports_named_abort(capsys):
    assert main(["demo", "--case", "1", "--n", "6", "--zero"]) == 0
    out = capsys.readouterr().out
    assert "recovery aborted: DegenerateSignal" in out


def test_error_exit_codes(tmp_path, capsys):
    # missing required per-case argument
    assert main(["gen-window", "--case", "1", "--n", "8"]) == 1
    assert "error:" in capsys.readouterr().err
    # pinned case 3 geometry contradicted
    assert main(["gen-window", "--case", "3", "--n", "8", "--bandlimit", "3"]) == 1
    # missing --output where one is required
    assert main(["gen-signal", "--n", "8"]) == 1
    assert "--output" in capsys.readouterr().err
    # malformed m-triple
    sig, win = tmp_path / "s.json", tmp_path / "w.json"
    main(["gen-signal", "--n", "8", "--output", str(sig)])
    main(["gen-window", "--case", "3", "--n", "8", "--output", str(win)])
    assert (
        main(["measure", "--signal", str(sig), "--windows", str(win),
              "--m-triple", "0,1", "--output", str(tmp_path / "m.csv")])
        == 1
    )
    # unknown subcommand exits through argparse
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_recover_rejects_tampered_window_file(tmp_path, capsys):
    sig, win = tmp_path / "s.json", tmp_path / "w.json"
    meas, rec = tmp_path / "m.csv", tmp_path / "r.json"
    main(["gen-signal", "--n", "8", "--seed", "8", "--output", str(sig)])
    main(["gen-window", "--case", "1", "--n", "8", "--bandlimit", "3", "--i", "5",
          "--seed", "9", "--output", str(win)])
    main(["measure", "--signal", str(sig), "--windows", str(win),
          "--output", str(meas)])
    payload = json.loads(win.read_text())
    # zero the band entry the recursion divides through
    idx = (5 + 8 - 3 + 1) % 8
    payload["re"][idx] = 0.0
    payload["im"][idx] = 0.0
    win.write_text(json.dumps(payload))
    assert (
        main(["recover", "--measurements", str(meas), "--windows", str(win),
              "--output", str(rec)])
        == 1
    )
    assert "InvalidWindow" in capsys.readouterr().err


def test_parser_help_smoke():
    parser = build_parser()
    assert parser.prog == "analytic-pr"
    with pytest.raises(SystemExit) as exc:
        parser.parse_args(["--help"])
    assert exc.value.code == 0
