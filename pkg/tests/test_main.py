# tests/test_main.py
import json

import pytest

import config
import main


def test_roots_mode(capsys):
    assert main.main(["--mode", "roots", "--f", "1,0,1", "--x", "5"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["n,r,roots", "1,1,0", "2,1,1", "3,0,", "4,0,", "5,2,2 3"]


def test_roots_mode_prime_filter(capsys):
    main.main(["--mode", "roots", "--f", "1,0,1", "--x", "5", "--moduli", "prime"])
    rows = capsys.readouterr().out.splitlines()[1:]
    assert [row.split(",")[0] for row in rows] == ["2", "3", "5"]


def test_zero_polynomial_is_an_error(capsys):
    assert main.main(["--mode", "roots", "--f", "0", "--x", "5"]) == 2
    assert "Error: zero polynomial" in capsys.readouterr().err


def test_bad_coefficient_position(capsys):
    assert main.main(["--mode", "roots", "--f", "1,x,1", "--x", "5"]) == 2
    assert "position 2" in capsys.readouterr().err


def test_missing_f(capsys):
    assert main.main(["--mode", "weyl"]) == 2
    assert "--f" in capsys.readouterr().err


def test_weyl_json_to_file(tmp_path):
    out = tmp_path / "weyl.json"
    code = main.main(
        ["--mode", "weyl", "--f", "1,0,1", "--x", "100", "--freq=1:0,-1:0,1:0", "--format", "json", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert [(r["x"], r["h1"], r["h2"]) for r in payload["rows"]] == [(10, 1, 0), (10, -1, 0), (100, 1, 0), (100, -1, 0)]
    # S(-h) is the conjugate of S(h)
    assert payload["rows"][0]["re"] == payload["rows"][1]["re"]


def test_allow_zero_flag(capsys):
    assert main.main(["--mode", "weyl", "--f", "1,0,1", "--x", "10", "--freq", "0:0"]) == 2
    capsys.readouterr()
    assert main.main(["--mode", "weyl", "--f", "1,0,1", "--x", "10", "--freq", "0:0", "--allow-zero"]) == 0
    last = capsys.readouterr().out.splitlines()[-1].split(",")
    assert last[5] == "1"


def test_equidist_counterexample(capsys):
    args = ["--mode", "equidist", "--f", "1,0,1", "--x", "500", "--moduli", "prime", "--grid", "16"]
    assert main.main(args) == 0
    lines = capsys.readouterr().out.splitlines()
    header = lines[0].split(",")
    col = header.index("diagonal")
    assert [line.split(",")[col] for line in lines[1:]] == ["1", "1", "1"]


def test_checkpoints_and_rectangles(capsys):
    args = ["--mode", "equidist", "--f", "1,0,1", "--g", "-2,0,1", "--x", "300",
            "--checkpoints", "50,300", "--rect", "0:1/2:0:1/2,0:1:0:1", "--grid", "8", "--format", "json"]
    assert main.main(args) == 0
    payload = json.loads(capsys.readouterr().out)
    assert [cp["x"] for cp in payload["checkpoints"]] == [50, 300]
    assert [b["rect"] for b in payload["checkpoints"][0]["boxes"]] == ["0:1/2:0:1/2", "0:1:0:1"]


def test_malformed_rectangle_flag(capsys):
    assert main.main(["--mode", "equidist", "--f", "1,0,1", "--rect", "0:2:0:1"]) == 2
    assert "malformed rectangle" in capsys.readouterr().err


def test_status_lines_go_to_stderr(capsys):
    main.main(["--mode", "roots", "--f", "1,0,1", "--x", "5"])
    captured = capsys.readouterr()
    assert "[*]" in captured.err
    assert "[*]" not in captured.out


def test_quiet(capsys):
    main.main(["--mode", "roots", "--f", "1,0,1", "--x", "5", "--quiet"])
    assert capsys.readouterr().err == ""


def test_cache_flag_and_env(tmp_path, monkeypatch, capsys):
    assert main.main(["--mode", "roots", "--f", "1,0,1", "--x", "20", "--cache", str(tmp_path / "a")]) == 0
    assert (tmp_path / "a" / "roots_1_0_1.txt").exists()
    monkeypatch.setattr(config, "DEFAULT_CACHE_PATH", str(tmp_path / "b"))
    assert main.main(["--mode", "roots", "--f", "1,0,1", "--x", "20"]) == 0
    assert (tmp_path / "b" / "roots_1_0_1.txt").exists()


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main.main(["--mode", "roots", "--f", "1,0,1", "--x", "5", "--out", str(blocker / "x.csv")]) == 2
    assert "cannot write report" in capsys.readouterr().err


def test_selftest_mode_exit_code(monkeypatch):
    monkeypatch.setattr(main, "cmd_selftest", lambda: 1)
    assert main.main(["--mode", "selftest"]) == 1


def test_attach_signed_values():
    argv = ["--f", "-1,-1,0,1", "--g", "1,0,1", "--freq", "-1:0,2:-3", "--x", "10"]
    assert main.attach_signed_values(argv) == [
        "--f=-1,-1,0,1", "--g", "1,0,1", "--freq=-1:0,2:-3", "--x", "10",
    ]
    assert main.attach_signed_values(["--quiet", "--f"]) == ["--quiet", "--f"]


def test_negative_leading_coefficients_space_separated(capsys):
    args = ["--mode", "weyl", "--f", "1,0,1", "--g", "-2,0,1", "--x", "100", "--freq", "-1:0"]
    assert main.main(args) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "x,h1,h2,re,im,abs,M"
    assert [row.split(",")[:3] for row in rows[1:]] == [["10", "-1", "0"], ["100", "-1", "0"]]


def test_cubic_roots_space_separated(capsys):
    assert main.main(["--mode", "roots", "--f", "-1,-1,0,1", "--x", "7", "--moduli", "prime"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[-1] == "7,1,5"
