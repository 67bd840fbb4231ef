import io
import subprocess
import sys

import pytest

from superdd.cli import main
from superdd.core import format_design, parse_design


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def dd21_file(tmp_path, dd21):
    p = tmp_path / "dd21.dd"
    p.write_text(format_design(dd21))
    return p


def test_verify_pass_and_fail(capsys, tmp_path, dd21, dd21_file):
    code, out, _ = run(["verify", str(dd21_file)], capsys)
    assert code == 0 and out.startswith("RESULT pass")
    bad = tmp_path / "bad.dd"
    bad.write_text(format_design(dd21.with_blocks(dd21.blocks[1:])))
    code, out, _ = run(["verify", str(bad)], capsys)
    assert code == 1 and "VIOLATION" in out


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(["verify", "/nonexistent/x.dd"], capsys)
    assert code == 2 and "cannot read" in err


def test_unknown_command(capsys):
    assert run(["frobnicate"], capsys)[0] == 2


def test_bound_with_minimum(capsys, dd21_file):
    code, out, _ = run(["bound", str(dd21_file), "--min", "1/2"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "BOUND 21 OF 42 MODE exactVC"
    assert "FRACTION 21/42" in out
    code, _, _ = run(["bound", str(dd21_file), "--min", "3/4"], capsys)
    assert code == 1


def test_trades_listing(capsys, dd21_file):
    code, out, _ = run(["trades", str(dd21_file)], capsys)
    assert code == 0 and out.startswith("TRADES 84 BLOCKS 42")


def test_defining_hits(capsys, tmp_path, dd11):
    p = tmp_path / "dd11.dd"
    p.write_text(format_design(dd11))
    code, out, _ = run(["defining", str(p), "--blocks", "0,1"], capsys)
    assert code == 0 and out == "HITS_ALL_TRADES yes\n"
    code, out, _ = run(["defining", str(p), "--blocks", "0,1,2", "--complete"], capsys)
    assert code == 0 and "COMPLETIONS 1 " in out
    assert run(["defining", str(p), "--blocks", "x"], capsys)[0] == 2


def test_catalog_show_pipes_into_verify(capsys, monkeypatch):
    code, out, _ = run(["catalog", "show", "DGDD(5^7)"], capsys)
    assert code == 0
    assert parse_design(out).b == 105
    code, out, _ = run(["verify", "-"], capsys, stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and "COUNT blocks=105" in out


def test_catalog_show_errors(capsys):
    code, _, err = run(["catalog", "show", "15"], capsys)
    assert code == 2 and "no super-simple" in err
    code, _, err = run(["catalog", "show", "DD(2l)"], capsys)
    assert code == 2 and "nearest" in err


def test_catalog_audit_single(capsys):
    code, out, _ = run(["catalog", "audit", "DGDD(5^5)", "--threads", "1"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "SUMMARY 1 pass 0 fail"


def test_develop_and_compose(capsys, tmp_path):
    spec = tmp_path / "x.spec"
    spec.write_text("design DD(21)\nspace mod 21\ndevelop +1 mod 21\n"
                    "base (0,1,4,14,16)\nbase (1,0,18,8,6)\n")
    code, out, _ = run(["develop", str(spec)], capsys)
    assert code == 0 and parse_design(out).b == 42
    spec.write_text("design X\nspace mod 21\nbase (0,1,2 3,4)\n")
    code, _, err = run(["develop", str(spec)], capsys)
    assert code == 2 and "line 3" in err
    recipe = tmp_path / "r.txt"
    recipe.write_text("master td:5,5\nweight default 2\n")
    code, _, err = run(["compose", str(recipe)], capsys)
    assert code == 2 and "ingredient" in err


def test_spectrum(capsys):
    code, out, _ = run(["spectrum", "155"], capsys)
    assert code == 0 and out.startswith("PLAN v=155 route=open open")
    code, _, err = run(["spectrum", "12"], capsys)
    assert code == 2 and "1 or 5 mod 10" in err
    code, out, _ = run(["spectrum", "105", "--build"], capsys)
    assert code == 0 and parse_design(out).b == 1092


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "superdd.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("superdd ")
