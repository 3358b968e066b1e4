import pytest

from tmod import cli, harness


def test_compute_text(capsys):
    assert cli.main(["compute", "--m", "-105"]) == 0
    out = capsys.readouterr().out
    assert "rk2" in out and "structure" in out


def test_compute_csv(capsys):
    assert cli.main(["--format", "csv", "compute", "--m", "223", "--method", "coates"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("m,p,")
    assert lines[1].startswith("223,2,,,4,")


def test_compute_rejects_non_squarefree(capsys):
    assert cli.main(["compute", "--m", "12"]) == 1
    assert "error" in capsys.readouterr().err


def test_density_writes_table(tmp_path):
    out = tmp_path / "t.md"
    raw = tmp_path / "raw.csv"
    rc = cli.main(["density", "--family", "plus-l", "--p", "2", "--bound", "2000", "--mod", "8",
                   "--res", "7", "--out", str(out), "--raw", str(raw), "--method", "coates"])
    assert rc == 0
    text = out.read_text()
    assert "| 4 |" in text and "predicted" in text
    assert raw.read_text().splitlines()[0] == "param,m,p,kind,value,method,error"


def test_density_csv_with_cache(tmp_path, capsys):
    cache = tmp_path / "c.csv"
    args = ["--format", "csv", "--cache", str(cache), "density", "--family", "imag-all", "--bound", "300"]
    assert cli.main(args) == 0
    first = capsys.readouterr().out
    assert cli.main(args) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("label,count,ratio")


def test_verify_pass_and_unknown(capsys):
    assert cli.main(["verify", "--suite", "l223"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert cli.main(["verify", "--suite", "nope"]) == 1


def test_verify_failure_exit_code(monkeypatch, capsys):
    def failing(bound=None):
        rep = harness.VerifyReport("always-fails", checked=1)
        rep.fail("by construction")
        return rep

    monkeypatch.setitem(harness.SUITES, "always-fails", failing)
    assert cli.main(["verify", "--suite", "always-fails"]) == 2
    assert "FAIL" in capsys.readouterr().out


def test_mod_without_res():
    with pytest.raises(SystemExit):
        cli.main(["density", "--family", "minus-l", "--bound", "100", "--mod", "16"])
