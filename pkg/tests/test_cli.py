import pytest

from quivalg import cli

from conftest import corpus_path


def run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info_kv_schema(capsys):
    code, out, _ = run(capsys, "info", corpus_path("k2"), "--format", "kv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "schema=1"
    kv = dict(line.split("=", 1) for line in lines)
    assert kv["dim"] == "3"
    assert kv["command"] == "info"


def test_kv_output_deterministic(capsys):
    a = run(capsys, "gldim", corpus_path("cycle3"), "--format", "kv")
    b = run(capsys, "gldim", corpus_path("cycle3"), "--format", "kv")
    assert a == b
    assert a[0] == 0


def test_gldim_cycle3(capsys):
    code, out, _ = run(capsys, "gldim", corpus_path("cycle3"),
                       "--format", "kv")
    assert code == 0
    assert "gldim.kind=finite" in out
    assert "gldim.value=3" in out


def test_human_format_omits_schema(capsys):
    code, out, _ = run(capsys, "info", corpus_path("k2"))
    assert code == 0
    assert "schema" not in out
    assert "dim" in out


def test_missing_file_exit_2(capsys):
    code, _, err = run(capsys, "info", "/nonexistent/file.alg")
    assert code == 2
    assert "error" in err


def test_bad_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.alg"
    bad.write_text("FIELD 101\nVERTICES 1\nARROWS\n  x: 1 -> 9\n")
    code, _, err = run(capsys, "info", str(bad))
    assert code == 2
    assert "error" in err


def test_nonpositive_cap_exit_2(capsys):
    code, _, err = run(capsys, "gldim", corpus_path("k2"), "--dmax", "0")
    assert code == 2
    assert "dmax" in err


def test_relpd_without_subalgebra_exit_2(tmp_path, capsys):
    f = tmp_path / "nosub.alg"
    f.write_text("FIELD 101\nVERTICES 1\n")
    code, _, err = run(capsys, "relpd", str(f))
    assert code == 2


def test_tower_cap_exit_3(capsys):
    # the two-loop tower exceeds the bar-complex size cap at default nmax
    code, _, err = run(capsys, "tower", corpus_path("loop2"))
    assert code == 3
    assert "cap" in err


def test_tower_needs_truncation_exit_2(capsys):
    code, _, err = run(capsys, "tower", corpus_path("k2"))
    assert code == 2


def test_hh_oracle_agreement(capsys):
    code, out, _ = run(capsys, "hh", corpus_path("loop_x2"),
                       "--nmax", "3", "--oracle", "--format", "kv")
    assert code == 0
    kv = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert [kv[f"hh.{n}"] for n in range(4)] == ["2", "1", "1", "1"]
    assert kv["oracle.agrees"] == "yes"


def test_field_override(capsys):
    code, out, _ = run(capsys, "info", corpus_path("k2"),
                       "--field", "7", "--format", "kv")
    assert code == 0
    assert "field=7" in out


def test_check_loop_x2(capsys):
    code, out, _ = run(capsys, "check", corpus_path("loop_x2"),
                       "--format", "kv")
    assert code == 0
    kv = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert kv["proj_bounded"] == "yes"
    assert kv["strongly_proj_bounded"] == "no"
    assert kv["r.kind"] == "infinite"


def test_jz_gps3(capsys):
    code, out, _ = run(capsys, "jz", corpus_path("gps3"), "--format", "kv")
    assert code == 0
    assert "jz.passed=yes" in out


def test_relpd_tri3(capsys):
    code, out, _ = run(capsys, "relpd", corpus_path("tri3"),
                       "--format", "kv")
    assert code == 0
    kv = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert kv["rel_pd.simple.0.kind"] == "finite"
    assert int(kv["rel_pd.simple.0.value"]) <= 2
