import subprocess
import sys

import pytest

from ltwptas.cli import main
from ltwptas.generators import complete, grid, path, planar
from ltwptas.graph import parse_graph, serialize_graph
from ltwptas.treedecomp import parse_td, validate


def _write(tmp_path, name, g):
    p = tmp_path / name
    p.write_text(serialize_graph(g))
    return str(p)


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def _record(text):
    fields = {}
    for line in text.splitlines():
        if "=" in line and not line.startswith(("b ", "t ")):
            key, value = line.split("=", 1)
            fields.setdefault(key, value)
    return fields


def _untimed(text):
    return [line for line in text.splitlines() if not line.startswith("time_")]


# -- solve -------------------------------------------------------------------------

def test_solve_ptas_record(tmp_path, capsys):
    g = _write(tmp_path, "g.col", grid(4, 4))
    code, out, _ = _run(capsys, "solve", "vc", g, "--ptas", "0.5")
    rec = _record(out)
    assert code == 0
    assert rec["command"] == "solve" and rec["k"] == "2" and rec["feasible"] == "true"
    assert rec["n"] == "16" and rec["m"] == "24" and len(rec["digest"]) == 16
    assert int(rec["value"]) == len(rec["vertices"].split(","))


def test_solve_exact_matches_brute(tmp_path, capsys):
    g = _write(tmp_path, "g.col", grid(3, 3))
    _, exact, _ = _run(capsys, "solve", "ds", g, "--exact")
    _, oracle, _ = _run(capsys, "solve", "ds", g, "--oracle")
    assert _record(exact)["value"] == _record(oracle)["value"] == "3"


def test_oracle_over_ceiling_is_usage_error(tmp_path, capsys):
    g = _write(tmp_path, "g.col", path(30))
    code, _, err = _run(capsys, "solve", "is", g, "--oracle")
    assert code == 1 and "ceiling" in err


def test_oracle_compare_reports_ratio(tmp_path, capsys):
    g = _write(tmp_path, "g.col", planar(16, 3))
    code, out, _ = _run(capsys, "solve", "ds", g, "--ptas", "1", "--oracle-compare")
    rec = _record(out)
    assert code == 0 and float(rec["ratio"]) <= 2 and rec["within_bound"] == "true"


def test_solve_with_apex_file(tmp_path, capsys):
    g = _write(tmp_path, "g.col", complete(4))
    apex = tmp_path / "apex.txt"
    apex.write_text("1\n")
    code, out, _ = _run(capsys, "solve", "vc", g, "--ptas", "1/2", "--apex-file", apex, "--mu", "1")
    assert code == 0 and _record(out)["feasible"] == "true"


def test_generated_cliquesum_round_trip(tmp_path, capsys):
    gpath, cpath = tmp_path / "cs.col", tmp_path / "cs.csd"
    code, _, _ = _run(capsys, "generate", "clique-sum", "3", "8", "--adhesion", "2", "--seed", "4",
                      "--out", gpath, "--csd-out", cpath)
    assert code == 0
    code, out, _ = _run(capsys, "solve", "is", gpath, "--ptas", "0.5", "--csd-file", cpath)
    assert code == 0 and _record(out)["feasible"] == "true"


def test_csd_file_requires_ptas(tmp_path, capsys):
    gpath, cpath = tmp_path / "cs.col", tmp_path / "cs.csd"
    _run(capsys, "generate", "clique-sum", "2", "6", "--out", gpath, "--csd-out", cpath)
    code, _, _ = _run(capsys, "solve", "vc", gpath, "--exact", "--csd-file", cpath)
    assert code == 1


def test_missing_and_malformed_input(tmp_path, capsys):
    code, _, err = _run(capsys, "solve", "vc", tmp_path / "nope.col")
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 2 1\ne 1 1\n")
    code, _, err = _run(capsys, "solve", "vc", bad)
    assert code == 1 and "line 2" in err


def test_bad_flags_exit_one(tmp_path, capsys):
    g = _write(tmp_path, "g.col", path(3))
    for argv in (["solve", "tsp", g], ["solve", "vc", g, "--ptas", "0"],
                 ["solve", "vc", g, "--exact", "--oracle"], ["frobnicate"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
    capsys.readouterr()


def test_records_deterministic_apart_from_timing(tmp_path, capsys):
    g = _write(tmp_path, "g.col", planar(15, 2))
    first = _run(capsys, "solve", "ds", g, "--ptas", "0.5")[1]
    second = _run(capsys, "solve", "ds", g, "--ptas", "0.5")[1]
    assert _untimed(first) == _untimed(second)
    assert any(line.startswith("time_") for line in first.splitlines())


# -- decompose --------------------------------------------------------------------------

def test_decompose_exact_with_certificate(tmp_path, capsys):
    gg = grid(4, 4)
    g = _write(tmp_path, "g.col", gg)
    code, out, _ = _run(capsys, "decompose", "--exact", g)
    rec = _record(out)
    assert code == 0 and rec["width"] == "4" and rec["valid"] == "true" and rec["exact"] == "true"
    body = out.split("begin td\n")[1].split("end td")[0]
    assert validate(parse_td(body, gg), gg).valid


def test_decompose_sqrt_grid(tmp_path, capsys):
    g = _write(tmp_path, "grid10.col", grid(10, 10))
    td_file = tmp_path / "out.td"
    code, out, _ = _run(capsys, "decompose", "--sqrt", "3", g, "--out", td_file)
    rec = _record(out)
    assert code == 0 and rec["valid"] == "true" and rec["sqrt_bound"] == "51"
    assert int(rec["width"]) <= 51 and td_file.exists()


def test_decompose_sqrt_with_apex(tmp_path, capsys):
    gpath, apath = tmp_path / "a.col", tmp_path / "a.apex"
    _run(capsys, "generate", "grid", "5", "5", "--mu", "2", "--out", gpath, "--apex-out", apath)
    code, out, _ = _run(capsys, "decompose", "--sqrt", "3", gpath, "--apex", "2", apath)
    assert code == 0 and _record(out)["valid"] == "true"


def test_decompose_over_class(tmp_path, capsys):
    ok = _write(tmp_path, "p.col", path(6))
    k5 = _write(tmp_path, "k5.col", complete(5))
    code, out, _ = _run(capsys, "decompose", "--over-class", "tw2", ok)
    assert code == 0 and _record(out)["accepted"] == "true"
    code, out, _ = _run(capsys, "decompose", "--over-class", "tw2", k5)
    assert code == 2 and _record(out)["accepted"] == "false"


# -- ltw ---------------------------------------------------------------------------------

def test_ltw_grid_passes(tmp_path, capsys):
    g = _write(tmp_path, "grid6.col", grid(6, 6))
    code, out, _ = _run(capsys, "ltw", g, "--rmax", "3", "--check", "3")
    rec = _record(out)
    assert code == 0 and rec["passed"] == "true"
    assert [rec[f"check_r{r}"] for r in range(4)] == ["pass"] * 4


def test_ltw_k5_fails(tmp_path, capsys):
    g = _write(tmp_path, "k5.col", complete(5))
    code, out, _ = _run(capsys, "ltw", g, "--rmax", "1", "--check", "1")
    rec = _record(out)
    assert code == 2 and rec["passed"] == "false" and rec["check_r1"].startswith("fail witness=")


# -- bench and generate --------------------------------------------------------------------

def test_bench_ratio_table(tmp_path, capsys):
    corpus = tmp_path / "grids"
    corpus.mkdir()
    for a in (2, 3, 4):
        (corpus / f"grid{a}.col").write_text(serialize_graph(grid(a, a)))
    code, out, _ = _run(capsys, "bench", corpus, "ratio-vc", "--seed", "7")
    rows = [line for line in out.splitlines() if line.startswith("row=")]
    assert code == 0 and len(rows) == 3
    assert all("opt=" in r and "ratio=" in r and r.endswith("ok=true") for r in rows)
    assert _record(out)["passed"] == "3"


def test_bench_unknown_suite(tmp_path, capsys):
    code, _, err = _run(capsys, "bench", tmp_path, "speed")
    assert code == 1 and "unknown suite" in err


def test_generate_is_deterministic(capsys):
    _, a, _ = _run(capsys, "generate", "planar", "12", "--seed", "3")
    _, b, _ = _run(capsys, "generate", "planar", "12", "--seed", "3")
    assert a == b and parse_graph(a).n == 12


def test_console_entry_point(tmp_path):
    g = _write(tmp_path, "g.col", path(4))
    proc = subprocess.run([sys.executable, "-m", "ltwptas.cli", "solve", "vc", g],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "value=2" in proc.stdout
