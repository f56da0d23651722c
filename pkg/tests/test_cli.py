import json
import subprocess
import sys

import pytest

from rfrskit.cli import RunConfig, run

PY = [sys.executable, "-m", "rfrskit"]


def invoke(args, cwd=None):
    proc = subprocess.run(PY + args, capture_output=True, text=True, cwd=cwd)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def bad_chain(tmp_path):
    path = tmp_path / "bad_chain.txt"
    path.write_text("1 0 0\n0 1 0\n0 0 1\n\n2 0 0\n0 2 0\n0 0 2\n")
    return str(path)


@pytest.fixture
def good_chain(tmp_path):
    path = tmp_path / "good_chain.txt"
    path.write_text("1 0 0\n0 1 0\n0 0 1\n\n2 0 0\n0 1 0\n0 0 1\n\n2 0 0\n0 2 0\n0 0 1\n")
    return str(path)


@pytest.fixture
def path3_graph(tmp_path):
    path = tmp_path / "path3.txt"
    path.write_text("3\n0 1\n1 2\n")
    return str(path)


def test_analyze_heisenberg_exit0():
    code, out, _ = invoke(["analyze", "--group", "heisenberg"])
    assert code == 0
    assert "center rank: 1" in out
    assert "Hirsch rank: 3" in out
    assert "abelianization: Z^2" in out
    assert "injective: False" in out
    assert "witness: [0, 0, 1]" in out


def test_obstruct_heisenberg_exit0():
    code, out, _ = invoke(["rfrs-obstruct", "--group", "heisenberg", "--max-index", "8"])
    assert code == 0
    assert "all_pass: True" in out


def test_verify_bad_chain_exit1(bad_chain):
    code, out, _ = invoke(["rfrs-verify", "--group", "heisenberg", "--chain", bad_chain])
    assert code == 1
    assert "kernel contained False" in out


def test_verify_good_chain_exit0(good_chain):
    code, out, _ = invoke(["rfrs-verify", "--group", "heisenberg", "--chain", good_chain])
    assert code == 0
    assert "trapped central witness: [0, 0, 1]" in out


def test_golden_json_byte_identical(bad_chain):
    """The three documented invocations are deterministic byte for byte."""
    invocations = [
        (["analyze", "--group", "heisenberg", "--json"], 0),
        (["rfrs-obstruct", "--group", "heisenberg", "--max-index", "8", "--json"], 0),
        (["rfrs-verify", "--group", "heisenberg", "--chain", bad_chain, "--json"], 1),
    ]
    for args, expected_code in invocations:
        code1, out1, _ = invoke(args)
        code2, out2, _ = invoke(args)
        assert code1 == code2 == expected_code
        assert out1 == out2
        json.loads(out1)  # valid JSON


def test_json_schema_stable_across_rfrs_commands(bad_chain):
    _, out1, _ = invoke(["rfrs-verify", "--group", "heisenberg", "--chain", bad_chain, "--json"])
    _, out2, _ = invoke(["rfrs-obstruct", "--group", "heisenberg", "--json"])
    r1, r2 = json.loads(out1), json.loads(out2)
    shared = {"command", "group", "overall", "steps", "intersection_rank", "witness", "checked_subgroups"}
    assert shared <= set(r1) and shared <= set(r2)
    for r in (r1, r2):
        for s in r["steps"]:
            assert set(s) == {"index", "normal", "kernel_contained"}


def test_restrict_command(good_chain, tmp_path):
    sub = tmp_path / "sub.txt"
    sub.write_text("2 0 0\n0 1 0\n0 0 1\n")
    code, out, _ = invoke(
        ["rfrs-restrict", "--group", "heisenberg", "--chain", good_chain, "--restrict-to", str(sub)]
    )
    assert code == 0
    assert "overall: True" in out


def test_raag_nf_command(path3_graph):
    code, out, _ = invoke(["raag-nf", "--graph", path3_graph, "--word", "b,a"])
    assert code == 0
    assert "normal form: a,b" in out
    code, out, _ = invoke(["raag-nf", "--graph", path3_graph, "--word", "c,a"])
    assert code == 0
    assert "normal form: c,a" in out


def test_raag_magnus_command(path3_graph):
    code, out, _ = invoke(
        ["raag-magnus", "--graph", path3_graph, "--word", "a,c,a^-1,c^-1", "--degree", "2", "--json"]
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["is_one"] is False
    coeffs = {tuple(t["monomial"]): t["coefficient"] for t in rep["terms"]}
    assert coeffs[(0, 2)] == "1" and coeffs[(2, 0)] == "-1"


def test_raag_rtfn_command(path3_graph):
    code, out, _ = invoke(["raag-rtfn", "--graph", path3_graph, "--max-len", "3"])
    assert code == 0
    assert "True" in out


def test_exit2_on_missing_file():
    code, _, err = invoke(["rfrs-verify", "--group", "heisenberg", "--chain", "/nonexistent"])
    assert code == 2
    assert "chain file not found" in err


def test_exit2_on_unknown_group():
    code, _, err = invoke(["analyze", "--group", "quaternion"])
    assert code == 2
    assert "unknown group builder" in err


def test_exit2_on_resource_cap(path3_graph):
    code, _, err = invoke(["raag-rtfn", "--graph", path3_graph, "--max-len", "9"])
    assert code == 2
    assert "resource cap exceeded" in err


def test_exit2_on_abelian_obstruct():
    code, _, err = invoke(["rfrs-obstruct", "--group", "free_abelian(2)"])
    assert code == 2
    assert "nonabelian" in err


def test_run_config_api(bad_chain):
    cfg = RunConfig(command="rfrs-verify", group="heisenberg", chain=bad_chain)
    assert run(cfg) == 1
    cfg = RunConfig(command="analyze", group="heisenberg")
    assert run(cfg) == 0
    cfg = RunConfig(command="analyze")
    assert run(cfg) == 2


def test_group_from_presentation_file(tmp_path):
    path = tmp_path / "heis.txt"
    path.write_text("3 2\n1 2 : -1\n")
    code, out, _ = invoke(["analyze", "--group", str(path)])
    assert code == 0
    assert "Hirsch rank: 3" in out


def test_analyze_ut4():
    code, out, _ = invoke(["analyze", "--group", "ut(4)"])
    assert code == 0
    assert "Hirsch rank: 6" in out
    assert "center rank: 1" in out
