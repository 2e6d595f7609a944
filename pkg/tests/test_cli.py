import json

import pytest

from gforge import corpus
from gforge.cli import ExprError, main, parse_family, parse_progression, parse_set_expr
from gforge.graph import Edge, Graph
from gforge.semigroups import NkFamily, Progression
from gforge.boundary import set_str


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


# ------------------------------------------------------------------- check

def test_check_pi_verdicts(capsys):
    code, rep = run_json(capsys, "check", "pi", "--graph", "g2")
    assert code == 0 and rep["holds"] is True
    code, rep = run_json(capsys, "check", "pi", "--graph", "g1")
    assert code == 1 and rep["holds"] is False
    assert rep["k_witness"] == ["v", "a"]


def test_check_l_and_k(capsys):
    code, rep = run_json(capsys, "check", "l", "--graph", "g1")
    assert code == 1 and rep["witness"] == "a"
    code, rep = run_json(capsys, "check", "l", "--graph", "g2")
    assert code == 0 and rep["witness"] is None
    code, rep = run_json(capsys, "check", "k", "--graph", "g4")
    assert code == 1


def test_check_tf(capsys):
    code, rep = run_json(capsys, "check", "tf", "--graph", "g2",
                         "--word-bound", "6")
    assert code == 0 and rep["free"] and rep["verified"]
    code, rep = run_json(capsys, "check", "tf", "--graph", "g1")
    assert code == 1 and rep["free"] is False


def test_check_action_sigma_invariance(capsys):
    code, rep = run_json(capsys, "check", "action", "--graph", "g1")
    assert code == 0 and rep["failures"] == []
    code, rep = run_json(capsys, "check", "sigma", "--graph", "g3",
                         "--depth", "2")
    assert code == 0
    code, rep = run_json(capsys, "check", "invariance", "--graph", "g2",
                         "--depth", "2")
    assert code == 0 and rep["violations"] == []


# ----------------------------------------------------------------- witness

def test_witness_found_and_refused(capsys):
    code, rep = run_json(capsys, "witness", "g2", "Z(v)")
    assert code == 0 and rep["found"] and rep["verified"]
    code, rep = run_json(capsys, "witness", "g1", "Z(v)")
    assert code == 2 and rep["found"] is False


def test_witness_expand(capsys):
    code, rep = run_json(capsys, "witness", "g2", "Z(v)", "--expand", "4")
    assert code == 0
    assert rep["expanded"] == {"count": 4, "verified": True}


def test_witness_union_expression(capsys):
    code, rep = run_json(capsys, "witness", "g2", "Z(a.a - {b}) + Z(b.a)")
    assert code == 0 and rep["verified"]
    assert rep["set"].startswith("Z(")


# ----------------------------------------------------------- set expressions

def test_parse_set_expr_shapes():
    g = corpus.by_name("g2")
    U = parse_set_expr(g, "Z(v)")
    assert set_str(U) == "Z(v)"
    U = parse_set_expr(g, "Z(a.b - {a}) + Z(b)")
    assert len(U.parts) == 2
    # excluding every receiver empties the cylinder, which then drops out
    U = parse_set_expr(g, "Z(a.b - {a, b}) + Z(b)")
    assert len(U.parts) == 1
    with pytest.raises(ExprError):
        parse_set_expr(g, "Q(v)")
    with pytest.raises(ExprError):
        parse_set_expr(g, "Z(zz)")
    with pytest.raises(ExprError):
        parse_set_expr(g, "Z(v - {a.b})")


def test_parse_set_expr_instance_index():
    g5 = corpus.by_name("g5")
    U = parse_set_expr(g5, "Z(v - {f[0], f[2]})")
    only = U.parts[0]
    assert len(only.excl) == 2


def test_parse_set_expr_name_clash():
    g = Graph(["v", "a"], [Edge("a", "v", "v", 1)])
    with pytest.raises(ExprError):
        parse_set_expr(g, "Z(a)")
    # dotted spellings stay unambiguous
    assert parse_set_expr(g, "Z(a.a)") is not None


def test_parse_progression_and_family():
    assert parse_progression("3+4Z") == Progression(3, 4)
    assert parse_progression("-1+6") == Progression(5, 6)
    with pytest.raises(ExprError):
        parse_progression("4Z")
    fam = parse_family("nk:3")
    assert isinstance(fam, NkFamily) and fam.k == 3
    with pytest.raises(ExprError):
        parse_family("free:1")
    with pytest.raises(ExprError):
        parse_family("widgets")


# ---------------------------------------------------------------------- oe

def test_oe_examples(capsys):
    for name in ("identity-g2", "swap-g2", "parallel-p2"):
        code, rep = run_json(capsys, "oe", name, "--depth", "3")
        assert code == 0, name
        assert rep["cocycle_roundtrip_agrees"] and rep["orbit_roundtrip_agrees"]


def test_oe_swap_pieces(capsys):
    _, rep = run_json(capsys, "oe", "swap-g2", "--depth", "3")
    assert [tuple(p) for p in rep["pieces"]] == [
        ("Z(a.a)", 1, 2), ("Z(a.b)", 1, 2), ("Z(b.a)", 1, 2), ("Z(b.b)", 1, 2)]


# --------------------------------------------------------------------- sgp

def test_sgp_affine_witness(capsys):
    code, rep = run_json(capsys, "sgp", "affine", "witness",
                         "--ideal", "0+2Z", "--exclude", "0+6Z")
    assert code == 0
    assert rep["a"] == 7 and rep["delta"] == 6 and rep["modulus"] == 84


def test_sgp_free_witness(capsys):
    code, rep = run_json(capsys, "sgp", "free:2", "witness",
                         "--ideal", "x", "--exclude", "xx")
    assert code == 0
    assert rep["pair"] == ["xyx", "xyy"]
    code, rep = run_json(capsys, "sgp", "free:2", "witness",
                         "--ideal", "x", "--exclude", "xx", "--exclude", "xy")
    assert code == 2 and rep["found"] is False


def test_sgp_corner_witness_fails(capsys):
    code = main(["sgp", "nk:1", "witness"])
    capsys.readouterr()
    assert code == 1


def test_sgp_reports(capsys):
    code, rep = run_json(capsys, "sgp", "affine", "independence")
    assert code == 0 and rep["independent"]
    code, rep = run_json(capsys, "sgp", "free:2", "kernel")
    assert code == 0 and rep["kernel_trivial"]
    code, rep = run_json(capsys, "sgp", "nk:2", "kernel")
    assert code == 0 and rep["kernel_is_whole_group"]
    code, rep = run_json(capsys, "sgp", "affine", "kernel")
    assert code == 0 and rep["infinite"] and not rep["kernel_trivial"]
    code, rep = run_json(capsys, "sgp", "affine", "minimality",
                         "--stages", "1,2,3,4,6,12")
    assert code == 0 and rep["meet_modulus"] == 12
    code, rep = run_json(capsys, "sgp", "free:2", "rcomplete")
    assert code == 0 and rep["partners"]["x1"] == "x4"


# ------------------------------------------------------------ usage and env

def test_usage_exits(capsys):
    assert main(["check", "l", "--graph", "nope"]) == 64
    capsys.readouterr()
    assert main(["witness", "g2", "plainly wrong"]) == 64
    capsys.readouterr()
    assert main(["sgp", "widgets", "kernel"]) == 64
    capsys.readouterr()
    assert main(["sgp", "affine", "minimality"]) == 64
    capsys.readouterr()


def test_bound_override(capsys, monkeypatch):
    _, before = run_json(capsys, "check", "action", "--graph", "g1")
    monkeypatch.setenv("GFORGE_BOUND_OVERRIDE", "1")
    _, after = run_json(capsys, "check", "action", "--graph", "g1")
    assert after["words"] < before["words"]
    monkeypatch.setenv("GFORGE_BOUND_OVERRIDE", "junk")
    assert main(["check", "action", "--graph", "g1"]) == 64
    capsys.readouterr()


def test_json_byte_determinism(capsys):
    one = run(capsys, "witness", "g2", "Z(v)", "--format", "json")
    two = run(capsys, "witness", "g2", "Z(v)", "--format", "json")
    assert one == two
    a = run(capsys, "sgp", "affine", "witness", "--ideal", "0+2Z",
            "--exclude", "0+6Z", "--format", "json")
    b = run(capsys, "sgp", "affine", "witness", "--ideal", "0+2Z",
            "--exclude", "0+6Z", "--format", "json")
    assert a == b
    assert "elapsed" not in a[1]


def test_text_format_shows_elapsed(capsys):
    code, out = run(capsys, "check", "l", "--graph", "g2")
    assert code == 0
    assert "elapsed:" in out
