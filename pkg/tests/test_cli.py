import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from tockpri.cli import main, parse_order
from tockpri.core import TOCK, fl_from_json, tt_from_json
from tockpri.galois import fl2tt
from tockpri.laws import PRI_R_TRACES, R_TRACES

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(*args, env=None):
    return CliRunner().invoke(main, [str(a) for a in args], env=env)


def traces_of(result):
    data = json.loads(result.output)
    load = fl_from_json if data["model"] == "fl" else tt_from_json
    return frozenset(load(x) for x in data["traces"])


def test_denote_r_listing():
    res = run("denote", "--model", "fl", "--depth", 2, SPECS / "R.tockcsp", "--format", "json")
    assert res.exit_code == 0
    assert traces_of(res) == R_TRACES


def test_denote_t_tt_contains_listed():
    res = run("denote", "--model", "tt", "--depth", 3, SPECS / "T.tockcsp")
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert "⟨ref{tick}⟩" in lines
    assert "⟨ref{a,b,tick}, tock⟩" in lines


def test_denote_div_table():
    res = run("denote", "--model", "fl", "--depth", 0, "DIV")
    assert res.exit_code == 0
    assert res.output.splitlines()[1:] == ["⟨•⟩"]


def test_prioritise_examples(den, ab):
    res = run("prioritise", "--model", "fl", "-k", 2, SPECS / "R.tockcsp", "--format", "json")
    assert traces_of(res) == PRI_R_TRACES
    res = run("prioritise", "--model", "fl", "-k", 3, SPECS / "S.tockcsp", "--format", "json")
    assert traces_of(res) == den("S", 3).traces
    res = run("prioritise", "--model", "tt", "-k", 2, SPECS / "T.tockcsp", "--format", "json")
    assert res.exit_code == 0
    assert traces_of(res) == fl2tt(den("T", 2)).traces


def test_prioritise_order_file():
    res = run("prioritise", "-k", 1, "R", "--order-file", SPECS / "a_lowest.order", "--format", "json")
    assert res.exit_code == 0
    assert all(c.evt != "a" for r in traces_of(res) for c in r.cells)


def test_refine_verdicts():
    res = run("refine", "--spec", "Tu", "--impl", "R", "--model", "tt", "-k", 2)
    assert res.exit_code == 0 and res.output.startswith("PASS")
    res = run("refine", "--spec", "DIV", "--impl", "CHAOS", "-k", 1)
    assert res.exit_code == 1
    assert "counterexample" in res.output
    res = run("refine", "--spec", "T", "--impl", "T", "--model", "ttm")
    assert res.exit_code == 0


def test_refine_timed_t_is_not_refined_by_r():
    res = run("refine", "--spec", "T", "--impl", "R", "--model", "tt", "-k", 2)
    assert res.exit_code == 1


def test_usage_errors():
    res = run("denote", "a -> ")
    assert res.exit_code == 2
    assert "column" in res.output
    res = run("denote", "-k", 3, "R", env={"TOCKPRI_DEPTH_MAX": "2"})
    assert res.exit_code == 2
    res = run("denote", "--model", "xx", "R")
    assert res.exit_code == 2
    res = run("denote", "R", "--name", "Nope")
    assert res.exit_code == 2


def test_bad_order_file(tmp_path):
    f = tmp_path / "cyc.order"
    f.write_text("order a < b, b < a\n")
    res = run("prioritise", "R", "--order-file", f)
    assert res.exit_code == 2
    with pytest.raises(Exception):
        parse_order("a")


def test_json_is_deterministic():
    a = run("denote", "--model", "tt", "-k", 2, "T", "--format", "json").output
    b = run("denote", "--model", "tt", "-k", 2, "T", "--format", "json").output
    assert a == b
    assert json.loads(a)["depth"] == 2


def test_health():
    res = run("health", "T", "--model", "tt", "-k", 2)
    assert res.exit_code == 0
    assert "best-effort" in res.output
    res = run("health", "R", "--model", "fl", "-k", 2)
    assert res.exit_code == 0 and "FL3" in res.output


def test_map_roundtrip_through_file(tmp_path, den):
    out = tmp_path / "t.json"
    out.write_text(run("denote", "--model", "tt", "-k", 3, "T", "--format", "json").output)
    res = run("map", out, "--from", "tt", "--to", "fl", "--format", "json")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["model"] == "fl" and data["depth"] == 2
    back = fl2tt(den("T", 2))
    # the recovered FL set maps back onto the settled tick-tock traces
    from tockpri.fl import FlDenotation

    fl = FlDenotation(traces_of(res), 2, back.universe, False)
    assert fl2tt(fl, check=False).settled().traces == back.settled().traces


def test_map_wrong_model_file(tmp_path):
    out = tmp_path / "t.json"
    out.write_text(run("denote", "--model", "fl", "-k", 1, "T", "--format", "json").output)
    assert run("map", out, "--from", "tt", "--to", "fl").exit_code == 2


def test_map_from_process():
    res = run("map", "R", "--from", "fl", "--to", "ttm", "-k", 1, "--format", "json")
    assert res.exit_code == 0
    assert all(o.__class__.__name__ in ("Evt", "Ref") for t in traces_of(res) for o in t)


def test_laws_command():
    res = run("laws", "--suite", "examples")
    assert res.exit_code == 0
    assert "FAIL" not in res.output
    res = run("laws", "--suite", "lemma1", "--seed", 7, "-k", 1)
    assert res.exit_code == 0
    assert "100 instances" in res.output or "instances" in res.output
