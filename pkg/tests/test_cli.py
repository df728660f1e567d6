import json
import re

import pytest
from hypothesis import given

from bicyc.cli import main
from bicyc.core import BicirculantError, U, V, gp, make_params, render_params, verify_certificate
from bicyc.export import CycleParamMismatch, export_dot, export_edgelist
from bicyc.grammar import ParamSyntaxError, parse_params
from bicyc.oracle import find_cycle_exact
from test_core import params

PRISM = make_params(4, {1, 3}, {0}, {1, 3})


@pytest.mark.parametrize("text,expected", [
    ("B(12; 1,11; 0,4,8; 2,10)", make_params(12, {1, 11}, {0, 4, 8}, {2, 10})),
    ("GP(5,2)", gp(5, 2)),
    ("I(8,1,3)", make_params(8, {1, 7}, {0}, {3, 5})),
    ("H(7;0,2,3)", make_params(7, (), {0, 2, 3}, ())),
    ("B(6; _; 0,2; _)", make_params(6, (), {0, 2}, ())),
])
def test_parse_examples(text, expected):
    assert parse_params(text) == expected


@pytest.mark.parametrize("text,err,pos", [
    ("B(6;1,5;0,1;1 5", ParamSyntaxError, 14),
    ("B(6;1;0;1,5)", BicirculantError, 4),
    ("Q(6)", ParamSyntaxError, 0),
])
def test_parse_errors_report_position(text, err, pos):
    with pytest.raises(err) as info:
        parse_params(text)
    assert info.value.position == pos


@given(params(m_max=14, s_max=4))
def test_render_parse_round_trip(p):
    assert parse_params(render_params(p)) == p


def test_prism_dot():
    dot = export_dot(PRISM)
    assert len(re.findall(r"^\s+[uv]\d+;$", dot, re.M)) == 8
    assert dot.count(" -- ") == 12


def test_petersen_edgelist():
    assert len(export_edgelist(gp(5, 2)).splitlines()) == 15


def test_dot_marks_cycle_edges():
    c = find_cycle_exact(PRISM)
    dot = export_dot(PRISM, c)
    bold = [line for line in dot.splitlines() if "style=bold" in line]
    assert len(bold) == 8
    pairs = {tuple(re.match(r"\s+(\w+) -- (\w+)", line).groups()) for line in bold}
    on = {tuple(sorted((str(x), str(y)))) for x, y in zip(c, c[1:] + c[:1])}
    assert {tuple(sorted(q)) for q in pairs} == on
    with pytest.raises(CycleParamMismatch):
        export_edgelist(PRISM, [U(0), V(0)])


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_find_then_verify(tmp_path, capsys):
    code, out, _ = run(capsys, "find", "GP(7,2)")
    assert code == 0
    doc = json.loads(out)
    verify_certificate(gp(7, 2), [U(i) if s == "u" else V(i) for s, i in doc["cycle"]])
    cert = tmp_path / "c.json"
    cert.write_text(out)
    assert run(capsys, "verify", "GP(7,2)", str(cert))[0] == 0
    assert run(capsys, "verify", "GP(9,2)", str(cert))[0] == 2
    bad = dict(doc, cycle=doc["cycle"][::2])
    del bad["params"]
    cert.write_text(json.dumps(bad))
    assert run(capsys, "verify", "GP(7,2)", str(cert))[0] == 3
    cert.write_text("{not json")
    assert run(capsys, "verify", "GP(7,2)", str(cert))[0] == 2
    assert run(capsys, "verify", "GP(7,2)", str(tmp_path / "missing.json"))[0] == 1


def test_find_reports_no_cycle(capsys):
    assert run(capsys, "find", "GP(5,2)", "--strategy", "exact")[0] == 3


def test_find_budget_exhaustion(capsys):
    assert run(capsys, "find", "GP(29,2)", "--strategy", "exact", "--budget-nodes", "20")[0] == 4


def test_classify_and_info(capsys):
    code, out, _ = run(capsys, "classify", "B(12; 3,9; 0,4,8; 2,10)")
    assert code == 0 and json.loads(out)["strategy"] == "pipeline"
    code, out, _ = run(capsys, "info", "B(6; 2,4; 0,2; 2,4)")
    assert code == 0 and json.loads(out)["delta"] == 2


def test_bad_input_exit_codes(capsys):
    assert run(capsys, "classify", "B(6;1;0;1,5)")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 1


def test_sweep_command(tmp_path, capsys):
    target = tmp_path / "s.json"
    assert run(capsys, "sweep", "--m-max", "6", "--d-max", "3", "--out", str(target))[0] == 0
    doc = json.loads(target.read_text())
    assert doc["unknown"] == [] and doc["universe_size"] > 0


def test_export_command(tmp_path, capsys):
    code, out, _ = run(capsys, "export", "GP(5,2)", "--format", "edgelist")
    assert code == 0 and len(out.splitlines()) == 15
