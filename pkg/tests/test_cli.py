"""Fixture parsing, witness grammar round trips, report rendering, exit codes."""

import random
from pathlib import Path

import pytest

from kgraphlab.cli import main, run_fixture
from kgraphlab.errors import ConfigError, FixtureError
from kgraphlab.fixtures import build_graph, parse_fixture_text
from kgraphlab.reporting import (
    CheckResult,
    RunReport,
    WitnessSyntaxError,
    human_lines,
    machine_lines,
    normalize_witness,
    parse_witness,
    serialize_witness,
)
from kgraphlab.shapes import INF, ExtendedShape, Shape

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


# -- fixture parsing -----------------------------------------------------------------

def test_parse_full_fixture():
    fx = parse_fixture_text(
        "# a comment\n"
        "name  demo run\n"
        "graph loops counts=2,2 squares=flip\n"
        "suite validate\n"
        "suite fock relations=R1,R3 bound=2,2\n"
        "bound 1,1\n"
        "seed  7\n"
    )
    assert fx.name == "demo run"
    assert fx.graph_kind == "loops"
    assert fx.graph_options == {"counts": (2, 2), "squares": "flip"}
    assert [s.name for s in fx.suites] == ["validate", "fock"]
    assert fx.suites[1].options == {"relations": ("R1", "R3"), "bound": (2, 2)}
    assert fx.bound == (1, 1)
    assert fx.seed == 7


def test_unknown_directive_has_line_and_column():
    with pytest.raises(FixtureError) as ei:
        parse_fixture_text("graph grid size=1,1\n  wibble 3\n")
    assert ei.value.line == 2
    assert ei.value.column == 3
    assert "line 2" in str(ei.value) and "column 3" in str(ei.value)


def test_unknown_option_key_rejected_with_position():
    with pytest.raises(FixtureError) as ei:
        parse_fixture_text("graph grid sixe=1,1\n")
    assert ei.value.line == 1
    assert ei.value.column == 12
    assert "sixe" in str(ei.value)


def test_unknown_suite_key_rejected():
    with pytest.raises(FixtureError) as ei:
        parse_fixture_text("suite fock relations=R1 depth=3\n")
    assert ei.value.line == 1 and "depth" in str(ei.value)


def test_unknown_graph_kind_rejected():
    with pytest.raises(FixtureError) as ei:
        parse_fixture_text("graph torus size=1,1\n")
    assert "torus" in str(ei.value) and ei.value.column == 7


def test_unknown_suite_name_rejected():
    with pytest.raises(FixtureError) as ei:
        parse_fixture_text("suite focke\n")
    assert "focke" in str(ei.value)


def test_malformed_int_list_rejected():
    with pytest.raises(FixtureError) as ei:
        parse_fixture_text("bound 2,,2\n")
    assert ei.value.line == 1 and ei.value.column == 7
    with pytest.raises(FixtureError):
        parse_fixture_text("graph grid size=1,x\n")
    with pytest.raises(FixtureError):
        parse_fixture_text("seed 3.5\n")


def test_bare_token_where_option_expected():
    with pytest.raises(FixtureError) as ei:
        parse_fixture_text("graph grid 1,1\n")
    assert "key=value" in str(ei.value)


def test_duplicate_directives_rejected():
    with pytest.raises(FixtureError):
        parse_fixture_text("graph grid size=1,1\ngraph flip\n")
    with pytest.raises(FixtureError):
        parse_fixture_text("seed 1\nseed 2\n")
    with pytest.raises(FixtureError):
        parse_fixture_text("suite validate\nsuite validate\n")
    with pytest.raises(FixtureError):
        parse_fixture_text("suite fock bound=1,1 bound=2,2\n")


def test_comments_and_blanks_ignored():
    fx = parse_fixture_text("\n# only a comment\n\ngraph flip  # trailing\n")
    assert fx.graph_kind == "flip" and fx.suites == ()


def test_build_graph_kinds():
    assert build_graph(parse_fixture_text("graph grid size=1,1")).rank == 2
    loops = build_graph(parse_fixture_text("graph loops counts=2,1"))
    assert sorted(e.name for e in loops.edges) == ["a0", "a1", "b0"]
    free = build_graph(parse_fixture_text("graph free_abelian rank=3"))
    assert free.rank == 3 and len(free.edges) == 3
    flip = build_graph(parse_fixture_text("graph flip"))
    assert flip.rank == 2 and len(flip.edges) == 4
    assert build_graph(parse_fixture_text("suite validate")) is None


def test_build_graph_missing_required_key():
    with pytest.raises(FixtureError):
        build_graph(parse_fixture_text("graph grid"))
    with pytest.raises(FixtureError):
        build_graph(parse_fixture_text("graph free_abelian"))


# -- witness grammar -----------------------------------------------------------------

def test_witness_hand_cases():
    cases = [
        None, True, False, 0, -17, INF, "", "a b", 'say "hi"\n', ("x",),
        (), (1, (2, 3), ("nested", None)), (INF, 1, "inf"),
    ]
    for w in cases:
        assert parse_witness(serialize_witness(w)) == w


def test_witness_serialized_forms():
    assert serialize_witness(None) == "none"
    assert serialize_witness(INF) == "inf"
    assert serialize_witness((1, "a")) == '(1, "a")'
    assert serialize_witness('q"\\') == '"q\\"\\\\"'
    assert serialize_witness(()) == "()"


def _random_witness(rng, depth=0):
    kinds = ["int", "str", "bool", "none", "inf"]
    if depth < 3:
        kinds += ["tuple", "tuple"]
    k = rng.choice(kinds)
    if k == "int":
        return rng.randint(-999, 999)
    if k == "str":
        alphabet = ' abc"\\\n\t(),=inf'
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
    if k == "bool":
        return rng.random() < 0.5
    if k == "none":
        return None
    if k == "inf":
        return INF
    return tuple(_random_witness(rng, depth + 1) for _ in range(rng.randint(0, 4)))


def test_witness_round_trip_100_random():
    rng = random.Random(20260816)
    for _ in range(100):
        w = _random_witness(rng)
        assert parse_witness(serialize_witness(w)) == w


def test_witness_parse_rejects_garbage():
    for bad in ["bogus", "(1, 2", '"open', "1 2", "(1,, 2)", "", "--3", '"\\q"']:
        with pytest.raises(WitnessSyntaxError):
            parse_witness(bad)


def test_normalize_witness_folds_shapes_and_exceptions():
    assert normalize_witness(Shape(2, 3)) == (2, 3)
    assert normalize_witness(ExtendedShape((1, INF))) == (1, INF)
    assert normalize_witness([1, [2, 3]]) == (1, (2, 3))
    assert normalize_witness({"b": 2, "a": 1}) == (("a", 1), ("b", 2))
    assert normalize_witness(ValueError("boom")) == "ValueError: boom"


# -- rendering -----------------------------------------------------------------------

def _report():
    return RunReport("demo", 5, (
        CheckResult("one", True, None, "count=3", 0.25),
        CheckResult("two", False, (1, "x"), "", 0.5),
    ))


def test_human_lines_carry_timings_and_witnesses():
    lines = human_lines(_report())
    assert lines[0] == "fixture: demo"
    assert lines[1] == "seed: 5"
    assert "PASS  one  (0.250s)  count=3" in lines
    assert "FAIL  two  (0.500s)" in lines
    assert '      witness: (1, "x")' in lines
    assert lines[-1] == "result: 1/2 checks passed"


def test_machine_lines_have_no_timings():
    lines = machine_lines(_report())
    assert lines[0] == 'record=run fixture="demo" seed=5 checks=2'
    assert lines[1] == 'record=check name="one" status=pass witness=none info="count=3"'
    assert lines[2] == 'record=check name="two" status=fail witness=(1, "x") info=""'
    assert lines[3] == "record=summary ok=false"
    assert not any("0.2" in ln or "0.5" in ln for ln in lines)


def test_machine_witness_fields_reparse():
    report = _report()
    for row, line in zip(report.results, machine_lines(report)[1:]):
        witness_text = line.split(" witness=", 1)[1].rsplit(" info=", 1)[0]
        assert parse_witness(witness_text) == row.witness
        name_text = line.split(" name=", 1)[1].split(" status=", 1)[0]
        assert parse_witness(name_text) == row.name


# -- end-to-end runs -----------------------------------------------------------------

def test_grid_fixture_reports_nine_morphisms(capsys):
    assert main([str(FIXTURES / "grid11.kgf")]) == 0
    out = capsys.readouterr().out
    assert "PASS  validate.morphisms" in out and "count=9" in out
    assert "result: 12/12 checks passed" in out


def test_free_monoid_fixture_shows_both_defects(capsys):
    assert main([str(FIXTURES / "free_monoid.kgf")]) == 0
    out = capsys.readouterr().out
    assert 'witness: ((1, 0), (0, 1), "a")' in out
    assert "PASS  counterexample.composite-without-witness" in out
    assert "witness: ((2, -1), (6, 6))" in out


def test_fock_relations_flag_on_free_abelian(capsys):
    code = main([str(FIXTURES / "n2.kgf"),
                 "--suite", "fock", "--relations", "R1,R3,R4", "--bound", "3,3"])
    assert code == 0
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if ln.startswith(("PASS", "FAIL"))]
    assert [ln.split()[1] for ln in lines] == ["fock.R1", "fock.R3", "fock.R4"]
    assert all(ln.startswith("PASS") for ln in lines)


def test_flip_fixture_all_suites_pass(capsys):
    assert main([str(FIXTURES / "flip.kgf")]) == 0
    out = capsys.readouterr().out
    assert "result: 20/20 checks passed" in out
    assert "boundary.exit-infinite" in out and "points=4" in out


def test_machine_report_byte_identical(capsys):
    argv = [str(FIXTURES / "n2.kgf"), "--format", "machine"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert "elapsed" not in first and "(0." not in first


def test_both_format_emits_each_section(capsys):
    assert main([str(FIXTURES / "grid11.kgf"), "--format", "both"]) == 0
    out = capsys.readouterr().out
    assert "result: 12/12 checks passed" in out
    assert "record=summary ok=true" in out


def test_failing_check_exits_one(tmp_path, capsys):
    path = tmp_path / "one_letter.kgf"
    path.write_text("suite counterexample letters=a\n")
    assert main([str(path)]) == 1
    out = capsys.readouterr().out
    assert "FAIL  counterexample.composite-without-witness" in out
    assert "result: 1/2 checks passed" in out


def test_parse_error_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.kgf"
    path.write_text("graph grid size=1,1\nwibble\n")
    assert main([str(path)]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err and "wibble" in err


def test_missing_file_exits_two(tmp_path, capsys):
    assert main([str(tmp_path / "absent.kgf")]) == 2
    assert "cannot read fixture" in capsys.readouterr().err


def test_unknown_suite_flag_exits_two(capsys):
    assert main([str(FIXTURES / "n2.kgf"), "--suite", "nosuch"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_bad_bound_flag_exits_two(capsys):
    assert main([str(FIXTURES / "n2.kgf"), "--bound", "2,x"]) == 2
    assert "--bound" in capsys.readouterr().err


def test_bound_rank_mismatch_exits_two(capsys):
    assert main([str(FIXTURES / "n2.kgf"), "--bound", "1,1,1"]) == 2
    assert "coordinates" in capsys.readouterr().err


def test_suite_needs_graph_exits_two(tmp_path, capsys):
    path = tmp_path / "nograph.kgf"
    path.write_text("suite validate\n")
    assert main([str(path)]) == 2
    assert "needs a graph" in capsys.readouterr().err


def test_run_fixture_respects_selection_order():
    fx = parse_fixture_text(
        "graph free_abelian rank=2\nsuite validate\nsuite fock relations=R2\nbound 1,1\n")
    rep = run_fixture(fx, suite_names=["fock", "validate"])
    names = [r.name for r in rep.results]
    assert names[0] == "fock.R2" and names[-1] == "validate.morphisms"
    with pytest.raises(ConfigError):
        run_fixture(fx, suite_names=["fock", "nosuch"])


def test_run_fixture_without_suites_is_config_error():
    fx = parse_fixture_text("graph flip\n")
    with pytest.raises(ConfigError):
        run_fixture(fx)
