import json

import pytest

from reggraph.cli import main
from reggraph.textio import load_graph, parse_graph_text

from conftest import FIXTURES

CHAIN = str(FIXTURES / "chain5.txt")
STUDY = str(FIXTURES / "child_study.txt")
COGNITIVE = str(FIXTURES / "child_study_cognitive_only.txt")


def test_implies_true_exit_zero(capsys):
    assert main(["implies", CHAIN, "1 _||_ 4 | 3"]) == 0
    assert capsys.readouterr().out.strip() == "true"


def test_implies_false_exit_one(capsys):
    assert main(["implies", CHAIN, "1 _||_ 2"]) == 1
    assert capsys.readouterr().out.strip() == "false"


def test_implies_json(capsys):
    assert main(["--json", "implies", CHAIN, "1 _||_ 4 | 3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["implied"] is True


def test_validate(capsys):
    assert main(["validate", STUDY]) == 0
    out = capsys.readouterr().out
    assert "valid regression graph" in out


def test_validate_bad_file_exit_three(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("blocks: a | b\na ~~ b\n")  # dashed across blocks
    assert main(["validate", str(bad)]) == 3
    assert "error:" in capsys.readouterr().err


def test_structure_lists_statements(capsys):
    assert main(["structure", CHAIN]) == 0
    out = capsys.readouterr().out
    assert "1 _||_ 4 | 3" in out.splitlines()


def test_equiv_reflexive(capsys):
    assert main(["equiv", STUDY, STUDY]) == 0


def test_equiv_different(tmp_path, capsys):
    chain = tmp_path / "chain.txt"
    chain.write_text("blocks: i | o | k\no -> i\nk -> o\n")
    coll = tmp_path / "coll.txt"
    coll.write_text("blocks: o | i | k\ni -> o\nk -> o\n")
    assert main(["equiv", str(chain), str(coll)]) == 1


def test_marginalize_matches_fixture(tmp_path, capsys):
    out = tmp_path / "out.txt"
    assert main(["marginalize", STUDY, "--over", "X8,X4", "-o", str(out)]) == 0
    assert load_graph(str(out)) == load_graph(COGNITIVE)


def test_marginalize_json(capsys):
    assert main(["--json", "marginalize", STUDY, "--over", "Y8,Y4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["is_regression_graph"] is True
    assert "Y8" not in payload["nodes"]


def test_expand_roundtrip(tmp_path, capsys):
    out = tmp_path / "expanded.txt"
    assert main(["expand", STUDY, "--edges", "Y8~X8", "-o", str(out)]) == 0
    g = load_graph(str(out))
    assert "L1" in g.nodes
    back = tmp_path / "back.txt"
    assert main(["marginalize", str(out), "--over", "L1", "-o", str(back)]) == 0
    assert load_graph(str(back)) == load_graph(STUDY)


def test_oracle_verb_passes(tmp_path, capsys):
    assert main(["oracle", CHAIN, "--seeds", "3"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_simulate_fit_report(tmp_path, capsys):
    csv = tmp_path / "data.csv"
    assert main(["simulate", "--seed", "2", "--n", "347", "-o", str(csv)]) == 0
    outdir = tmp_path / "report"
    assert main(["fit", str(csv), "-o", str(outdir)]) == 0
    assert (outdir / "summary.md").exists()
    assert (outdir / "graph.txt").exists()
    assert (outdir / "graph.dot").exists()
    fitted = load_graph(str(outdir / "graph.txt"))
    assert fitted == load_graph(STUDY)  # seed 2 recovers the study graph exactly

    assert main(["report", str(csv)]) == 0
    out = capsys.readouterr().out
    assert "Fitted equations" in out
    assert "Response: Y8" in out


def test_fit_with_config(tmp_path, capsys):
    csv = tmp_path / "data.csv"
    main(["simulate", "--seed", "2", "--n", "347", "-o", str(csv)])
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(
        'blocks = [["Y8","X8"],["Y4","X4"]]\n'
        'context = ["Yr","Xr","E","H"]\n'
        "threshold = 2.58\n"
        "[candidate_terms]\n"
        'Y8 = ["X4^2"]\nX8 = ["X4^2"]\nY4 = ["Xr^2"]\nX4 = ["Xr^2"]\nYr = ["E^2"]\nXr = ["E^2"]\n'
    )
    assert main(["--json", "fit", str(csv), "--config", str(cfg)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["tables"]["Y8"]["r2_sel"] > 0.5


def test_usage_error_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-verb"])
    assert exc.value.code == 2


def test_computation_error_exit_three(tmp_path, capsys):
    assert main(["implies", str(tmp_path / "missing.txt"), "1 _||_ 2"]) == 3


def test_emitted_graph_parses(capsys):
    assert main(["marginalize", STUDY, "--over", "Y8"]) == 0
    text = capsys.readouterr().out
    parse_graph_text(text)
