import json

import pytest

from cardmso import corpus
from cardmso.cli import run

C4 = "p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n"
P3 = "p 3 2\ne 1 2\ne 2 3\n"
P4 = "p 4 3\ne 1 2\ne 2 3\ne 3 4\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [("c4.g", C4), ("p3.g", P3), ("p4.g", P4)]:
        (tmp_path / name).write_text(text)
        paths[name] = str(tmp_path / name)
    for name, builder in corpus.CORPUS_FILES.items():
        (tmp_path / name).write_text(builder())
        paths[name] = str(tmp_path / name)
    return paths


def test_check_holds_exit_zero(files, capsys):
    code = run(["check", "--graph", files["c4.g"], "--formula", files["bipartite_equal.cms"]])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("holds")
    assert "X1" in out and "X2" in out


def test_check_fails_exit_one(files):
    assert run(["check", "--graph", files["p3.g"], "--formula", files["bipartite_equal.cms"]]) == 1


def test_check_with_parameter(files, capsys):
    code = run([
        "check", "--graph", files["p3.g"], "--formula", files["ids_k.cms"],
        "--param", "k=1",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "2" in out  # the path centre by name


def test_missing_parameter_is_usage_error(files):
    assert run(["check", "--graph", files["p3.g"], "--formula", files["ids_k.cms"]]) == 2


def test_cbalance(files, capsys):
    code = run(["cbalance", "--graph", files["p4.g"], "-c", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "cut 1"
    assert len(out.splitlines()) == 3


def test_cbalance_nd_rejected(files, capsys):
    assert run(["cbalance", "--graph", files["p4.g"], "-c", "2", "--mode", "nd"]) == 2


def test_partition(files):
    assert run(["partition", "--graph", files["c4.g"], "--formula", files["independence.cms"], "-r", "2"]) == 0
    assert run(["partition", "--graph", files["c4.g"], "--formula", files["clique.cms"], "-r", "1"]) == 1


def test_oracle_subcommands_mirror(files):
    assert run(["oracle-check", "--graph", files["c4.g"], "--formula", files["bipartite_equal.cms"]]) == 0
    assert run(["oracle-check", "--graph", files["p3.g"], "--formula", files["bipartite_equal.cms"]]) == 1
    assert run(["oracle-partition", "--graph", files["c4.g"], "--formula", files["independence.cms"], "-r", "2"]) == 0
    assert run(["oracle-cbalance", "--graph", files["p4.g"], "-c", "2"]) == 0


def test_json_field_order_is_stable(files, capsys):
    code = run([
        "check", "--graph", files["c4.g"], "--formula", files["bipartite_equal.cms"], "--json",
    ])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert list(doc.keys()) == ["status", "witness", "alpha", "stats", "cut_value", "parts"]
    assert doc["status"] == "holds"
    assert doc["alpha"] == [True, True]
    keys = list(doc["stats"].keys())
    assert keys == [
        "pre_evaluations", "prefix_assignments", "ilp_solves",
        "elapsed_seconds", "cover_size", "type_count", "reduced_vertices",
    ]


def test_json_witness_reverifies_with_oracle(files, capsys):
    run([
        "check", "--graph", files["c4.g"], "--formula", files["bipartite_equal.cms"], "--json",
    ])
    doc = json.loads(capsys.readouterr().out)
    from cardmso.formula import parse_formula, pre_evaluate
    from cardmso.graph import parse_graph
    from cardmso.mso_eval import mso_check

    g = parse_graph(C4)
    f = parse_formula(corpus.bipartite_equal())
    name_to_index = {name: i for i, name in enumerate(g.names)}
    fixed = {
        item["variable"]: frozenset(name_to_index[v] for v in item["vertices"])
        for item in doc["witness"]
    }
    body = pre_evaluate(f, tuple(doc["alpha"]))
    assert mso_check(g, body.body, fixed_sets=fixed)


def test_dump_ilp(files, tmp_path, capsys):
    dump = tmp_path / "dump.txt"
    run([
        "check", "--graph", files["c4.g"], "--formula", files["bipartite_equal.cms"],
        "--dump-ilp", str(dump),
    ])
    text = dump.read_text()
    assert "# instance 1" in text
    assert "<=" in text or ">=" in text or "=" in text


def test_bad_graph_file_exit_two(tmp_path):
    bad = tmp_path / "bad.g"
    bad.write_text("p 2 1\ne 1 7\n")
    form = tmp_path / "f.cms"
    form.write_text(corpus.bipartite_equal())
    assert run(["check", "--graph", str(bad), "--formula", str(form)]) == 2


def test_missing_file_exit_two(tmp_path):
    form = tmp_path / "f.cms"
    form.write_text(corpus.bipartite_equal())
    assert run(["check", "--graph", str(tmp_path / "nope.g"), "--formula", str(form)]) == 2


def test_budget_exit_three(files):
    code = run([
        "check", "--graph", files["c4.g"], "--formula", files["bipartite_equal.cms"],
        "--k-max", "0",
    ])
    assert code == 3


def test_threads_flag_accepted(files):
    assert run([
        "check", "--graph", files["c4.g"], "--formula", files["bipartite_equal.cms"],
        "--threads", "4",
    ]) == 0
    assert run([
        "check", "--graph", files["c4.g"], "--formula", files["bipartite_equal.cms"],
        "--threads", "0",
    ]) == 2


def test_no_empty_parts_flag(files):
    assert run([
        "partition", "--graph", files["c4.g"], "--formula", files["independence.cms"],
        "-r", "5", "--no-empty-parts",
    ]) == 1
    assert run([
        "partition", "--graph", files["c4.g"], "--formula", files["independence.cms"],
        "-r", "5",
    ]) == 0
