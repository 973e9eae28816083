import subprocess
import sys

import pytest

from ratindex.cli import main
from ratindex.graphs import nfa_to_text
from ratindex.measure import two_cycle_family

from conftest import ANBN_TEXT, EXAMPLE_PROGRAM

CHILD_GRAPH_TSV = "1\tchild\t2\n2\tchild\t3\n"


@pytest.fixture
def anbn_file(tmp_path):
    path = tmp_path / "anbn.cfg"
    path.write_text(ANBN_TEXT)
    return str(path)


@pytest.fixture
def twocycle_file(tmp_path):
    path = tmp_path / "twocycle_2_3.nfa"
    path.write_text(nfa_to_text(two_cycle_family(2, 3)))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cnf_roundtrip(capsys, anbn_file):
    code, out, _ = run_cli(capsys, "cnf", "--grammar", anbn_file)
    assert code == 0
    assert "->" in out
    assert out.splitlines()[0].startswith("S")


def test_member(capsys, anbn_file):
    code, out, _ = run_cli(capsys, "member", "--grammar", anbn_file, "--word", "aabb")
    assert (code, out.strip()) == (0, "true")
    code, out, _ = run_cli(capsys, "member", "--grammar", anbn_file, "--word", "aab")
    assert (code, out.strip()) == (0, "false")


def test_shortest_two_cycle(capsys, anbn_file, twocycle_file):
    code, out, _ = run_cli(
        capsys, "shortest", "--grammar", anbn_file, "--nfa", twocycle_file
    )
    assert code == 0
    assert out.splitlines()[0] == "12\taaaaaabbbbbb"


def test_shortest_witness_path(capsys, anbn_file, twocycle_file):
    code, out, _ = run_cli(
        capsys, "shortest", "--grammar", anbn_file, "--nfa", twocycle_file,
        "--witness",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "12\taaaaaabbbbbb"
    assert lines[1].startswith("path\tA0 A1 A0")
    assert lines[1].split("\t")[1].split() == [
        "A0", "A1", "A0", "A1", "A0", "A1", "A0",
        "B1", "B2", "B0", "B1", "B2", "B0",
    ]


def test_shortest_empty_intersection(capsys, anbn_file, tmp_path):
    graph = tmp_path / "g.tsv"
    graph.write_text("1\ta\t2\n")
    code, out, err = run_cli(
        capsys, "shortest", "--grammar", anbn_file, "--graph", str(graph)
    )
    assert code == 1
    assert "∅" in err


def test_intersect_listing(capsys, anbn_file, tmp_path):
    graph = tmp_path / "g.tsv"
    graph.write_text("1\ta\t2\n2\tb\t3\n")
    code, out, _ = run_cli(
        capsys, "intersect", "--grammar", anbn_file, "--graph", str(graph)
    )
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert ["S", "1", "3", "2"] in rows


def test_reach(capsys, tmp_path):
    grammar = tmp_path / "desc.cfg"
    grammar.write_text("Desc -> Child | Child Desc\nChild -> child\n")
    graph = tmp_path / "family.tsv"
    graph.write_text(CHILD_GRAPH_TSV)
    code, out, _ = run_cli(
        capsys, "reach", "--grammar", str(grammar), "--graph", str(graph)
    )
    assert code == 0
    assert out.splitlines() == ["1\t2", "1\t3", "2\t3"]
    code, out, _ = run_cli(
        capsys,
        "reach",
        "--grammar",
        str(grammar),
        "--graph",
        str(graph),
        "--source",
        "1",
    )
    assert out.splitlines() == ["1\t2", "1\t3"]


def test_tree_metrics(capsys, anbn_file):
    code, out, _ = run_cli(
        capsys, "tree-metrics", "--grammar", anbn_file, "--word", "aabb"
    )
    assert code == 0
    # osc value cross-checked against the brute-force oracle below
    assert out.strip() == "dim=1 osc=2"


def test_tree_metrics_values_match_oracles(anbn_cnf):
    from ratindex.grammar import cyk_parse
    from ratindex.trees import dimension
    from ratindex.wellnested import alpha_of_tree, oscillation_bruteforce

    tree = cyk_parse(anbn_cnf, "aabb")
    word = alpha_of_tree(tree)
    assert dimension(tree) == 1
    assert oscillation_bruteforce(word, cap=len(word)) == 2


def test_tree_metrics_rejects_foreign_word(capsys, anbn_file):
    code, _, err = run_cli(
        capsys, "tree-metrics", "--grammar", anbn_file, "--word", "aab"
    )
    assert code == 1
    assert "not in the language" in err


def test_classify_output(capsys, tmp_path):
    grammar = tmp_path / "red.cfg"
    grammar.write_text("S -> A B\nA -> a | a A\nB -> b\n")
    code, out, _ = run_cli(
        capsys,
        "classify",
        "--grammar",
        str(grammar),
        "--partition",
        "A,B/S",
    )
    assert code == 0
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    assert lines["ultralinear"] == "true"
    assert lines["reduced_form"] == "true"
    assert lines["k"] == "1"
    assert lines["expansive"] == "-"


def test_measure_rho_two_cycle_csv(capsys, anbn_file):
    code, out, _ = run_cli(
        capsys,
        "measure-rho",
        "--grammar",
        anbn_file,
        "--strategy",
        "two-cycle",
        "--pairs",
        "2:3,3:4",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,value,exhaustive,witness_word,automaton_id"
    assert lines[1] == "5,12,false,aaaaaabbbbbb,two_cycle_2_3"
    assert lines[2] == "7,24,false,aaaaaaaaaaaabbbbbbbbbbbb,two_cycle_3_4"


def test_measure_rho_deterministic_across_workers(capsys, anbn_file):
    argv = [
        "measure-rho",
        "--grammar",
        anbn_file,
        "--strategy",
        "random",
        "--n-min",
        "2",
        "--n-max",
        "3",
        "--count",
        "12",
        "--seed",
        "7",
    ]
    _, serial, _ = run_cli(capsys, *argv)
    _, serial_again, _ = run_cli(capsys, *argv)
    _, parallel, _ = run_cli(capsys, *argv, "--workers", "2")
    assert serial == serial_again == parallel


def test_bounds_csv(capsys):
    code, out, _ = run_cli(
        capsys,
        "bounds",
        "--family",
        "dimension",
        "--nonterminals",
        "3",
        "--degree",
        "2",
        "--n-min",
        "1",
        "--n-max",
        "2",
    )
    assert code == 0
    assert out.splitlines() == ["n,bound", "1,9", "2,144"]


def test_datalog_eval(capsys, tmp_path):
    program = tmp_path / "desc.dl"
    program.write_text(EXAMPLE_PROGRAM)
    graph = tmp_path / "family.tsv"
    graph.write_text(CHILD_GRAPH_TSV)
    code, out, _ = run_cli(
        capsys, "datalog-eval", "--program", str(program), "--graph", str(graph)
    )
    assert code == 0
    assert out.splitlines() == ["1\t2", "1\t3", "2\t3"]


def test_input_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("S -> $\n")
    code, _, err = run_cli(capsys, "cnf", "--grammar", str(bad))
    assert code == 1
    assert "error:" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["member", "--grammar"])
    assert exc.value.code == 2


def test_module_entry_point(anbn_file):
    proc = subprocess.run(
        [sys.executable, "-m", "ratindex", "member", "--grammar", anbn_file,
         "--word", "ab"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "true"


def test_selftest_runs_clean():
    proc = subprocess.run(
        [sys.executable, "-m", "ratindex", "selftest", "--osc-cap", "10"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "FAIL" not in proc.stdout
