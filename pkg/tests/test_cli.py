import json

import pytest

from skewmaps.cli import main, parse_int_list


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_int_lists():
    assert parse_int_list("6..9") == [6, 7, 8, 9]
    assert parse_int_list("5,7, 11") == [5, 7, 11]


def test_census_a5_flags_table_mismatch_only_when_strict(capsys, tmp_path):
    tsv = tmp_path / "a5.tsv"
    code, report = run(capsys, "census", "a5", "--tsv", str(tsv))
    assert code == 0 and report["results"]["census"]["class_count"] == 5
    assert report["results"]["face_valency_comparison"]["mismatches"] == {"6": [0, 1], "16": [1, 0]}
    assert tsv.read_text().splitlines()[1].startswith("A5\t5\t")
    code, report = run(capsys, "census", "a5", "--strict")
    assert code == 1


def test_census_am(capsys):
    code, report = run(capsys, "census", "am", "--m", "6")
    assert code == 0 and report["results"]["census"]["class_count"] == 9


def test_output_is_deterministic(capsys):
    _, first = run(capsys, "census", "am", "--m", "6", "--seed", "3")
    _, second = run(capsys, "census", "am", "--m", "6", "--seed", "3")
    assert first == second and first["seed"] == 3 and "timings" not in first


@pytest.mark.parametrize("argv", [
    ["verify", "am1", "--m", "6..12"],
    ["verify", "example48", "--n", "3", "--p", "5"],
    ["verify", "lemma44", "--p", "5", "--valency", "3"],
    ["verify", "q-family", "--p", "5,7"],
    ["verify", "p-family", "--p", "7"],
    ["verify", "balanced", "--t", "A(5)", "--ell", "1,4"],
])
def test_verify_commands_pass(capsys, argv):
    code, report = run(capsys, *argv)
    assert code == 0 and report["passed"] and report["verdicts"]


def test_skew_commands(capsys):
    code, report = run(capsys, "skew", "classify", "--x", "PSL(2,11)", "--g", "A(5)")
    assert report["results"]["kind"] == "SimpleKind"
    code, report = run(capsys, "skew", "classify", "--x", "S(3)", "--g", "A(3)")
    assert report["results"]["kind"] == "Balanced"
    code, report = run(capsys, "skew", "enumerate-tiny", "--g", "S(3)")
    assert code == 0 and report["results"]["count"] == 12
    code, report = run(capsys, "skew", "from-factorization", "--x", "S(3)", "--g", "C(3)", "--y", "(1,2)")
    assert report["results"]["skew_morphism"]["images"] == [0, 2, 1]


def test_map_and_product(capsys, tmp_path):
    paths = []
    for argv in (["map", "am", "--m", "6"], ["map", "q", "--p", "5", "--c", "1"]):
        code, report = run(capsys, *argv)
        assert code == 0
        path = tmp_path / f"{len(paths)}.json"
        path.write_text(json.dumps(report["results"]["map"]))
        paths.append(str(path))
    code, report = run(capsys, "product", *paths)
    assert code == 0 and report["results"]["kind"] == "Mixed"
    code, report = run(capsys, "product", paths[0], paths[0])
    assert code == 1


def test_product_reads_map_reports(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "map", "q", "--p", "5", "--c", "1", "--out", str(a))[0] == 0
    assert run(capsys, "map", "am", "--m", "6", "--out", str(b))[0] == 0
    code, report = run(capsys, "product", str(a), str(b))
    assert code == 0 and report["results"]["kind"] == "Mixed"
    (tmp_path / "bad.json").write_text("{}")
    assert run(capsys, "product", str(a), str(tmp_path / "bad.json"))[0] == 2


@pytest.mark.parametrize("argv", [
    ["census", "zz"], ["census", "am"], ["verify", "lemma47", "--m", "7"],
    ["skew", "classify", "--x", "A(5"], ["census", "am", "--m", "14"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2
