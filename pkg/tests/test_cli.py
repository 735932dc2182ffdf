import json

import pytest

from pathhom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_square_hole(capsys, fixtures_dir):
    code, out, _ = run(capsys, "compute", str(fixtures_dir / "square_hole.edges"))
    payload = json.loads(out)
    assert code == 0
    assert payload["reduced_betti"] == [0, 1, 0]
    assert payload["vertices"] == 4
    assert payload["torsion"] == {}


def test_compute_square_trivial(capsys, fixtures_dir):
    _, out, _ = run(capsys, "compute", str(fixtures_dir / "square_trivial.edges"), "--max-dim", "3")
    assert json.loads(out)["reduced_betti"] == [0, 0, 0, 0]


def test_compute_representatives_use_file_labels(capsys, fixtures_dir):
    _, out, _ = run(capsys, "compute", str(fixtures_dir / "square_hole.edges"), "--ring", "z", "--reps")
    payload = json.loads(out)
    (chain,) = payload["representatives"]["1"]
    assert set(chain) == {"dim", "terms"}
    assert all(set(term) == {"path", "coef"} for term in chain["terms"])
    assert [term["path"] for term in chain["terms"]] == [[1, 2], [1, 3], [4, 2], [4, 3]]
    assert payload["ring"] == "integer"


def test_compute_dump_paths(capsys, fixtures_dir):
    _, out, _ = run(capsys, "compute", str(fixtures_dir / "square_trivial.edges"), "--dump-paths")
    (component,) = json.loads(out)["components"]
    dims = component["dimensions"]
    assert dims[0]["paths"] == [[1], [2], [3], [4]]
    assert dims[2]["paths"] == [[1, 2, 4], [1, 3, 4]]
    assert dims[2]["invariant"] == 1


def test_compute_csv_and_text(capsys, fixtures_dir):
    path = str(fixtures_dir / "square_hole.edges")
    _, out, _ = run(capsys, "compute", path, "--csv")
    lines = out.strip().splitlines()
    assert lines[0] == "dimension,betti,reduced_betti,torsion"
    assert lines[2].startswith("1,1,1")

    _, out, _ = run(capsys, "compute", path, "--format", "text")
    assert "reduced betti: [0, 1, 0]" in out


def test_output_is_deterministic(capsys, fixtures_dir):
    path = str(fixtures_dir / "square_hole.edges")
    _, first, _ = run(capsys, "compute", path, "--reps")
    _, second, _ = run(capsys, "compute", path, "--reps")
    assert first == second


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out" / "w5.json"
    code, out, _ = run(capsys, "motif", "dyad_up", "5", "-o", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["reduced_betti"] == [0, 0, 4]


@pytest.mark.parametrize("extra", [
    ["-o", "{blocked}/out.json"],
    ["--csv", "--reps", "--reps-out", "{blocked}/reps.json"],
])
def test_unwritable_output(capsys, fixtures_dir, tmp_path, extra):
    blocked = tmp_path / "blocked"
    blocked.write_text("a file, not a directory\n")
    argv = [arg.format(blocked=blocked) for arg in extra]
    code, _, err = run(capsys, "temporal", str(fixtures_dir / "contacts_small.txt"), "--window", "time:20:10", *argv)
    error = json.loads(err.strip().splitlines()[-1])
    assert code == 2
    assert error["error_code"] == "OUTPUT_UNWRITABLE"
    assert error["path"].startswith(str(blocked))


def test_census_histogram_into_a_file_path(capsys, tmp_path):
    blocked = tmp_path / "blocked"
    blocked.write_text("")
    code, _, err = run(capsys, "census", "--family", "dag", "--vertices", "3", "--csv",
                       "--histogram", str(blocked / "hist.json"))
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error_code"] == "OUTPUT_UNWRITABLE"


def test_motif_dyad(capsys):
    _, out, _ = run(capsys, "motif", "dyad_up", "5")
    payload = json.loads(out)
    assert payload["reduced_betti"] == [0, 0, 4]
    assert payload["vertices"] == 7


def test_motif_torsion(capsys):
    _, out, _ = run(capsys, "motif", "torsion_cycle", "3", "--ring", "z")
    assert json.loads(out)["torsion"] == {"1": [3]}


def test_census_csv_with_histogram(capsys, tmp_path):
    histogram = tmp_path / "hist.json"
    code, out, _ = run(capsys, "census", "--family", "digraph", "--vertices", "3", "--csv",
                       "--histogram", str(histogram))
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "arcs,b0,b1,b2"
    assert len(lines) == 17
    assert json.loads(histogram.read_text())["total_classes"] == 16


def test_census_filter_json(capsys):
    _, out, _ = run(capsys, "census", "--family", "dag", "--vertices", "4", "--filter", "b1>0")
    payload = json.loads(out)
    assert payload["total_classes"] == 31
    assert all(m["reduced_betti"][1] > 0 for m in payload["matches"])


def test_census_over_limit(capsys):
    code, out, err = run(capsys, "census", "--family", "digraph", "--vertices", "6")
    assert code == 1
    assert out == ""
    assert json.loads(err.strip().splitlines()[-1])["error_code"] == "CENSUS_SIZE_OVER_LIMIT"


def test_sample(capsys):
    _, out, _ = run(capsys, "sample", "--n", "3", "--q", "0", "--trials", "5")
    rows = json.loads(out)["distribution"]
    assert {"dimension": 0, "betti_value": 2, "count": 5, "frequency": "1"} in rows


def test_temporal_csv(capsys, fixtures_dir):
    _, out, _ = run(capsys, "temporal", str(fixtures_dir / "contacts_small.txt"), "--window", "time:20:10", "--csv")
    lines = out.strip().splitlines()
    assert lines[0] == "index,start,end,contacts,vertices,arcs,b0,b1,b2"
    assert len(lines) == 5
    assert lines[1].endswith(",0,1,0")


def test_temporal_json(capsys, fixtures_dir):
    _, out, _ = run(capsys, "temporal", str(fixtures_dir / "contacts_small.txt"), "--window", "count:2:1")
    payload = json.loads(out)
    assert payload["contacts"] == 5
    assert len(payload["windows"]) == 4


def test_missing_input_file(capsys, tmp_path):
    code, _, err = run(capsys, "compute", str(tmp_path / "nope.edges"))
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error_code"] == "FILE_NOT_FOUND"


def test_malformed_input_file(capsys, write_file):
    code, _, err = run(capsys, "temporal", str(write_file("c.txt", "1 2 3\n1 2\n")))
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["line_number"] == 2


@pytest.mark.parametrize("argv", [
    ["compute"],
    ["compute", "x.edges", "--bogus"],
    ["motif", "nonexistent"],
    ["temporal", "x.txt", "--window", "weekly"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "error_code" in err


def test_help(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "compute" in out


def test_compute_threads_do_not_change_the_result(capsys, write_file):
    # Two weak components: a square hole and a two-cycle.
    path = str(write_file("two.edges", "a b\na c\nd b\nd c\nx y\ny x\n"))
    _, serial, _ = run(capsys, "compute", path, "--reps", "--threads", "1")
    code, pooled, _ = run(capsys, "compute", path, "--reps", "--threads", "2")
    assert code == 0
    assert pooled == serial
    assert json.loads(pooled)["reduced_betti"] == [1, 2, 0]
