import csv
import io
import json

import pytest

from cubictsp.cli import FIELDS, INVALID, OK, VIOLATION, main
from cubictsp.graph import Tour, format_tour, read_edge_list
from cubictsp.oracle import petersen


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def _gen(tmp_path, *args):
    out = str(tmp_path / "g.txt")
    assert main(["gen", *args, "--out", out]) == OK
    return out


def test_gen_and_solve(tmp_path, capsys):
    graph = _gen(tmp_path, "--kind", "random_cubic", "--n", "16", "--seed", "3")
    tour = str(tmp_path / "t.txt")
    assert main(["solve", "--graph", graph, "--audit", "--out", tour]) == OK
    assert "length" in capsys.readouterr().out
    assert main(["verify", "--graph", graph, "--tour", tour]) == OK
    assert "valid tour" in capsys.readouterr().out


def test_solve_json(tmp_path, capsys):
    graph = _gen(tmp_path, "--kind", "petersen")
    assert main(["solve", "--graph", graph, "--json"]) == OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["length"] == 11 and payload["bound_ok"]


def test_barnette_subcommand(tmp_path, capsys):
    rot = str(tmp_path / "r.txt")
    graph = _gen(tmp_path, "--kind", "even_prism", "--k", "3", "--rot", rot)
    assert main(["barnette", "--graph", graph, "--rotation", rot, "--audit", "--json"]) == OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["cycles"] == 1 and payload["length"] == 12 and payload["audit_ok"]


def test_gen_rotation_for_non_planar_kind(tmp_path):
    rot = str(tmp_path / "r.txt")
    assert main(["gen", "--kind", "random_cubic", "--n", "10", "--out", str(tmp_path / "g"), "--rot", rot]) == INVALID


def test_reduce_decompose_oracle(tmp_path, capsys):
    graph = _gen(tmp_path, "--kind", "double_hexagon")
    trace = str(tmp_path / "trace.json")
    out = str(tmp_path / "h.txt")
    assert main(["reduce", "--graph", graph, "--emit-trace", trace, "--out", out]) == OK
    assert "2 reductions" in capsys.readouterr().out
    assert len(json.load(open(trace))) == 2 and read_edge_list(out).n == 8
    assert main(["decompose", "--graph", out]) == OK
    dist = json.loads(capsys.readouterr().out)
    assert all("lambda" in atom for atom in dist)
    assert main(["oracle", "--graph", graph]) == OK
    assert int(capsys.readouterr().out) == 12


def test_solve_general(tmp_path, capsys):
    graph = _gen(tmp_path, "--kind", "subdivided_k4_pair")
    assert main(["solve-general", "--graph", graph, "--json"]) == OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["length"] == 12 == payload["lower_bound"] and payload["b"] == 1


def test_verify_reports_bad_tour(files):
    g = petersen().graph
    graph = files("p.txt", "10 15\n" + "".join(f"{u} {v}\n" for u, v in g.pairs()))
    tour = files("t.txt", format_tour(g, Tour.from_counts({0: 1})))
    assert main(["verify", "--graph", graph, "--tour", tour]) == VIOLATION


@pytest.mark.parametrize("text", ["4 2\n0 1\n", "3 3\n0 1\n1 2\n2 0\n", "nonsense"])
def test_invalid_graph_exit_code(files, text):
    assert main(["solve", "--graph", files("bad.txt", text)]) == INVALID


def test_missing_file_exit_code(tmp_path):
    assert main(["oracle", "--graph", str(tmp_path / "missing.txt")]) == INVALID


def test_bridged_graph_to_solve_is_invalid(tmp_path):
    graph = _gen(tmp_path, "--kind", "random_cubic_bridged", "--n", "12", "--b", "1")
    assert main(["solve", "--graph", graph]) == INVALID
    assert main(["solve-general", "--graph", graph]) == OK


def _bench(files, tmp_path, manifest):
    out = str(tmp_path / "out.csv")
    code = main(["bench", files("m.json", json.dumps(manifest)), "--out", out])
    return code, list(csv.DictReader(io.StringIO(open(out).read())))


def test_bench_empty_manifest(files, tmp_path):
    code, rows = _bench(files, tmp_path, [])
    assert code == OK and rows == []


def test_bench_prisms(files, tmp_path):
    manifest = {"instances": [{"kind": "even_prism", "k": k} for k in range(2, 9)]}
    code, rows = _bench(files, tmp_path, manifest)
    assert code == OK and len(rows) == 7
    assert all(r["bound_ok"] == "1" and r["solver"] == "barnette" for r in rows)
    assert list(rows[0]) == FIELDS


def test_bench_is_reproducible(files, tmp_path):
    manifest = [{"kind": "random_cubic", "n": 12, "seed": 4}, {"kind": "random_cubic_bridged", "n": 12, "b": 1}]
    _, first = _bench(files, tmp_path, manifest)
    _, second = _bench(files, tmp_path, manifest)
    assert first == second
    assert [r["solver"] for r in first] == ["two_connected", "general"]


def test_bench_bad_manifest(files, tmp_path):
    assert main(["bench", files("m.json", "[{\"n\": 3}]")]) == INVALID
    assert main(["bench", files("m2.json", "{not json")]) == INVALID


def test_rotation_file_roundtrip(tmp_path, files):
    rot = str(tmp_path / "r.txt")
    graph = _gen(tmp_path, "--kind", "cube", "--rot", rot)
    text = open(rot).read()
    assert main(["barnette", "--graph", graph, "--rotation", files("r2.txt", text)]) == OK
