import csv
import io
import json

import pytest

from mpss import digraph as dg
from mpss.cli import main, parse_family, InputError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_family_parser():
    assert parse_family("Zm:3").edges == dg.directed_cycle(3).edges
    assert parse_family("Cmn:4,3").edges == dg.bidirected_cycle(4, 3).edges
    assert parse_family("Sn:2").edges == dg.sphere(2).edges
    assert parse_family("point").n == 1
    assert parse_family("susp:point").edges == dg.suspension(dg.point()).edges
    assert parse_family("cone:Zm:3").n == 7
    assert parse_family("box:Zm:3xSn:1").n == 12
    assert parse_family("box:(box:Zm:3xZm:3)xpoint").n == 9
    assert parse_family("box:IxJ").n == 15
    for bad in ("Zq:3", "Cmn:4", "box:Zm:3", "(Zm:3", "Zm:3extra", "Zm:0"):
        with pytest.raises(InputError):
            parse_family(bad)


def test_magnitude_cycle(capsys):
    code, out, _ = run(capsys, "magnitude", "--family", "Zm:3", "--ring", "Q", "--lmax", "7",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    ranks = {(e["k"], e["l"]): e["rank"] for e in data["magnitude"]}
    assert ranks[(2, 3)] == 3 and ranks[(3, 4)] == 3
    assert data["ring"] == "Q" and data["l_max"] == 7


def test_magnitude_point(capsys):
    code, out, _ = run(capsys, "magnitude", "--family", "point", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows == [{"k": "0", "l": "0", "rank": "1", "torsion": ""}]


def test_magnitude_from_file(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(dg.graph_to_json(dg.bidirected_cycle(2, 1))))
    code, out, _ = run(capsys, "magnitude", "--input", str(p), "--lmax", "4", "--format", "json")
    ranks = {(e["k"], e["l"]): e["rank"] for e in json.loads(out)["magnitude"]}
    assert code == 0 and ranks == {(0, 0): 3, (1, 1): 3, (2, 2): 1}


def test_pages_json_schema(capsys):
    code, out, _ = run(capsys, "pages", "--family", "Zm:3", "--lmax", "7", "--pages", "1..3",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"graph", "ring", "l_max", "pages"}
    assert [p["r"] for p in data["pages"]] == [1, 2, 3]
    for page in data["pages"]:
        for e in page["entries"]:
            assert set(e) == {"p", "q", "rank", "torsion", "exact"}
    p3 = {(e["p"], e["q"]): e["rank"] for e in data["pages"][2]["entries"] if e["rank"] and e["exact"]}
    assert p3 == {(0, 0): 1}


def test_pages_csv_columns(capsys):
    code, out, _ = run(capsys, "pages", "--family", "Cmn:4,3", "--lmax", "8", "--pages", "2",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["r", "p", "q", "k", "l", "rank", "torsion", "exact"]
    nz = {(int(r["p"]), int(r["q"])) for r in rows if r["rank"] != "0" and r["exact"] == "true"}
    assert nz == {(0, 0), (1, 0), (4, -2)}


def test_pages_sphere_text(capsys):
    code, out, _ = run(capsys, "pages", "--family", "Sn:2", "--pages", "2", "--lmax", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("E^2 of Sn:2")
    row0 = lines[2].split()
    assert row0[:4] == ["0", "1", ".", "1"]


def test_integer_pages_with_representatives(capsys):
    code, out, _ = run(capsys, "pages", "--family", "Cmn:2,1", "--ring", "Z", "--lmax", "3",
                       "--pages", "1", "--representatives", "--format", "json")
    data = json.loads(out)
    ent = {(e["p"], e["q"]): e for e in data["pages"][0]["entries"]}
    assert ent[(2, 0)]["representatives"] == [[{"trail": [0, 1, 2], "coef": 1}]]


def test_output_is_deterministic(capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"o{i}.json"
        assert main(["pages", "--family", "box:Zm:3xSn:1", "--lmax", "4", "--format", "json",
                     "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_default_lmax(capsys):
    code, out, _ = run(capsys, "pages", "--family", "Zm:3", "--format", "json", "--pages", "2")
    assert json.loads(out)["l_max"] == 5


def test_input_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "pages", "--family", "Zq:3")[0] == 2
    assert run(capsys, "pages", "--input", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "pages", "--family", "Zm:3", "--ring", "R")[0] == 2
    assert run(capsys, "pages", "--family", "Zm:3", "--pages", "3..1")[0] == 2
    assert run(capsys, "pages")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("digraph 2\n0 1 2\n")
    code, _, err = run(capsys, "magnitude", "--input", str(bad))
    assert code == 2 and "bad edge line" in err
    with pytest.raises(SystemExit) as exc:
        main(["pages", "--format", "xml"])
    assert exc.value.code == 2


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "spheres")
    assert code == 0
    assert out.splitlines()[-1].endswith("checks passed")
    assert "[FAIL]" not in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    from mpss import suites
    monkeypatch.setitem(suites.SUITES, "spheres", lambda: [suites.Check("always fails", False)])
    code, out, _ = run(capsys, "verify", "spheres")
    assert code == 1 and "[FAIL] always fails" in out
