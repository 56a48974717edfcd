import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from legschober.cli import main
from legschober.demos import airy_shadow, airy_sheaf, gluing_example
from legschober.exactla import ExactMatrix
from legschober.sheafline import LineSheaf

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def check(out, name):
    data = json.loads(out)
    jsonschema.validate(data, schema(name))
    return data


def dump(path, obj):
    path.write_text(json.dumps(obj))
    return path


def test_schemas_are_valid_draft7():
    for p in sorted(SCHEMAS.glob("*.schema.json")):
        jsonschema.Draft7Validator.check_schema(json.loads(p.read_text()))


def test_front_build(capsys, tmp_path):
    code, out, _ = run(capsys, "front", "build", "--class", "(2/3)*z^(-3/2)")
    assert code == 0
    d = check(out, "front")
    assert d["strands"] == 2 and len(d["crossings"]) == 3
    t = dump(tmp_path / "t.json", ["z^(-2)", "i*z^(-2)"])
    code, out, _ = run(capsys, "front", "build", "--type", t, "--out", tmp_path / "f.json",
                       "--svg", tmp_path / "f.svg")
    assert code == 0
    assert check(out, "front_summary") == {"strands": 2, "crossings": 4, "components": 2}
    check((tmp_path / "f.json").read_text(), "front")
    assert (tmp_path / "f.svg").read_text().startswith("<?xml")


def test_front_build_errors(capsys, tmp_path):
    assert run(capsys, "front", "build")[0] == 2
    code, _, err = run(capsys, "front", "build", "--class", "z^(-")
    assert code == 2 and err
    # a formal type is a set, so repeated classes collapse
    code, out, _ = run(capsys, "front", "build", "--class", "z^(-1)", "--class", "z^(-1)")
    assert code == 0 and json.loads(out)["strands"] == 1
    assert run(capsys, "front", "build", "--class", "z^-1", "--epsilon", "-1")[0] == 2
    assert run(capsys, "front", "build", "--type", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "front", "build", "--type", bad)[0] == 2


def test_unknown_flags(capsys):
    assert run(capsys, "front", "build", "--bogus", "1")[0] == 2
    assert run(capsys, "demo", "airy", "--frobnicate")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys)[0] == 2


def test_validate_line(capsys, tmp_path):
    good = LineSheaf((1, 2), (ExactMatrix.from_rows([[1], [0]]),), ("-",))
    p = dump(tmp_path / "l.json", good.to_json())
    jsonschema.validate(good.to_json(), schema("line_sheaf"))
    code, out, _ = run(capsys, "sheaf", "validate-line", "--in", p)
    assert code == 0 and check(out, "report")["pass"] is True
    bad = LineSheaf((1, 2), (ExactMatrix.from_rows([[0], [0]]),), ("-",))
    p = dump(tmp_path / "b.json", bad.to_json())
    code, out, _ = run(capsys, "sheaf", "validate-line", "--in", p)
    data = check(out, "report")
    assert code == 1 and data["pass"] is False and data["failures"][0]["where"] == "1/2"


def test_sheaf_validate_and_monodromy(capsys, tmp_path):
    s = airy_sheaf()
    jsonschema.validate(s.to_json(), schema("front_sheaf"))
    p = dump(tmp_path / "s.json", s.to_json())
    code, out, _ = run(capsys, "sheaf", "validate", "--in", p)
    assert code == 0 and check(out, "report")["pass"]
    code, out, _ = run(capsys, "sheaf", "monodromy", "--in", p, "--component", 0)
    data = check(out, "monodromy")
    assert code == 0 and data["matrix"]["entries"] == [["-1"]] and data["charpoly"] == ["1", "1"]
    code, out, _ = run(capsys, "sheaf", "monodromy", "--in", p, "--strand", 1)
    assert code == 0 and check(out, "monodromy")["component"] == 0
    assert run(capsys, "sheaf", "monodromy", "--in", p, "--component", 5)[0] == 2
    assert run(capsys, "sheaf", "monodromy", "--in", p, "--strand", 9)[0] == 2


def test_sheaf_front_by_path(capsys, tmp_path):
    s = airy_sheaf().to_json()
    dump(tmp_path / "front.json", s["front"])
    s["front"] = "front.json"
    p = dump(tmp_path / "s.json", s)
    assert run(capsys, "sheaf", "validate", "--in", p)[0] == 0


def test_sheaf_validate_failure(capsys, tmp_path):
    s = airy_sheaf().to_json()
    m = next(m for m in s["edge_maps"].values() if m["rows"] and m["cols"])
    m["entries"] = [["0"] * m["cols"] for _ in range(m["rows"])]
    p = dump(tmp_path / "s.json", s)
    code, out, _ = run(capsys, "sheaf", "validate", "--in", p)
    data = check(out, "report")
    assert code == 1 and not data["pass"] and data["failures"]
    code, out, _ = run(capsys, "sheaf", "monodromy", "--in", p)
    assert code == 1 and check(out, "report")["pass"] is False


def test_sheaf_shape_error(capsys, tmp_path):
    s = airy_sheaf().to_json()
    s["region_dims"] = s["region_dims"][:-1]
    p = dump(tmp_path / "s.json", s)
    code, _, err = run(capsys, "sheaf", "validate", "--in", p)
    assert code == 2 and "error" in err


def test_mutate_act(capsys, tmp_path):
    seq = {"gram": [[1, 1], [0, 1]], "vectors": [[1, 0], [0, 1]]}
    jsonschema.validate(seq, schema("exceptional_sequence"))
    p = dump(tmp_path / "q.json", seq)
    code, out, _ = run(capsys, "mutate", "act", "--in", p, "--word", "s1")
    data = check(out, "exceptional_sequence")
    assert code == 0 and data["vectors"] == [[-1, 1], [1, 0]]
    code, out, _ = run(capsys, "mutate", "act", "--in", p, "--word", "s1 S1")
    assert json.loads(out)["vectors"] == [[1, 0], [0, 1]]
    out_path = tmp_path / "o.json"
    assert run(capsys, "mutate", "act", "--in", p, "--word", "s1", "--out", out_path)[0] == 0
    check(out_path.read_text(), "exceptional_sequence")
    assert run(capsys, "mutate", "act", "--in", p, "--word", "s2")[0] == 2
    assert run(capsys, "mutate", "act", "--in", p, "--word", "x1")[0] == 2
    assert run(capsys, "mutate", "act", "--in", p)[0] == 2


def test_mutate_period(capsys, tmp_path):
    for chi, want in ((0, 2), (1, 3), (2, None)):
        pair = {"gram": [[1, chi], [0, 1]], "blockA": [[1, 0]], "blockB": [[0, 1]]}
        jsonschema.validate(pair, schema("sod_pair"))
        p = dump(tmp_path / f"p{chi}.json", pair)
        code, out, _ = run(capsys, "mutate", "period", "--in", p, "--max", 100)
        assert code == 0 and check(out, "period") == {"period": want}
    assert run(capsys, "mutate", "period", "--in", p, "--max", 0)[0] == 2
    bad = dump(tmp_path / "bad.json", {"gram": [[1, 1], [1, 1]], "blockA": [[1, 0]],
                                         "blockB": [[0, 1]]})
    assert run(capsys, "mutate", "period", "--in", bad)[0] == 2


def test_mutate_period_prints_compact(capsys, tmp_path):
    p = dump(tmp_path / "p.json", {"gram": [[1, 0], [0, 1]], "blockA": [[1, 0]], "blockB": [[0, 1]]})
    assert run(capsys, "mutate", "period", "--in", p)[1] == '{"period":2}\n'


def test_schober_decategorify(capsys, tmp_path):
    sh = airy_shadow()
    f = dump(tmp_path / "front.json", sh.front.to_json())
    flags = {"gram": [[1, 1], [0, 1]], "blocks": [[[1, 0]], [[0, 1]]]}
    jsonschema.validate(flags, schema("schober_flags"))
    jsonschema.validate(sh.to_json(), schema("schober_flags"))
    p = dump(tmp_path / "flags.json", flags)
    code, out, _ = run(capsys, "schober", "decategorify", "--in", p, "--front", f)
    data = check(out, "front_sheaf")
    assert code == 0 and data["region_dims"] == list(airy_sheaf().region_dims)
    # chi = 2 never closes on three crossings: the faces cannot be glued
    p = dump(tmp_path / "open.json", {"gram": [[1, 2], [0, 1]], "blocks": [[[1, 0]], [[0, 1]]]})
    code, _, err = run(capsys, "schober", "decategorify", "--in", p, "--front", f)
    assert code == 2 and "error" in err


def test_schober_validate(capsys, tmp_path):
    g = gluing_example(-1).to_json()
    jsonschema.validate(g, schema("gluing"))
    p = dump(tmp_path / "g.json", g)
    code, out, _ = run(capsys, "schober", "validate", "--in", p)
    data = check(out, "report")
    assert code == 0 and data["pass"] and data["invariants"]["det_id_minus_gf"] == "2"
    p = dump(tmp_path / "g1.json", gluing_example(1).to_json())
    code, out, _ = run(capsys, "schober", "validate", "--in", p)
    data = check(out, "report")
    assert code == 1
    assert {"where": "E", "kind": "id_minus_gf_not_invertible"}.items() <= data["failures"][0].items()
    g["zero_strand"] = 1 - g["zero_strand"]
    p = dump(tmp_path / "g2.json", g)
    assert run(capsys, "schober", "validate", "--in", p)[0] == 2


def test_demo_airy(capsys, tmp_path):
    svg = tmp_path / "a.svg"
    code, out, _ = run(capsys, "demo", "airy", "--svg", svg)
    assert code == 0 and out == '{"strands":2,"crossings":3,"components":1}\n'
    check(out, "front_summary")
    assert svg.read_bytes() == (Path(__file__).parent / "golden" / "airy.svg").read_bytes()


def test_demo_airy_default_path(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(capsys, "demo", "airy")[0] == 0
    assert (tmp_path / "airy.svg").is_file()


def test_demo_spherical(capsys, tmp_path):
    for n in (1, 2, 3):
        code, out, _ = run(capsys, "demo", "spherical", n, "--svg", tmp_path / f"s{n}.svg")
        data = check(out, "spherical_demo")
        assert code == 0 and data["crossings"] == 2 * n and data["period"] == 2
        assert data["closes"] and data["sheaf_valid"]
    assert run(capsys, "demo", "spherical", 0)[0] == 2
    assert run(capsys, "demo", "spherical", "x")[0] == 2


def test_output_is_deterministic(capsys, tmp_path):
    p = dump(tmp_path / "s.json", airy_sheaf().to_json())
    first = run(capsys, "sheaf", "monodromy", "--in", p)[1]
    assert all(run(capsys, "sheaf", "monodromy", "--in", p)[1] == first for _ in range(3))


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "legschober", "demo", "spherical", "2"],
                       capture_output=True, text=True, cwd=tmp_path)
    assert r.returncode == 0
    assert json.loads(r.stdout)["crossings"] == 4
    r = subprocess.run([sys.executable, "-m", "legschober", "front", "build", "--nope"],
                       capture_output=True, text=True, cwd=tmp_path)
    assert r.returncode == 2 and r.stderr


@pytest.mark.parametrize("argv", [["--help"], ["demo", "--help"]])
def test_help_exits_zero(capsys, argv):
    assert main(argv) == 0
