import json
import math
import xml.etree.ElementTree as ET

import pytest

from muarrange import Window, hex_arrangement
from muarrange.cli import arrangement_text, main, parse_arrangement, InputError

from oracles import brute_force_boundary_vertices

SQ3 = math.sqrt(3)


def write(tmp_path, name, mu, disks):
    p = tmp_path / name
    p.write_text(json.dumps({"mu": mu, "disks": [{"x": x, "y": y, "r": r} for x, y, r in disks]}))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_validate_ok_and_violation(tmp_path, capsys):
    ok = write(tmp_path, "ok.json", 0.5, [(0, 0, 1), (1.5, 0, 1)])
    code, rep, _ = run(capsys, "validate", "--input", ok)
    assert code == 0 and rep["valid"] and rep["violations"] == []
    bad = write(tmp_path, "bad.json", 0.5, [(0, 0, 1), (1.49, 0, 1)])
    code, rep, _ = run(capsys, "validate", "--input", bad)
    assert code == 1 and len(rep["violations"]) == 1
    assert rep["violations"][0]["required_distance"] == 1.5


def test_parse_error_names_field(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text('{"mu": 0.5, "disks": [{"x": 0, "y": "oops", "r": 1}]}')
    code, rep, err = run(capsys, "validate", "--input", str(p))
    assert code == 2 and rep is None and "disks[0].y" in err
    p.write_text('{"mu": 0.5,\n "disks": [}')
    code, _, err = run(capsys, "validate", "--input", str(p))
    assert code == 2 and ":2:" in err
    with pytest.raises(InputError, match="'mu'"):
        parse_arrangement('{"disks": []}')


def test_decompose_thick_triangle_with_svg(tmp_path, capsys):
    s = 1.3
    inp = write(tmp_path, "t.json", 0.3, [(0, 0, 1), (s, 0, 1), (s / 2, s * SQ3 / 2, 1)])
    svg = tmp_path / "t.svg"
    code, rep, _ = run(capsys, "decompose", "--input", inp, "--svg", str(svg))
    assert code == 0
    total = rep["area_O"] + rep["area_I"] + rep["area_C"]
    assert abs(total - rep["area_U"]) <= 1e-9 * rep["area_U"]
    assert rep["counts"] == {"sectors": 3, "triangles": 3, "polygons": 1}
    root = ET.parse(svg).getroot()
    ns = "{http://www.w3.org/2000/svg}"
    style = root.find(f"{ns}style").text
    for cls, color in (("outer", "#ffffff"), ("inner", "#d3d3d3"), ("core", "#808080")):
        assert style.count(f".{cls} ") == 1 and color in style
    classes = [g.get("class") for g in root.iter(f"{ns}g") if g.get("class")]
    assert classes == ["core", "inner", "outer", "disk"]


def test_decompose_single_disk(tmp_path, capsys):
    code, rep, _ = run(capsys, "decompose", "--input", write(tmp_path, "s.json", 0.5, [(0, 0, 1)]))
    assert code == 0 and rep["area_I"] == 0 and abs(rep["area_C"]) < 1e-12


def test_decompose_hex_patch_counts_match_oracle(tmp_path, capsys):
    arr = hex_arrangement(0.3, Window((0, 0), 5))
    p = tmp_path / "h.json"
    p.write_text(arrangement_text(arr))
    code, rep, _ = run(capsys, "decompose", "--input", str(p))
    verts = brute_force_boundary_vertices(arr.centers.tolist(), arr.radii.tolist())
    assert code == 0 and rep["counts"]["triangles"] == len(verts) == rep["counts"]["sectors"]


def test_verify_bound_equality_and_perturbed(tmp_path, capsys):
    s = 1.3
    tri = [(0, 0, 1), (s, 0, 1), (s / 2, s * SQ3 / 2, 1)]
    code, rep, _ = run(capsys, "verify-bound", "--input", write(tmp_path, "a.json", 0.3, tri))
    assert code == 0 and rep["equality"] and rep["mode"] == "theorem"
    tri[2] = (s / 2, s * SQ3 / 2 + 0.05, 1)
    code, rep, _ = run(capsys, "verify-bound", "--input", write(tmp_path, "b.json", 0.3, tri))
    assert code == 0 and not rep["equality"] and rep["slack"] > 0


def test_verify_bound_conjectural_banner(tmp_path, capsys):
    code, rep, _ = run(capsys, "verify-bound", "--input", write(tmp_path, "c.json", 0.8, [(0, 0, 1), (1.8, 0, 1)]))
    assert code == 0 and rep["mode"] == "conjectural" and "CONJECTURAL" in rep["banner"]


def test_random_corpus_round_trip(tmp_path, capsys):
    for seed in range(5):
        out = tmp_path / f"r{seed}.json"
        code, _, _ = run(capsys, "random", "--mu", "0.25", "--seed", str(seed), "--count", "15", "--output", str(out))
        assert code == 0
        assert run(capsys, "verify-bound", "--input", str(out))[0] == 0


def test_hex_round_trip_and_domain(tmp_path, capsys):
    out = tmp_path / "hex.json"
    code, rep, _ = run(capsys, "hex", "--mu", "0.3", "--window-radius", "4", "--output", str(out))
    assert code == 0 and rep["n_disks"] > 0
    assert run(capsys, "validate", "--input", str(out))[0] == 0
    code, _, err = run(capsys, "hex", "--mu", "1.2")
    assert code == 2 and "mu" in err


def test_reports_byte_identical(tmp_path, capsys):
    inp = write(tmp_path, "x.json", 0.25, [(0, 0, 1), (1.3, 0.2, 0.8), (0.4, 1.2, 0.7)])
    texts = []
    for _ in range(2):
        main(["decompose", "--input", inp])
        texts.append(capsys.readouterr().out)
    assert texts[0] == texts[1]


def test_certify_coarse_fails_and_threads_agree(capsys):
    code, one, _ = run(capsys, "certify", "--resolution", "100", "--threads", "1")
    assert code == 1 and not one["verdict"] and "refine" in one["margin_arithmetic"]
    _, four, _ = run(capsys, "certify", "--resolution", "100", "--threads", "4")
    assert (one["grid_min"], one["argmin"]) == (four["grid_min"], four["argmin"])


def test_density_command(tmp_path, capsys):
    arr = hex_arrangement(0.3, Window((0, 0), 6))
    p = tmp_path / "d.json"
    p.write_text(arrangement_text(arr))
    code, rep, _ = run(capsys, "density", "--input", str(p), "--window-radius", "6")
    assert code == 0 and 0 < rep["delta_U"] < rep["corollary_delta_U"]


def test_floats_round_trip_exactly(tmp_path):
    arr = hex_arrangement(0.123456789, Window((0.1, 0.2), 3))
    again = parse_arrangement(arrangement_text(arr))
    assert again == arr
