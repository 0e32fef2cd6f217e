import json
import re
import subprocess
import sys

import pytest

from cambrian.cli import EXIT_CONFIG, EXIT_OK, main

from conftest import C3_FIXTURE_ROOTS, close


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def build_doc(capsys, *argv):
    code, out, _ = run(capsys, "build", *argv)
    assert code == EXIT_OK
    return json.loads(out)


@pytest.fixture
def fixture_roots(tmp_path):
    path = tmp_path / "roots.json"
    path.write_text(json.dumps(C3_FIXTURE_ROOTS))
    return path


def test_build_b3(capsys):
    doc = build_doc(capsys, "--family", "B", "--rank", "3")
    assert doc["num_positive_roots"] == 9
    assert len(doc["rho_order"]) == 12
    assert len(doc["ax_facets"]) == 20 and len(doc["ncp"]) == 20 and len(doc["fan"]) == 20
    assert doc["group"]["order"] == 48
    assert doc["chambers_per_cone"] and sum(int(k) * v for k, v in doc["chambers_per_cone"].items()) == 48


def test_build_i25(capsys):
    doc = build_doc(capsys, "--family", "I2", "--m", "5")
    assert doc["num_positive_roots"] == 5
    assert len(doc["fan"]) == 7


def test_build_a1(capsys):
    doc = build_doc(capsys, "--family", "A", "--rank", "1")
    assert doc["num_positive_roots"] == 1
    assert len(doc["fan"]) == 2 and doc["h"] == 2


def test_build_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["build", "--family", "H3", "--out", str(a)]) == EXIT_OK
    assert main(["build", "--family", "H3", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_build_fixture_roots(capsys, fixture_roots):
    doc = build_doc(capsys, "--family", "B", "--rank", "3", "--simple-roots", str(fixture_roots))
    assert close(doc["coxeter_element"], [[0, 0, -1], [1, 0, 0], [0, 1, 0]])
    assert doc["group"]["custom_simple_roots"] is True


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--family", "A", "--rank", "3", "--mc-samples", "20000")
    assert code == EXIT_OK
    assert "[FAIL]" not in out
    assert re.search(r"(\d+)/\1 checks passed", out)


def test_verify_round_trip(capsys, tmp_path):
    doc = tmp_path / "d4.json"
    assert main(["build", "--family", "D", "--rank", "4", "--out", str(doc)]) == EXIT_OK
    code, out, _ = run(capsys, "verify", "--from-json", str(doc), "--mc-samples", "5000")
    assert code == EXIT_OK
    assert "[PASS] export: rebuilt structures match the stored document" in out


def test_verify_tampered_document(capsys, tmp_path):
    path = tmp_path / "a2.json"
    assert main(["build", "--family", "A", "--rank", "2", "--out", str(path)]) == EXIT_OK
    doc = json.loads(path.read_text())
    doc["ax_facets"] = doc["ax_facets"][1:]
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--from-json", str(path), "--mc-samples", "2000")
    assert code != EXIT_OK
    assert "[FAIL] export" in out


def test_perturbed_roots_rejected(capsys, tmp_path):
    bad = [list(r) for r in C3_FIXTURE_ROOTS]
    bad[1][1] += 1e-3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _, err = run(capsys, "verify", "--family", "B", "--rank", "3", "--simple-roots", str(path))
    assert code != EXIT_OK
    assert "BadCustomRoots" in err


def test_svg_b3(capsys):
    code, out, _ = run(capsys, "svg", "--family", "B", "--rank", "3")
    assert code == EXIT_OK
    assert out.startswith("<svg") and out.rstrip().endswith("</svg>")
    assert out.count('class="region"') == 20
    assert out.count('class="vertex"') == 12
    assert ">∅</text>" in out


def test_svg_h3(capsys):
    code, out, _ = run(capsys, "svg", "--family", "H3")
    assert code == EXIT_OK
    assert out.count('class="region"') == 32
    assert out.count('class="vertex"') == 18


def test_svg_c3_fixture_labels(capsys, fixture_roots):
    code, out, _ = run(capsys, "svg", "--family", "B", "--rank", "3", "--simple-roots", str(fixture_roots))
    assert code == EXIT_OK
    labels = set(re.findall(r'class="region"[^>]*>([^<]*)</text>', out))
    expected = {"∅", "1", "2", "1,2", "3", "4", "5", "2,5", "4,5", "6", "7", "2,7", "8", "1,8",
                "5,8", "7,8", "9", "2,9", "1,9", "1,2,9"}
    assert labels == expected


def test_svg_projection_point(capsys):
    code, out, _ = run(capsys, "svg", "--family", "A", "--rank", "3", "--projection-point", "1,2,3")
    assert code == EXIT_OK and out.count('class="region"') == 14


def test_svg_needs_rank3(capsys):
    code, _, err = run(capsys, "svg", "--family", "D", "--rank", "4")
    assert code == EXIT_CONFIG
    assert "RankNot3" in err


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--family", "B", "--rank", "3")
    assert code == EXIT_OK
    row = out.splitlines()[2].split()
    assert row[:6] == ["B3", "48", "6", "9", "20", "20"]


def test_table_all(capsys):
    code, out, _ = run(capsys, "table", "--all")
    assert code == EXIT_OK
    rows = {line.split()[0]: line.split() for line in out.splitlines()[2:]}
    assert {k: int(v[4]) for k, v in rows.items()} == {
        "A2": 5, "A3": 14, "B3": 20, "D4": 50, "H3": 32, "I2(5)": 7, "I2(7)": 9}


@pytest.mark.parametrize("argv", [
    ["build"],
    ["build", "--family", "I2"],
    ["build", "--family", "A", "--rank", "0"],
    ["build", "--family", "B", "--rank", "3", "--guard", "10"],
    ["build", "--family", "B", "--rank", "3", "--simple-roots", "/nonexistent/roots.json"],
])
def test_configuration_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_CONFIG
    assert err.startswith("cambrian:")


def test_out_file(tmp_path):
    path = tmp_path / "t.txt"
    assert main(["table", "--family", "A", "--rank", "2", "--out", str(path)]) == EXIT_OK
    assert path.read_text().startswith("group")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cambrian", "table", "--family", "A", "--rank", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "A2" in res.stdout
