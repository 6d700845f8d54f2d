import json
import math
import os

import pytest

from qfzeta.cli import load_report, main
from qfzeta.errors import ParseError

GROUPS = os.path.join(os.path.dirname(__file__), "..", "groups")


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main(list(argv) + ["--out", str(out)])
    return code, out


def test_f_cyclic_closed_form(tmp_path):
    code, out = run(tmp_path, "f", os.path.join(GROUPS, "cyclic.grp"),
                    "--n", "2", "--max-word-len", "1", "--m-trunc", "3")
    assert code == 0
    rep = load_report(out)
    factor = 1.0
    for m in range(4):
        factor *= 1 - 0.1 ** (2 + m)
    val = rep["result"]["value"]["value"]
    assert abs(complex(*val) - factor ** 2) < 1e-14
    assert rep["result"]["value"]["tail_estimate"] >= 0


def test_classes_report_shape(tmp_path):
    code, out = run(tmp_path, "classes",
                    os.path.join(GROUPS, "schottky_fuchsian.grp"),
                    "--max-word-len", "3")
    assert code == 0
    rep = load_report(out)
    res = rep["result"]
    assert res["count"] == len(res["classes"])
    assert res["truncation"] == {"max_word_len": 3}
    assert all("'" not in c["word"] or True for c in res["classes"])
    lengths = [c["length"] for c in res["classes"]]
    assert max(lengths) == 3


def test_malformed_group_file_exits_2(tmp_path):
    bad = tmp_path / "bad.grp"
    bad.write_text("this is not a group file\n")
    code, out = run(tmp_path, "classes", str(bad))
    assert code == 2
    rep = load_report(out)
    assert "result" not in rep
    assert rep["error"]["code"] == "moebius.parse_error"


def test_missing_file_exits_2(tmp_path):
    code, out = run(tmp_path, "classes", str(tmp_path / "nope.grp"))
    assert code == 2
    rep = load_report(out)
    assert rep["error"]["code"] == "cli.io_error"


def test_zeta_requires_s(tmp_path):
    code, out = run(tmp_path, "zeta", os.path.join(GROUPS, "octagon.grp"),
                    "--max-word-len", "2")
    assert code == 2
    rep = load_report(out)
    assert rep["error"]["code"] == "moebius.parse_error"


def test_deterministic_byte_identical(tmp_path):
    args = ["series", os.path.join(GROUPS, "schottky_complex.grp"),
            "--max-word-len", "4", "--deterministic"]
    _, out1 = run(tmp_path, *args)
    text1 = out1.read_text()
    out2 = tmp_path / "second.json"
    main(args + ["--out", str(out2)])
    assert text1 == out2.read_text()


def test_load_report_rejects_bad_schema(tmp_path):
    p = tmp_path / "r.json"
    p.write_text(json.dumps({"schema": 99, "command": "f"}))
    with pytest.raises(ParseError):
        load_report(p)
    p.write_text(json.dumps({"schema": 1, "command": "f", "surprise": 1}))
    with pytest.raises(ParseError):
        load_report(p)
    p.write_text(json.dumps([1, 2]))
    with pytest.raises(ParseError):
        load_report(p)


def _walk_values(node, path=""):
    """Yield (path, dict) for every {"value": ...} wrapper in a report."""
    if isinstance(node, dict):
        if "value" in node and not isinstance(node["value"], dict):
            yield path, node
        for k, v in node.items():
            yield from _walk_values(v, f"{path}/{k}")
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _walk_values(v, f"{path}[{i}]")


def test_numeric_fields_carry_metadata(tmp_path):
    code, out = run(tmp_path, "f", os.path.join(GROUPS, "octagon.grp"),
                    "--max-word-len", "2")
    assert code == 0
    rep = load_report(out)
    wrapped = list(_walk_values(rep["result"]))
    assert wrapped
    for path, node in wrapped:
        extras = set(node) - {"value"}
        assert extras & {"truncation", "tolerance", "tail_estimate",
                         "quad_order"}, path


def test_domain_command(tmp_path):
    code, out = run(tmp_path, "domain", os.path.join(GROUPS, "octagon.grp"))
    assert code == 0
    rep = load_report(out)
    res = rep["result"]
    assert res["complete"] and res["genus"] == 2
    assert abs(res["area"]["value"] - 4 * math.pi) < 1e-6
    assert len(res["sides"]) == 8
    assert all(s["pairing_word"] for s in res["sides"])


def test_check_command_passes(tmp_path):
    code, out = run(tmp_path, "check",
                    os.path.join(GROUPS, "schottky_complex.grp"),
                    "--max-word-len", "4")
    assert code == 0
    rep = load_report(out)
    assert rep["result"]["all_passed"]
    names = {c["name"] for c in rep["result"]["checks"]}
    assert {"f-reflection", "kernel-symmetry",
            "kernel-intertwining"} <= names
