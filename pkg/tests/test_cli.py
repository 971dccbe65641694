import json
import math
import subprocess
import sys

import numpy as np
import pytest

from roundness.cli import main
from roundness.metric import load_space


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_graph(tmp_path, name, n, edges):
    p = tmp_path / name
    p.write_text(json.dumps({"n": n, "edges": [list(e) for e in edges]}))
    return str(p)


@pytest.fixture
def c4(tmp_path):
    return write_graph(tmp_path, "c4.json", 4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def k4(tmp_path):
    return write_graph(tmp_path, "k4.json", 4,
                       [(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture
def p3(tmp_path):
    return write_graph(tmp_path, "p3.json", 3, [(0, 1), (1, 2)])


@pytest.fixture
def p4(tmp_path):
    return write_graph(tmp_path, "p4.json", 4, [(0, 1), (1, 2), (2, 3)])


def test_roundness_c4(capsys, c4):
    code, out, _ = run_cli(capsys, "roundness", c4)
    assert code == 0
    obj = json.loads(out)
    assert abs(obj["upper"] - 1.0) <= 1e-9
    assert obj["witness"]["edges"] == [1.0, 1.0, 1.0, 1.0]
    assert obj["witness"]["diagonals"] == [2.0, 2.0]
    assert obj["quad_count"] == 55


def test_roundness_k4_infinite(capsys, k4):
    code, out, _ = run_cli(capsys, "roundness", k4)
    assert code == 0
    assert json.loads(out)["upper"] == "inf"


def test_roundness_p3(capsys, p3):
    code, out, _ = run_cli(capsys, "roundness", p3)
    assert code == 0
    assert abs(json.loads(out)["upper"] - 2.0) <= 1e-9


def test_genround_c4(capsys, c4):
    code, out, _ = run_cli(capsys, "genround", c4)
    assert code == 0
    obj = json.loads(out)
    assert abs(obj["gr"] - 1.0) <= 1e-6
    assert abs(obj["search_upper"] - 1.0) <= 1e-9
    assert obj["search_witness"] is not None


def test_kernel_p4(capsys, p4):
    code, out, _ = run_cli(capsys, "kernel", p4, "--p", "1.0")
    assert code == 0
    obj = json.loads(out)
    assert obj["negative"] is True
    assert obj["p"] == 1.0


def test_embed_k3(capsys, tmp_path):
    k3 = write_graph(tmp_path, "k3.json", 3, [(0, 1), (1, 2), (0, 2)])
    out_path = str(tmp_path / "coords.csv")
    code, out, _ = run_cli(capsys, "embed", k3, "--p", "2.0", "--out", out_path)
    assert code == 0
    obj = json.loads(out)
    assert obj["max_relative_error"] <= 1e-6
    lines = open(out_path).read().strip().splitlines()
    assert lines[0].startswith("label,")
    assert len(lines) == 4  # header + 3 points


def test_embed_requires_out(capsys, p3):
    code, _, err = run_cli(capsys, "embed", p3, "--p", "1.0")
    assert code == 2


def test_cayley_z2_roundness(capsys):
    code, out, _ = run_cli(capsys, "cayley", "Z^2", "(1,0),(0,1)", "roundness", "-R", "2")
    assert code == 0
    obj = json.loads(out)
    assert abs(obj["upper"] - 1.0) <= 1e-9
    assert obj["ball_size"] == 13
    assert obj["witness"]["edges"] == [1.0, 1.0, 1.0, 1.0]


def test_cayley_z4_roundness(capsys):
    code, out, _ = run_cli(capsys, "cayley", "Z/4", "1", "roundness", "-R", "2")
    assert code == 0
    assert abs(json.loads(out)["upper"] - 1.0) <= 1e-9


def test_cayley_ball_out_roundtrips(capsys, tmp_path):
    out_path = str(tmp_path / "ball.json")
    code, out, _ = run_cli(capsys, "cayley", "F_2", "x,y", "ball", "-R", "2",
                           "--out", out_path)
    assert code == 0
    obj = json.loads(out)
    assert obj["ball_size"] == 17
    space = load_space(out_path)
    assert space.size == 17
    # the saved ball feeds straight back into the roundness command
    code2, out2, _ = run_cli(capsys, "roundness", out_path)
    assert code2 == 0
    assert abs(json.loads(out2)["upper"] - 2.0) <= 1e-9  # tree ball


def test_cayley_genround(capsys):
    code, out, _ = run_cli(capsys, "cayley", "Z/4", "1", "genround", "-R", "2")
    assert code == 0
    obj = json.loads(out)
    assert abs(obj["gr"] - 1.0) <= 1e-6


def test_scan_z2_box1(capsys, tmp_path):
    out_csv = str(tmp_path / "scan.csv")
    code, out, _ = run_cli(capsys, "scan-z2", "--box", "1",
                           "--check", "star", "--check", "pair", "--check", "roundness",
                           "--out", out_csv)
    assert code == 0
    obj = json.loads(out)
    assert obj["generating"] == 10
    assert obj["star_true"] == 2
    assert obj["star_true_all_size_6"] is True
    assert obj["star_true_all_sum_form"] is True
    rows = open(out_csv).read().strip().splitlines()
    assert rows[0] == "set_id,size,elements,star,doublestar,pair_found,roundness_upper"
    assert len(rows) == 11
    star_true_rows = [r for r in rows[1:] if ",True," in r]
    # star-false rows certify upper bound 1.0 at radius 2
    for r in rows[1:]:
        fields = r.split(",")
        if fields[3] == "False":
            assert abs(float(fields[-1]) - 1.0) <= 1e-9


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, _ = run_cli(capsys, "roundness", str(bad))
    assert code == 2
    code2, _, _ = run_cli(capsys, "cayley", "Q^2", "(1,0)", "ball", "-R", "1")
    assert code2 == 2


def test_validation_exit_code(capsys, tmp_path):
    bad = tmp_path / "asym.json"
    bad.write_text(json.dumps({"labels": ["a", "b"], "dist": [[0, 1], [2, 0]]}))
    with pytest.raises(SystemExit) as err:
        main(["roundness", str(bad)])
    assert err.value.code == 3


def test_computation_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "cayley", "Z^2", "(2,0),(0,2)", "ball", "-R", "2")
    assert code == 4
    assert "NotGenerating" in err


def test_repro_list(capsys):
    code, out, _ = run_cli(capsys, "repro", "--list")
    assert code == 0
    ids = out.strip().splitlines()
    assert "z2_standard_roundness" in ids
    assert len(ids) == 14


def test_repro_subset_passes(capsys):
    code, out, _ = run_cli(capsys, "repro", "--claims",
                           "complete_graphs_infinite,cycle_roundness,torsion_constructions")
    assert code == 0
    obj = json.loads(out)
    assert obj["all_pass"] is True
    assert len(obj["claims"]) == 3


def test_repro_tampered_tolerance_fails(capsys):
    code, out, _ = run_cli(capsys, "repro", "--tol", "10",
                           "--claims", "z2_standard_roundness")
    assert code == 5
    assert json.loads(out)["all_pass"] is False


def test_conjectural_note_trigger():
    from roundness.cli import conjectural_note
    from roundness.groups import Free, FreeAbelian

    assert conjectural_note(Free(2), math.log2(3)) is not None
    assert conjectural_note(Free(2), math.log2(3) + 5e-7) is not None
    assert conjectural_note(Free(2), 2.0) is None
    assert conjectural_note(Free(2), math.inf) is None
    assert conjectural_note(FreeAbelian(2), math.log2(3)) is None


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "roundness.cli", "repro", "--list"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "torsion_constructions" in proc.stdout
