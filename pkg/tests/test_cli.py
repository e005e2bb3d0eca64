import csv
import io
import json

import numpy as np
import pytest

from martonkit import cli
from martonkit.errors import NumericalError


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_mappings_document(capsys):
    code, out = run(capsys, ["mappings", "--shape", "2", "2", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["total"] == 16
    assert doc["admissible"] == 14
    assert len(doc["tables"]) == 16
    assert "generated_at" in doc


def test_mappings_csv(capsys):
    code, out = run(capsys, ["mappings", "--shape", "2", "2", "2",
                             "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 16
    assert sum(r["admissible"] == "True" for r in rows) == 14


def test_claim1_passes(capsys):
    code, out = run(capsys, ["claim1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"]
    assert doc["value_a"] > doc["value_b"]
    assert doc["argmax_b"]["x_equals_v"]


def test_claim1_deterministic(capsys):
    _, first = run(capsys, ["claim1"])
    _, second = run(capsys, ["claim1"])

    def strip(text):
        d = json.loads(text)
        d.pop("generated_at")
        return d

    assert strip(first) == strip(second)


def test_sumrate_on_file_channel(tmp_path, capsys):
    # one clean receiver, one deaf one: sum rate is the clean capacity
    ch = {"x_size": 2, "y_size": 2, "z_size": 2,
          "q_y": [[0.7, 0.3], [0.3, 0.7]],
          "q_z": [[0.5, 0.5], [0.5, 0.5]]}
    path = tmp_path / "deaf.json"
    path.write_text(json.dumps(ch))
    code, out = run(capsys, [
        "sumrate", "--channel", str(path), "--golden-tol", "0.05",
        "--outer-starts", "2", "--grid", "3", "--verify",
    ])
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["sum_rate_bits"] - 0.118709101) < 1e-3
    assert doc["verify"]["passed"]
    assert len(doc["lambda_grid"]) == 3
    assert len(doc["witness"]["per_w"]) >= 1


def test_sumrate_writes_out_file(tmp_path, capsys):
    out_path = tmp_path / "doc.json"
    code, out = run(capsys, [
        "claim1", "--out", str(out_path),
    ])
    assert code == 0
    assert out == ""  # nothing on stdout when --out is given
    assert json.loads(out_path.read_text())["command"] == "claim1"


def test_directions_csv(capsys):
    code, out = run(capsys, [
        "directions", "--channel", "claim1", "-d", "1,0,0",
        "--format", "csv",
    ])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert rows[0]["agree"] == "True"


def test_twoletter_roundtrip(tmp_path, capsys):
    rng = np.random.default_rng(6)
    doc = {
        "r_uvw": rng.dirichlet(np.ones(8)).reshape(2, 2, 2).tolist(),
        "r_x_single": rng.dirichlet(np.ones(2), size=8)
                         .reshape(2, 2, 2, 2).tolist(),
    }
    path = tmp_path / "tl.json"
    path.write_text(json.dumps(doc))
    code, out = run(capsys, [
        "twoletter", "--channel", "claim1", "--input", str(path), "--verify",
    ])
    assert code == 0
    parsed = json.loads(out)
    assert parsed["reduction_check"]["passed"]
    assert parsed["verify"]["passed"]
    assert set(parsed["bounds"]) == {"b_01", "b_02", "b_012a", "b_012b",
                                     "b_0012"}


def test_exit_code_bad_channel(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"q_y": "bogus"}')
    code, _ = run(capsys, ["sumrate", "--channel", str(path)])
    assert code == 2


def test_exit_code_bad_direction(capsys):
    code, _ = run(capsys, ["directions", "-d", "0,1,1"])
    assert code == 2
    code, _ = run(capsys, ["directions", "-d", "1,0"])
    assert code == 2


def test_exit_code_resource_cap(capsys):
    code, _ = run(capsys, ["mappings", "--shape", "9", "9", "9"])
    assert code == 4


def test_exit_code_numerical_failure(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise NumericalError("ascent diverged")

    monkeypatch.setattr(cli.sumrate_mod, "marton_sum_rate", boom)
    code, _ = run(capsys, ["sumrate"])
    assert code == 3


def test_exit_code_missing_input_file(capsys):
    code, _ = run(capsys, ["twoletter", "--input", "/no/such/file.json"])
    assert code == 2


def test_floats_are_rounded(capsys):
    _, out = run(capsys, ["claim1"])
    doc = json.loads(out)
    text = json.dumps(doc["value_a"])
    mantissa = text.replace("-", "").replace(".", "").split("e")[0].lstrip("0")
    assert len(mantissa) <= 9
