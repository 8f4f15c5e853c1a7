import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from plankcover import cli
from plankcover.cover import regular_simplex
from plankcover.geom import contains_point, plank_parameters, Polytope

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def run_cli(tmp_path, command, payload_or_path, *extra):
    if isinstance(payload_or_path, (str, Path)):
        src = str(payload_or_path)
    else:
        src = tmp_path / "in.json"
        src.write_text(json.dumps(payload_or_path))
    out = tmp_path / "out.json"
    code = cli.main([command, str(src), "--out", str(out), *extra])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data


@pytest.mark.parametrize("command", cli.COMMANDS)
def test_sample_instances_run(tmp_path, command):
    code, data = run_cli(tmp_path, command, INSTANCES / f"{command}.json")
    assert code == 0
    assert data["status"] == "ok" and data["command"] == command


def test_bang_output_is_valid(tmp_path):
    inst = json.loads((INSTANCES / "select-bang.json").read_text())
    _, data = run_cli(tmp_path, "select-bang", inst)
    U = np.array(inst["units"])
    p = np.array(data["signs"]) * np.array(inst["widths"]) @ U
    assert np.all(np.abs(U @ p - inst["offsets"]) >= np.array(inst["widths"]) - 1e-9)


def test_witness_point_is_uncovered(tmp_path):
    inst = json.loads((INSTANCES / "witness.json").read_text())
    _, data = run_cli(tmp_path, "witness", inst)
    x = np.array(data["point"])
    assert contains_point(Polytope.from_dict(inst["B"]), x)[0]
    for piece in inst["pieces"]:
        u, lo, hi = plank_parameters(Polytope.from_dict(piece["C"]))
        assert not lo <= u @ x <= hi


def test_refusal_exit_code(tmp_path):
    code, data = run_cli(tmp_path, "simplex-demo", INSTANCES / "simplex-demo-refused.json")
    assert code == 2
    assert data == {"status": "refused", "reason": "bound permits coverings",
                    "detail": data["detail"]}


def test_witness_refusal(tmp_path):
    inst = json.loads((INSTANCES / "witness.json").read_text())
    inst["pieces"] = inst["pieces"] * 3
    code, data = run_cli(tmp_path, "witness", inst)
    assert code == 2 and data["status"] == "refused"


def test_one_sided_class_is_refused(tmp_path):
    inst = {"classes": [[{"u": [1, 0], "v": [0, 1]}]], "anchors": [{"x": [0, 0], "y": [0, 0]}]}
    code, data = run_cli(tmp_path, "select-colourful", inst)
    assert code == 2 and data["reason"] == "PreconditionError"


@pytest.mark.parametrize("payload", [{}, {"units": [[1, 0]], "widths": [1, 2], "offsets": [0]}])
def test_bad_input(tmp_path, payload, capsys):
    code, _ = run_cli(tmp_path, "select-bang", payload)
    assert code == 3
    assert "input error" in capsys.readouterr().err


def test_malformed_json(tmp_path, capsys):
    src = tmp_path / "bad.json"
    src.write_text("{not json")
    assert cli.main(["inradius", str(src)]) == 3
    assert "line 1" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert cli.main(["inradius", str(tmp_path / "nope.json")]) == 3


def test_simplex_default_shifts_depend_on_seed(tmp_path):
    payload = {"d": 2, "lambdas": [0.5, 0.5]}
    _, a = run_cli(tmp_path, "simplex-demo", payload, "--seed", "1")
    _, b = run_cli(tmp_path, "simplex-demo", payload, "--seed", "2")
    assert a["shifts"] != b["shifts"]
    T = regular_simplex(2)
    assert contains_point(T, a["point"], 1e-9)[0]


def test_svg_written(tmp_path):
    svg = tmp_path / "fig.svg"
    code = cli.main(["contact-pairs", str(INSTANCES / "contact-pairs.json"),
                     "--out", str(tmp_path / "o.json"), "--svg", str(svg)])
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<?xml") and 'class="contact"' in text


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "plankcover", "inradius", str(INSTANCES / "inradius.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["relative_width"] == pytest.approx(0.4)
