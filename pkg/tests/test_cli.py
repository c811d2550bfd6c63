import json
import subprocess
import sys

import pytest

from heckekms.cli import main, run
from heckekms.groupoid import StateSpec, gibbs_measure, groupoid_to_json, pair_groupoid, potential_cocycle, state_from_data
from heckekms.schemas import validate_json


def _json_out(capsys, argv):
    code = main(argv + ["--json"])
    return code, capsys.readouterr().out


COMMANDS = [
    ["field", "-d", "5"],
    ["minimal-ideals", "-d", "-15"],
    ["szero", "-d", "-15"],
    ["boundary-algebra", "-d", "-15", "--level", "4"],
    ["zeta", "-d", "1", "--beta", "2", "--bound", "4"],
    ["zeta", "-d", "-15", "--beta", "2", "--bound", "20", "--class", "1"],
    ["hecke", "mul", "-d", "1", "mu:2", "mus:2"],
    ["hecke", "relations", "-d", "1", "--norm-bound", "6"],
    ["hecke", "act", "-d", "1", "--level", "4", "--u", "3", "e:1/4"],
    ["state", "ground", "-d", "1", "--level", "2", "e:1/2"],
    ["state", "kms", "-d", "1", "--level", "2", "--beta", "2", "--bound", "2000", "e:1/2"],
    ["state", "fabulous", "-d", "1", "--level", "8", "e:1/8"],
    ["state", "weil", "-d", "-5", "--level", "12", "--samples", "10"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_reports_validate_against_schema(argv):
    code, data = run(argv)
    assert code == 0, data
    validate_json(data, "report")


def test_minimal_ideals_shape():
    _, data = run(["minimal-ideals", "-d", "-15"])
    assert data["shape"] == [1, 2]


def test_zeta_example():
    _, data = run(["zeta", "-d", "1", "--beta", "2", "--bound", "4"])
    assert data["value"] == "205/144"
    assert data["tail_bound"] > 0


def test_relations_pass():
    _, data = run(["hecke", "relations", "-d", "1", "--norm-bound", "6"])
    assert data["ok"] and not data["failures"]


def test_ground_value():
    _, data = run(["state", "ground", "-d", "1", "--level", "2", "e:1/2"])
    assert data["value"] == "-1"


def test_byte_identical_output(capsys):
    argv = ["state", "weil", "-d", "2", "--level", "8", "--samples", "20", "--seed", "3"]
    _, a = _json_out(capsys, argv)
    _, b = _json_out(capsys, argv)
    assert a == b


def test_cold_and_warm_cache_agree(tmp_path, capsys):
    argv = ["minimal-ideals", "-d", "-23", "--cache-dir", str(tmp_path)]
    _, cold = _json_out(capsys, argv)
    assert len(list(tmp_path.glob("*.json"))) == 1
    _, warm = _json_out(capsys, argv)
    assert cold == warm
    assert not list(tmp_path.glob(".tmp-*"))


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("HECKEKMS_CACHE_DIR", str(tmp_path))
    code, _ = run(["field", "-d", "10"])
    assert code == 0
    assert list(tmp_path.glob("field-*.json"))


@pytest.mark.parametrize(
    "argv, kind",
    [
        (["field", "-d", "12"], "unknown-field"),
        (["state", "ground", "-d", "1", "--level", "2", "e:1/3"], "insufficient-level"),
        (["groupoid-check", "/nonexistent/file.json"], "malformed-groupoid"),
    ],
)
def test_error_reports(argv, kind, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    data = json.loads(out)
    assert code != 0
    validate_json(data, "error")
    assert data["error"]["type"] == kind


def test_groupoid_check(tmp_path):
    G = pair_groupoid(3)
    pot = {x: i + 1 for i, x in enumerate(G.units)}
    c = potential_cocycle(G, pot, multiplicative=True)
    phi = state_from_data(G, StateSpec(gibbs_measure(G, pot, 2, multiplicative=True)))
    data = groupoid_to_json(G, c, phi)
    data["beta"] = "2"
    path = tmp_path / "g.json"
    path.write_text(json.dumps(data))
    code, out = run(["groupoid-check", str(path)])
    assert code == 0
    assert out["report"]["valid"] and out["report"]["kms_violation"] == "0"


def test_groupoid_check_reports_bad_composition(tmp_path):
    data = groupoid_to_json(pair_groupoid(2))
    data["compose"] = data["compose"][1:]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out = run(["groupoid-check", str(path)])
    assert code == 0
    assert not out["report"]["valid"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "heckekms", "zeta", "-d", "1", "--beta", "2", "--bound", "4", "--json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["value"] == "205/144"


def test_human_output(capsys):
    assert main(["field", "-d", "3"]) == 0
    out = capsys.readouterr().out
    assert "h_plus: 2" in out
