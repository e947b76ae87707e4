import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from noether_lab import cli
from noether_lab.config import DEFAULT_TOLERANCES, SUITES, load_config, parse_config, parse_config_dict
from noether_lab.errors import BadValue, ParseError, UnknownKey
from noether_lab.integrate import read_csv
from noether_lab.report import ANCHORS, make_record, run

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "schema" / "run_config.schema.json").read_text())
CONFIGS = sorted((ROOT / "configs").glob("*.json"))

SMALL = {
    "model": "constant_force",
    "params": {"m": 1.0, "F": [2.0]},
    "suites": ["consistency", "conservation", "trajectory"],
    "integrator": {"h": 0.01, "n": 200},
    "n_states": 10,
}


def test_minimal_config_fills_defaults():
    cfg = parse_config('{"model": "constant_force", "params": {"m": 1, "F": [2]}, "suites": ["conservation"]}')
    assert cfg.params == {"m": 1.0, "F": [2.0]}
    assert cfg.tolerances == DEFAULT_TOLERANCES
    assert cfg.integrator == {"method": "verlet", "h": 0.01, "n": 10000}
    assert cfg.transformations == ["translation", "boost"]
    assert cfg.seed == 0


def test_unknown_suite_suggests():
    with pytest.raises(UnknownKey) as exc:
        parse_config_dict({"model": "constant_force", "suites": ["qwav"]})
    assert exc.value.suggestion == "qwave"
    assert "qwave" in str(exc.value)


def test_unknown_keys_everywhere():
    with pytest.raises(UnknownKey) as exc:
        parse_config_dict({"model": "free", "tolerances": {"conservaton": 1e-3}})
    assert exc.value.suggestion == "conservation"
    with pytest.raises(UnknownKey):
        parse_config_dict({"model": "free", "sede": 3})
    with pytest.raises(UnknownKey):
        parse_config_dict({"model": "harmonic", "params": {"omega": [1.0]}})
    with pytest.raises(UnknownKey):
        parse_config_dict({"model": "harmonic", "transformations": ["boost"]})
    with pytest.raises(UnknownKey):
        parse_config_dict({"model": "oscilator"})


@pytest.mark.parametrize(
    "bad",
    [
        {"integrator": {"h": -0.1}},
        {"integrator": {"n": 2.5}},
        {"tolerances": {"drift": 0}},
        {"seed": -1},
        {"params": {"m": 0}},
        {"suites": []},
        {"qfock": {"cutoff": 3.5}},
    ],
)
def test_bad_values(bad):
    with pytest.raises(BadValue):
        parse_config_dict({"model": "constant_force", **bad})


def test_malformed_json():
    with pytest.raises(ParseError):
        parse_config("{model: constant_force}")
    with pytest.raises(ParseError):
        parse_config("[1, 2]")


def test_schema_matches_parser():
    props = SCHEMA["properties"]
    assert set(props["tolerances"]["properties"]) == set(DEFAULT_TOLERANCES)
    assert props["suites"]["items"]["enum"] == list(SUITES)


@pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.name)
def test_shipped_configs_valid(path):
    jsonschema.validate(json.loads(path.read_text()), SCHEMA)
    load_config(path)


def test_schema_rejects_what_parser_rejects():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"model": "free", "sede": 1}, SCHEMA)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"model": "harmonic", "params": {"omega": [1]}}, SCHEMA)


def test_record_passed_iff_residual_below_tolerance():
    assert make_record("x", "bracket-table", {}, 1e-12, 1e-10).passed
    assert not make_record("x", "bracket-table", {}, 1e-10, 1e-10).passed
    r = make_record("x", "bracket-table", {}, float("nan"), 1e-10)
    assert r.residual is None and not r.passed
    with pytest.raises(KeyError):
        make_record("x", "nowhere", {}, 0.0, 1.0)


def test_run_small_passes_and_anchors_registered():
    rep = run(parse_config_dict(SMALL))
    assert rep.records and rep.exit_status == 0
    for r in rep.records:
        assert r.paper_anchor in ANCHORS
        assert r.passed == (r.residual is not None and r.residual < r.tolerance)


def test_bogus_transformation_fails():
    cfg = parse_config_dict({**SMALL, "suites": ["consistency"], "transformations": ["scaling"]})
    rep = run(cfg)
    assert rep.n_failed >= 1 and rep.exit_status == 1


def test_determinism(tmp_path):
    a = run(parse_config_dict({**SMALL, "seed": 5}))
    b = run(parse_config_dict({**SMALL, "seed": 5}))
    assert a.ndjson() == b.ndjson()
    c = run(parse_config_dict({**SMALL, "seed": 6}))
    assert a.ndjson() != c.ndjson()
    e1, e2 = a.envelope("T"), b.envelope("T")
    assert json.dumps(e1, sort_keys=True) == json.dumps(e2, sort_keys=True)


def _write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_cli_verify_exit_codes(tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["verify", "--config", _write(tmp_path, SMALL), "--out", str(out)]) == 0
    env = json.loads((out / "report.json").read_text())
    lines = (out / "records.ndjson").read_text().splitlines()
    assert len(lines) == env["summary"]["total"]
    assert env["version"] and env["timestamp"]
    assert all("timestamp" not in json.loads(line) for line in lines)

    bogus = {**SMALL, "suites": ["consistency"], "transformations": ["scaling"]}
    assert cli.main(["verify", "--config", _write(tmp_path, bogus), "--out", str(out)]) == 1
    assert cli.main(["verify", "--config", _write(tmp_path, {"model": "x"})]) == 2
    assert cli.main(["verify", "--config", str(tmp_path / "missing.json")]) == 3
    err = capsys.readouterr().err
    assert "missing.json" in err


def test_cli_model_error_is_config_error(tmp_path):
    cfg = {"model": "lattice_scalar", "params": {"mu": 0.0}, "suites": ["conservation"]}
    assert cli.main(["verify", "--config", _write(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 2


def test_cli_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.main(["verify", "--config", _write(tmp_path, SMALL), "--out", str(blocker / "sub")]) == 3


def test_cli_integrate_csv(tmp_path, capsys):
    path = tmp_path / "t.csv"
    # a three-state trajectory (two steps): header plus three rows
    args = ["integrate", "--model", "constant_force", "--params", '{"F": [2.0]}', "--h", "0.1", "--n", "2", "--q0", "0", "--p0", "0"]
    assert cli.main(args + ["--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "t,q0,p0" and len(lines) == 4
    t, q, p = read_csv(path)
    assert np.allclose(q[:, 0], t**2) and np.allclose(p[:, 0], 2 * t)
    assert cli.main(args) == 0
    assert capsys.readouterr().out.splitlines() == lines
    assert cli.main(args[:-4] + ["--q0", "0", "1", "--p0", "0", "1"]) == 2


def test_cli_table(capsys):
    rc = cli.main(["table", "--model", "constant_force", "--params", '{"m": 1.0, "F": [3.0]}', "--obs", "T0,gamma0,H", "--state", "0.5", "0.2", "1.0"])
    assert rc == 0
    tab = json.loads(capsys.readouterr().out)
    v = np.array(tab["values"])
    T = 0.2 - 1.0 * 3.0
    assert np.allclose(v, [[0, 1, 3], [-1, 0, -T], [-3, T, 0]], atol=1e-12)
    assert cli.main(["table", "--model", "constant_force", "--obs", "T0,nope"]) == 2
    assert cli.main(["table", "--model", "constant_force", "--obs", "T0", "--state", "1", "2"]) == 2


def test_cli_qcheck(tmp_path):
    cfg = {"model": "constant_force", "qwave": {"n": 1024, "p_min": -20.0, "p_max": 20.0}}
    out = tmp_path / "q"
    assert cli.main(["qcheck", "--suite", "qfock", "--config", _write(tmp_path, cfg), "--out", str(out)]) == 0
    ids = [json.loads(line)["check_id"] for line in (out / "records.ndjson").read_text().splitlines()]
    assert ids and all(i.startswith("qfock/") for i in ids)
