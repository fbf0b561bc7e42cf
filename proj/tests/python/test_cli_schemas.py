"""Run the saext binary and validate its JSON against the published schemas."""

import json
import os
import pathlib
import subprocess

import pytest
from jsonschema import Draft7Validator
from referencing import Registry, Resource

BINARY = os.environ.get("SAEXT_BINARY", "saext")
SCHEMAS = pathlib.Path(os.environ.get("SAEXT_SCHEMA_DIR", pathlib.Path(__file__).parents[2] / "schemas"))


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.json"):
        resources.append((path.name, Resource.from_contents(json.loads(path.read_text()))))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def validator(name):
    return Draft7Validator(json.loads((SCHEMAS / name).read_text()), registry=REGISTRY)


def run(*args):
    proc = subprocess.run([BINARY, *args], capture_output=True, text=True, check=False)
    return proc.returncode, proc.stdout, proc.stderr


CASES = [
    (["deficiency", "--op", "momentum", "--interval", "0,1"], 0, "deficiency.json"),
    (["deficiency", "--op", "hamiltonian", "--interval", "0,inf"], 0, "deficiency.json"),
    (["extend", "--op", "hamiltonian", "--gamma", "0"], 0, "extend.json"),
    (["spectrum", "--op", "well", "--length", "2", "--n-min", "1", "--n-max", "4"], 0, "spectrum.json"),
    (["boundstate", "--alpha", "-1"], 0, "boundstate.json"),
    (["scatter", "--alpha", "-1", "--k", "2"], 0, "scatter.json"),
    (["anomaly", "--alpha", "-1"], 0, "anomaly.json"),
    (["paradox", "--id", "3", "--n", "5"], 0, "paradox.json"),
    (["classical", "--s", "-2"], 0, "classical.json"),
    (["geometry", "--metric", "polar"], 0, "geometry.json"),
    (["sweep", "anomaly", "--sweep", "alpha=-4:-0.25:16"], 0, "sweep.json"),
    (["anomaly", "--alpha", "1"], 1, "error.json"),
]


@pytest.mark.parametrize("args,code,schema", CASES, ids=[" ".join(c[0][:2]) for c in CASES])
def test_payload_matches_schema(args, code, schema):
    rc, out, _ = run(*args)
    assert rc == code
    payload = json.loads(out)
    errors = sorted(validator(schema).iter_errors(payload), key=str)
    assert not errors, [e.message for e in errors]


def test_repeated_runs_agree_apart_from_wall_time():
    def strip(p):
        p["manifest"].pop("wall_time_s", None)
        return p

    a = strip(json.loads(run("anomaly", "--alpha", "-2", "--t", "7.3")[1]))
    b = strip(json.loads(run("anomaly", "--alpha", "-2", "--t", "7.3")[1]))
    assert a == b
    assert abs(a["anomaly"] + 4.0) <= 1e-6


def test_usage_error_lists_subcommands():
    rc, _, err = run("frobnicate")
    assert rc == 2
    for sub in ("deficiency", "extend", "spectrum", "anomaly", "sweep"):
        assert sub in err


def test_csv_output():
    rc, out, _ = run("--csv", "boundstate", "--alpha", "-1")
    assert rc == 0
    assert out.splitlines()[0].startswith("E,alpha")
