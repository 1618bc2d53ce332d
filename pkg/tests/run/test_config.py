from __future__ import annotations

import json
import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from chkplab.errors import ConfigError
from chkplab.run.config import SCHEMA_VERSION, ModelConfig, RunConfig, json_path, schema


def test_defaults():
    config = RunConfig.from_dict({})
    assert config == RunConfig()
    assert config.grid.lx == pytest.approx(2 * math.pi)
    assert config.stepper.build().dt0 == 0.01
    assert config.model.build().nonlinearity.name == "classical"


def test_round_trip_and_hash(smooth_config):
    again = RunConfig.from_dict(json.loads(json.dumps(smooth_config.to_dict())))
    assert again == smooth_config
    assert again.config_hash == smooth_config.config_hash

    changed = RunConfig.from_dict({**smooth_config.to_dict(), "diagnostics_every": 2})
    assert changed.config_hash != smooth_config.config_hash


def test_integers_are_numbers():
    config = RunConfig.from_dict(dict(grid=dict(lx=6, ly=4)))
    assert config.grid.lx == 6.0
    assert config.grid.build().lx == 6.0


def test_frozen(smooth_config):
    with pytest.raises(ValidationError):
        smooth_config.grid.nx = 32


def test_hash_ignores_output_dir(smooth_config):
    moved = RunConfig.from_dict({**smooth_config.to_dict(), "output_dir": "elsewhere"})
    assert moved.output_dir == "elsewhere"
    assert moved.config_hash == smooth_config.config_hash


@pytest.mark.parametrize(
    "data, path",
    [
        ({"foo": 1}, "$.foo"),
        ({"grid": {"nz": 4}}, "$.grid.nz"),
        ({"grid": []}, "$.grid"),
        ({"grid": {"nx": 15}}, "$.grid.nx"),
        ({"grid": {"nx": 4}}, "$.grid.nx"),
        ({"grid": {"nx": 16.0}}, "$.grid.nx"),
        ({"grid": {"ly": -1.0}}, "$.grid.ly"),
        ({"stepper": {"cfl": "big"}}, "$.stepper.cfl"),
        ({"stepper": {"cfl": 2.0}}, "$.stepper.cfl"),
        ({"stepper": {"dt0": 1e-12}}, "$.stepper.dt_floor"),
        ({"stepper": {"snapshot_every": 0}}, "$.stepper.snapshot_every"),
        ({"model": {"preset": "sextic"}}, "$.model.preset"),
        ({"model": {"gamma": 0}}, "$.model.gamma"),
        ({"model": {"coefficients": [0, 0]}}, "$.model.coefficients"),
        ({"model": {"coefficients": [0, "3"]}}, "$.model.coefficients[1]"),
        ({"initial_data": {"preset": "smooth_small", "params": {"beta": 1.0}}}, "$.initial_data.params"),
        ({"analysis": {"seeds": [[1.0]]}}, "$.analysis.seeds"),
        ({"analysis": {"seeds": [[1.0, "a"]]}}, "$.analysis.seeds[0][1]"),
        ({"analysis": {"p_interval": [2.0, 1.0]}}, "$.analysis.p_interval"),
        ({"output_dir": 3}, "$.output_dir"),
        ({"schema_version": SCHEMA_VERSION + 1}, "$.schema_version"),
        ([], "$"),
    ],
)
def test_rejections_name_the_path(data, path):
    with pytest.raises(ConfigError) as excinfo:
        RunConfig.from_dict(data)
    assert excinfo.value.path == path
    assert str(excinfo.value).startswith(path)


@pytest.mark.parametrize(
    "loc, path",
    [((), "$"), (("grid", "nx"), "$.grid.nx"), (("analysis", "seeds", 0, 1), "$.analysis.seeds[0][1]")],
)
def test_json_path(loc, path):
    assert json_path(loc) == path


def test_coefficients_override_the_preset():
    params = ModelConfig(preset="classical", coefficients=[0.0, 0.0, 1.0]).build()
    assert params.nonlinearity.g(2.0) == pytest.approx(8.0)


def test_from_file(tmp_path, smooth_config):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(smooth_config.to_dict()))
    assert RunConfig.from_file(path) == smooth_config

    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "missing.json")

    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ConfigError):
        RunConfig.from_file(broken)


def test_schema():
    document = schema()
    assert document["version"] == SCHEMA_VERSION
    assert document["title"] == "chkplab run configuration"
    assert document["additionalProperties"] is False

    stepper = document["$defs"]["StepperSection"]
    assert stepper["additionalProperties"] is False
    cfl = stepper["properties"]["cfl"]
    assert (cfl["type"], cfl["default"], cfl["exclusiveMinimum"], cfl["maximum"]) == ("number", 0.5, 0, 1)
    assert stepper["properties"]["snapshot_every"]["type"] == "integer"

    seeds = document["$defs"]["AnalysisConfig"]["properties"]["seeds"]
    assert seeds["type"] == "array"
    assert seeds["items"] == {"type": "array", "items": {"type": "number"}}
    assert {"type": "null"} in document["properties"]["output_dir"]["anyOf"]
    assert set(document["$defs"]["NonlinearityPreset"]["enum"]) == {"classical", "quadratic_pure", "cubic", "quartic"}
    json.dumps(document)


@pytest.mark.parametrize("name", ["smooth", "breaking", "liouville"])
def test_shipped_presets_validate(name):
    path = Path(__file__).parents[2] / "benchmarks" / "presets" / f"{name}.json"
    config = RunConfig.from_file(path)
    assert config.output_dir == f"runs/{name}"
    config.model.build()
    config.grid.build()
