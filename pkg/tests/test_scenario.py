"""
Tests for scenario parsing, validation and serialization.
"""

import copy

import numpy as np
import pydantic
import pytest
import yaml

from petic.errors import ScenarioParseError, ValidationError
from petic.scenario import (
    ScenarioDocument,
    build_scenario,
    dump_scenario,
    list_bundled_scenarios,
    load_scenario,
    load_scenario_text,
    to_document,
)
from tests.toy import scalar_document


def load(document):
    return load_scenario_text(yaml.safe_dump(document))


def expect_invalid(document, path):
    with pytest.raises(ValidationError) as excinfo:
        load(document)
    assert excinfo.value.field_path == path
    return excinfo.value


class TestParsing:
    """Tests for YAML parsing."""

    def test_load_text(self):
        scenario = load(scalar_document())
        assert scenario.name == "scalar"
        assert scenario.dim == 1
        assert scenario.mode == "no_delay"
        assert scenario.sim.n_runs == 4

    def test_empty_file(self):
        with pytest.raises(ScenarioParseError) as excinfo:
            load_scenario_text("")
        assert excinfo.value.line == 1

    def test_syntax_error_has_position(self):
        with pytest.raises(ScenarioParseError) as excinfo:
            load_scenario_text("name: x\nvirtual: {m: 1\nleader: 3\n")
        assert excinfo.value.line is not None
        assert "line" in str(excinfo.value)

    def test_not_a_mapping(self):
        with pytest.raises(ScenarioParseError):
            load_scenario_text("- 1\n- 2\n")

    def test_unknown_key(self):
        document = scalar_document()
        document["sim"]["bogus"] = 1
        expect_invalid(document, "sim.bogus")

    def test_missing_section(self):
        document = scalar_document()
        del document["trigger"]
        expect_invalid(document, "trigger")


class TestValidation:
    """Tests for numerical preconditions and their paths."""

    def test_psi2_below_one(self):
        error = expect_invalid(scalar_document(psi2=0.5), "trigger.psi2")
        assert "psi2 >= 1" in error.message

    def test_positive_gain_for_no_delay(self):
        error = expect_invalid(scalar_document(gain=0.2), "agents.0.gain")
        assert error.assumption == 6

    def test_delay_not_below_delta(self):
        document = scalar_document(mode="delayed", delay=0.1)
        error = expect_invalid(document, "control.actuation_delay")
        assert error.assumption == 8

    def test_delay_off_grid(self):
        document = scalar_document(mode="delayed", delay=0.055)
        expect_invalid(document, "control.actuation_delay")

    def test_delay_without_delayed_mode(self):
        expect_invalid(scalar_document(delay=0.05), "control.actuation_delay")

    def test_delta_off_grid(self):
        expect_invalid(scalar_document(delta=0.105), "trigger.delta")

    def test_unknown_mode(self):
        expect_invalid(scalar_document(mode="pid"), "control.mode")

    def test_wrong_matrix_shape(self):
        document = scalar_document()
        document["agents"][0]["Phi"] = [[1.0, 0.0]]
        expect_invalid(document, "agents.0.Phi")

    def test_phi_not_embedding(self):
        document = scalar_document()
        document["agents"][0]["Theta"] = [[2.0]]
        error = expect_invalid(document, "agents.0.Phi")
        assert error.assumption == 4

    def test_negative_energy(self):
        expect_invalid(scalar_document(tau0=-1.0), "agents.0.energy.tau0")

    def test_schema_rejects_mode_and_kind(self):
        document = scalar_document(mode="none")
        with pytest.raises(pydantic.ValidationError):
            ScenarioDocument.model_validate(document)
        document = scalar_document()
        document["agents"][0]["nonlinearity"] = {"kind": "cubic"}
        with pytest.raises(pydantic.ValidationError):
            ScenarioDocument.model_validate(document)

    def test_unknown_nonlinearity(self):
        document = scalar_document()
        document["agents"][0]["nonlinearity"] = {"kind": "cubic"}
        expect_invalid(document, "agents.0.nonlinearity.kind")

    def test_nonlinearity_index_out_of_range(self):
        document = scalar_document()
        document["agents"][0]["nonlinearity"] = {
            "kind": "sine_bank",
            "entries": [{"output": 1, "coef": 0.5, "freq": 0.3, "input": 0}],
        }
        expect_invalid(document, "agents.0.nonlinearity.entries.0.output")

    def test_topology_size(self):
        document = scalar_document()
        document["topology"]["h"] = [[1.0, 0.0], [0.0, 1.0]]
        expect_invalid(document, "topology.h")

    def test_topology_without_weights(self):
        document = scalar_document()
        del document["topology"]["h"]
        expect_invalid(document, "topology")

    def test_weight_matrix_choice(self):
        document = scalar_document()
        document["trigger"]["P"] = {"scalar": 1.0, "matrix": [[1.0]]}
        expect_invalid(document, "trigger.P")

    def test_p_not_positive_definite(self):
        document = scalar_document()
        document["trigger"]["P"] = {"matrix": [[-1.0]]}
        expect_invalid(document, "trigger.P")

    def test_error_string_names_path(self):
        with pytest.raises(ValidationError) as excinfo:
            load(scalar_document(psi2=0.5))
        assert "(at trigger.psi2)" in str(excinfo.value)


class TestWeightsAndTopology:
    """Tests for optional sections."""

    def test_base_weights(self):
        document = scalar_document()
        document["topology"] = {"alpha": 1.0, "abar": [[0.0]], "bbar": [2.0]}
        scenario = load(document)
        np.testing.assert_array_equal(scenario.system.H, [[2.0]])

    def test_full_weight_matrix(self):
        document = scalar_document()
        document["trigger"]["P"] = {"matrix": [[3.0]]}
        scenario = load(document)
        np.testing.assert_array_equal(scenario.trigger.P, [[3.0]])

    def test_default_agent_name(self):
        document = scalar_document()
        del document["agents"][0]["name"]
        assert load(document).agents[0].name == "agent1"


class TestSerialization:
    """Tests for writing scenarios back to YAML."""

    def test_dump_and_reload(self):
        scenario = load(scalar_document(mode="delayed", delay=0.05, gain=0.4, tau0=0.2))
        reloaded = load_scenario_text(dump_scenario(scenario))
        assert to_document(reloaded) == to_document(scenario)

    def test_bundled_round_trip(self):
        scenario = load_scenario("uav_ugv_delayed")
        reloaded = load_scenario_text(dump_scenario(scenario))
        assert to_document(reloaded) == to_document(scenario)
        np.testing.assert_array_equal(reloaded.system.H, scenario.system.H)

    def test_document_model(self):
        document = ScenarioDocument.model_validate(copy.deepcopy(scalar_document()))
        assert build_scenario(document).trigger.delta == 0.1


class TestBundledScenarios:
    """Tests for the scenarios shipped with the package."""

    def test_listed(self):
        assert {"uav_ugv_no_delay", "uav_ugv_delayed"} <= set(list_bundled_scenarios())

    @pytest.mark.parametrize("name", ["uav_ugv_no_delay", "uav_ugv_delayed"])
    def test_load_by_name(self, name):
        scenario = load_scenario(name)
        assert scenario.name == name
        assert scenario.dim == 24
        assert [a.name for a in scenario.agents] == ["uav1", "uav2", "ugv3", "ugv4"]

    def test_delayed_grid(self):
        scenario = load_scenario("uav_ugv_delayed")
        assert scenario.actuation_delay == 0.04
        assert scenario.sim.step == 0.002
        assert scenario.sim.n_steps == 2500

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "toy.yaml"
        path.write_text(yaml.safe_dump(scalar_document()), encoding="utf-8")
        assert load_scenario(path).name == "scalar"
        assert load_scenario(str(path)).name == "scalar"

    def test_unknown_source(self):
        with pytest.raises(ScenarioParseError):
            load_scenario("no_such_scenario")
