"""Presets and the JSON model-file schema."""
import json
from pathlib import Path

import numpy as np
import pytest

from phonon_antenna.models import (
    ModelFileError,
    get_preset,
    load_network_file,
    model_from_dict,
    model_to_dict,
    save_model_file,
    three_site_preset,
)
from phonon_antenna.network import build_exciton_basis
from phonon_antenna.spectral import AdolphsRengerBath, LorentzianBath

TEMPLATE = Path(__file__).resolve().parent.parent / "model_files" / "fmo_8site_template.json"


class TestThreeSitePreset:
    def test_parameters(self):
        preset = three_site_preset()
        assert np.array_equal(preset.network.epsilon, [300.0, 300.0, 0.0])
        assert preset.network.J[0, 1] == 100.0
        assert preset.network.J[1, 2] == 30.0
        assert preset.network.J[0, 2] == 0.0
        assert preset.network.sink_site == 2
        assert preset.network.sink_rate == 1.0
        assert preset.network.initial_site == 0

    def test_bath_and_conditions(self):
        preset = three_site_preset()
        assert preset.bath == LorentzianBath(omega_H=200.0, gamma=60.0, lam=35.0)
        assert preset.temperature == 4.0
        assert preset.t_eval == 2.0

    def test_referentially_transparent(self):
        a, b = three_site_preset(), three_site_preset()
        assert np.array_equal(a.network.J, b.network.J)
        assert a.bath == b.bath

    def test_unknown_preset(self):
        with pytest.raises(ModelFileError, match="three-site"):
            get_preset("five-site")


class TestModelFiles:
    def test_round_trip_is_exact(self, tmp_path):
        preset = three_site_preset()
        path = tmp_path / "three_site.json"
        save_model_file(preset, path)
        loaded = load_network_file(path)
        assert np.array_equal(loaded.network.epsilon, preset.network.epsilon)
        assert np.array_equal(loaded.network.J, preset.network.J)
        assert loaded.bath == preset.bath
        assert loaded.temperature == preset.temperature
        assert loaded.t_eval == preset.t_eval

    def test_asymmetric_coupling_rejected_with_field_path(self, tmp_path):
        data = model_to_dict(three_site_preset())
        data["network"]["J"][0][1] = 101.0
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ModelFileError, match=r"J\[0\]\[1\]"):
            load_network_file(path)

    def test_bad_index_rejected(self):
        data = model_to_dict(three_site_preset())
        data["network"]["sink_site"] = 9
        with pytest.raises(ModelFileError, match="sink_site"):
            model_from_dict(data)

    def test_missing_field_named(self):
        data = model_to_dict(three_site_preset())
        del data["temperature_K"]
        with pytest.raises(ModelFileError, match="temperature_K"):
            model_from_dict(data)

    def test_eight_site_file_accepted(self, tmp_path):
        rng = np.random.default_rng(0)
        j = rng.normal(scale=30.0, size=(8, 8))
        j = 0.5 * (j + j.T)
        np.fill_diagonal(j, 0.0)
        data = {
            "network": {
                "epsilon": list(np.linspace(12400.0, 12600.0, 8)),
                "J": [[float(x) for x in row] for row in j],
                "sink_site": 2,
                "sink_rate_per_ps": 1.0,
                "initial_site": 7,
            },
            "bath": {"type": "adolphs_renger"},
            "temperature_K": 77.0,
            "t_eval_ps": 2.0,
        }
        path = tmp_path / "eight.json"
        path.write_text(json.dumps(data))
        loaded = load_network_file(path)
        assert isinstance(loaded.bath, AdolphsRengerBath)
        basis = build_exciton_basis(loaded.network)
        assert basis.n_excitons == 8

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError, match="nope.json"):
            load_network_file("nope.json")

    def test_invalid_json_reported(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ModelFileError, match="invalid JSON"):
            load_network_file(path)


class TestShippedTemplate:
    def test_template_loads_with_fmo_wiring(self):
        preset = load_network_file(TEMPLATE)
        assert preset.network.n_sites == 8
        assert preset.network.sink_site == 2
        assert preset.network.initial_site == 7
        assert preset.temperature == 77.0
        assert isinstance(preset.bath, AdolphsRengerBath)

    def test_template_has_placeholder_energies(self):
        # the template deliberately ships zeros, not invented literature values
        preset = load_network_file(TEMPLATE)
        assert np.all(preset.network.epsilon == 0.0)
        assert np.all(preset.network.J == 0.0)
