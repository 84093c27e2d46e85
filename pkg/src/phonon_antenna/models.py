"""Built-in model presets and the JSON model-file schema.

A model file bundles a network, a bath descriptor, a temperature and an
evaluation time:

    {
      "network": {
        "epsilon": [300.0, 300.0, 0.0],
        "J": [[0, 100, 0], [100, 0, 30], [0, 30, 0]],
        "sink_site": 2,
        "sink_rate_per_ps": 1.0,
        "initial_site": 0
      },
      "bath": {"type": "lorentzian", "omega_H": 200.0, "gamma": 60.0, "lambda": 35.0},
      "temperature_K": 4.0,
      "t_eval_ps": 2.0
    }

Site indices are 0-based. J must be symmetric to 1e-9 cm^-1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .network import ExcitonNetwork
from .spectral import AdolphsRengerBath, LorentzianBath, bath_from_dict, bath_to_dict


class ModelFileError(ValueError):
    """Raised when a model file fails schema validation; message carries the field path."""


@dataclass(frozen=True)
class ModelPreset:
    name: str
    network: ExcitonNetwork
    bath: LorentzianBath | AdolphsRengerBath
    temperature: float
    t_eval: float


def three_site_preset() -> ModelPreset:
    """The canonical three-site chain: two near-degenerate coupled sites feeding
    a low-energy site that drains into the sink at 1 ps^-1."""
    j = np.zeros((3, 3))
    j[0, 1] = j[1, 0] = 100.0
    j[1, 2] = j[2, 1] = 30.0
    net = ExcitonNetwork(
        epsilon=np.array([300.0, 300.0, 0.0]),
        J=j,
        sink_site=2,
        sink_rate=1.0,
        initial_site=0,
    )
    bath = LorentzianBath(omega_H=200.0, gamma=60.0, lam=35.0)
    return ModelPreset(name="three-site", network=net, bath=bath, temperature=4.0, t_eval=2.0)


PRESETS = {"three-site": three_site_preset}


def get_preset(name: str) -> ModelPreset:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ModelFileError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None


def _require(data: dict, key: str, path: str):
    if key not in data:
        raise ModelFileError(f"missing field {path}.{key}")
    return data[key]


def model_to_dict(preset: ModelPreset) -> dict:
    net = preset.network
    return {
        "network": {
            "epsilon": [float(x) for x in net.epsilon],
            "J": [[float(x) for x in row] for row in net.J],
            "sink_site": int(net.sink_site),
            "sink_rate_per_ps": float(net.sink_rate),
            "initial_site": int(net.initial_site),
        },
        "bath": bath_to_dict(preset.bath),
        "temperature_K": float(preset.temperature),
        "t_eval_ps": float(preset.t_eval),
    }


def model_from_dict(data: dict, name: str = "model") -> ModelPreset:
    net_data = _require(data, "network", "$")
    epsilon = np.asarray(_require(net_data, "epsilon", "$.network"), dtype=float)
    j = np.asarray(_require(net_data, "J", "$.network"), dtype=float)
    if j.ndim != 2 or j.shape[0] != j.shape[1] or j.shape[0] != epsilon.size:
        raise ModelFileError(
            f"$.network.J must be a {epsilon.size}x{epsilon.size} matrix, got shape {j.shape}"
        )
    asym = np.abs(j - j.T)
    if asym.size and asym.max() > 1e-9:
        a, b = np.unravel_index(np.argmax(asym), asym.shape)
        raise ModelFileError(
            f"$.network.J is not symmetric: J[{a}][{b}]={j[a, b]!r} != J[{b}][{a}]={j[b, a]!r}"
        )
    sink_site = int(_require(net_data, "sink_site", "$.network"))
    sink_rate = float(_require(net_data, "sink_rate_per_ps", "$.network"))
    initial_site = int(_require(net_data, "initial_site", "$.network"))
    try:
        network = ExcitonNetwork(
            epsilon=epsilon,
            J=j,
            sink_site=sink_site,
            sink_rate=sink_rate,
            initial_site=initial_site,
        )
    except ValueError as exc:
        raise ModelFileError(f"$.network: {exc}") from exc
    try:
        bath = bath_from_dict(_require(data, "bath", "$"))
    except ValueError as exc:
        raise ModelFileError(f"$.bath: {exc}") from exc
    temperature = float(_require(data, "temperature_K", "$"))
    if temperature < 0:
        raise ModelFileError("$.temperature_K must be non-negative")
    t_eval = float(_require(data, "t_eval_ps", "$"))
    if t_eval <= 0:
        raise ModelFileError("$.t_eval_ps must be positive")
    return ModelPreset(name=name, network=network, bath=bath, temperature=temperature, t_eval=t_eval)


def load_network_file(path) -> ModelPreset:
    """Load and validate a model file; schema errors name the offending field."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"model file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{p}: invalid JSON: {exc}") from exc
    return model_from_dict(data, name=p.stem)


def save_model_file(preset: ModelPreset, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(preset), indent=2) + "\n")
