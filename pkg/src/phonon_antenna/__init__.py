"""Exciton energy transport through structured vibrational environments.

Secular rate-equation kinetics in the exciton basis, a vibronic Lindblad
simulator with explicit damped oscillators, structured spectral densities, and
parameter-sweep optimization of sink-transfer efficiency.
"""

__version__ = "0.1.0"

from .kinetics import PopulationState, TimeTrace, propagate, sink_population_at
from .models import ModelPreset, get_preset, load_network_file, three_site_preset
from .network import (
    ExcitonBasis,
    ExcitonNetwork,
    RateSystem,
    build_exciton_basis,
    redfield_rates,
    sink_rates,
)
from .quantum_core import (
    KB_CM_PER_K,
    PS_RATE_IN_WAVENUMBERS,
    WAVENUMBER_TO_ANGULAR_PS,
    EigenDecomposition,
    eigh,
    kron,
    rk4_step,
)
from .spectral import (
    AdolphsRengerBath,
    LorentzianBath,
    ThermalBathContext,
    adolphs_renger_j,
    bose_occupation,
    lorentzian_j,
    shifted_bath,
)
from .sweep import FomInputs, Landscape, SweepGrid, argmax, f_antenna, f_antenna_map, run_sweep
from .vibronic import (
    VibronicModel,
    VibronicTrace,
    build_vibronic_hamiltonian,
    propagate_vibronic,
    propagate_vibronic_batch,
)

__all__ = [
    "KB_CM_PER_K",
    "PS_RATE_IN_WAVENUMBERS",
    "WAVENUMBER_TO_ANGULAR_PS",
    "AdolphsRengerBath",
    "EigenDecomposition",
    "ExcitonBasis",
    "ExcitonNetwork",
    "FomInputs",
    "Landscape",
    "LorentzianBath",
    "ModelPreset",
    "PopulationState",
    "RateSystem",
    "SweepGrid",
    "ThermalBathContext",
    "TimeTrace",
    "VibronicModel",
    "VibronicTrace",
    "adolphs_renger_j",
    "argmax",
    "bose_occupation",
    "build_exciton_basis",
    "build_vibronic_hamiltonian",
    "eigh",
    "f_antenna",
    "f_antenna_map",
    "get_preset",
    "kron",
    "load_network_file",
    "lorentzian_j",
    "propagate",
    "propagate_vibronic",
    "propagate_vibronic_batch",
    "redfield_rates",
    "rk4_step",
    "run_sweep",
    "shifted_bath",
    "sink_population_at",
    "sink_rates",
    "three_site_preset",
]
