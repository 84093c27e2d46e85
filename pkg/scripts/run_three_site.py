#!/usr/bin/env python3
"""Quick look at the canonical three-site transfer problem: exciton structure,
secular rates, and the 2 ps sink population."""
import numpy as np

from phonon_antenna import (
    ThermalBathContext,
    build_exciton_basis,
    propagate,
    redfield_rates,
    three_site_preset,
)

preset = three_site_preset()
basis = build_exciton_basis(preset.network)
print("exciton energies (cm^-1):", np.round(basis.energies, 3))
print("sink rates (ps^-1):      ", np.round(basis.sink_exciton_rates, 4))
print("overlap factors chi:\n", np.round(basis.chi, 4))

rates = redfield_rates(basis, preset.bath, ThermalBathContext(preset.temperature))
print("rate matrix W (cm^-1):\n", np.round(rates.W, 3))

trace = propagate(rates, preset.network.initial_site, basis, t_final=preset.t_eval)
print(f"p_sink({preset.t_eval} ps) = {trace.sink[-1]:.6f}")
