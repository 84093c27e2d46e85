#!/usr/bin/env python3
"""Transfer efficiency versus the spectral-density peak position: the antenna
resonance just above the exciton splitting and the weaker direct channel near
twice that splitting."""
import numpy as np

from phonon_antenna import SweepGrid, argmax, run_sweep, three_site_preset

preset = three_site_preset()
grid = SweepGrid(axis1_name="omega_H_bath", axis1_values=np.arange(50.0, 505.0, 5.0))
landscape = run_sweep(preset, grid, engine="redfield", t_eval=2.0)
peak, _, value, _ = argmax(landscape)
print(f"global peak: omega_H = {peak:.0f} cm^-1, p_sink(2 ps) = {value:.4f}")
for w, p in zip(grid.axis1_values, landscape.values):
    bar = "#" * int(60 * p / value)
    print(f"{w:5.0f}  {p:.4f}  {bar}")
