"""Parameter sweeps: transfer-efficiency landscapes over Hamiltonian or bath
parameters, and the ladder-matching figure of merit.

Supported axes: J12, epsilon2, omega_H_bath, omega_H_osc, temperature. Grid
points are independent pure computations evaluated in a deterministic order;
failed points are recorded as NaN with a diagnostic, never silent zeros.
"""
from __future__ import annotations

import dataclasses
import io
from dataclasses import dataclass

import numpy as np

from . import kinetics, network, spectral, vibronic
from .models import ModelPreset

AXIS_NAMES = ("J12", "epsilon2", "omega_H_bath", "omega_H_osc", "temperature")


@dataclass(frozen=True)
class SweepGrid:
    """One or two named parameter axes with strictly ascending values."""

    axis1_name: str
    axis1_values: np.ndarray
    axis2_name: str | None = None
    axis2_values: np.ndarray | None = None

    def __post_init__(self):
        for name in (self.axis1_name, self.axis2_name):
            if name is not None and name not in AXIS_NAMES:
                raise ValueError(f"unknown axis {name!r}; expected one of {AXIS_NAMES}")
        v1 = np.asarray(self.axis1_values, dtype=float)
        if v1.ndim != 1 or v1.size == 0 or not np.all(np.isfinite(v1)):
            raise ValueError("axis1_values must be a non-empty finite 1-D array")
        if v1.size > 1 and not np.all(np.diff(v1) > 0):
            raise ValueError("axis1_values must be strictly ascending")
        object.__setattr__(self, "axis1_values", v1)
        if (self.axis2_name is None) != (self.axis2_values is None):
            raise ValueError("axis2_name and axis2_values must be given together")
        if self.axis2_values is not None:
            v2 = np.asarray(self.axis2_values, dtype=float)
            if v2.ndim != 1 or v2.size == 0 or not np.all(np.isfinite(v2)):
                raise ValueError("axis2_values must be a non-empty finite 1-D array")
            if v2.size > 1 and not np.all(np.diff(v2) > 0):
                raise ValueError("axis2_values must be strictly ascending")
            object.__setattr__(self, "axis2_values", v2)

    @property
    def is_2d(self) -> bool:
        return self.axis2_name is not None

    @property
    def shape(self) -> tuple:
        if self.is_2d:
            return (self.axis1_values.size, self.axis2_values.size)
        return (self.axis1_values.size,)


@dataclass(frozen=True)
class Landscape:
    """Sweep result: values[i] or values[i, j] indexed by the grid axes."""

    grid: SweepGrid
    values: np.ndarray
    t_eval: float
    engine: str
    failures: tuple = ()

    def to_csv(self, stream=None) -> str:
        own = stream is None
        out = io.StringIO() if own else stream
        axis2 = self.grid.axis2_name if self.grid.is_2d else ""
        out.write(
            f"# axis1={self.grid.axis1_name}, axis2={axis2}, "
            f"t_eval_ps={self.t_eval!r}, engine={self.engine}\n"
        )
        if self.grid.is_2d:
            header = [""] + [repr(float(v)) for v in self.grid.axis2_values]
            out.write(",".join(header) + "\n")
            for v1, row in zip(self.grid.axis1_values, self.values):
                out.write(",".join([repr(float(v1))] + [repr(float(x)) for x in row]) + "\n")
        else:
            out.write(f"{self.grid.axis1_name},value\n")
            for v1, x in zip(self.grid.axis1_values, self.values):
                out.write(f"{float(v1)!r},{float(x)!r}\n")
        return out.getvalue() if own else ""


def _apply_axis(preset: ModelPreset, name: str, value: float) -> ModelPreset:
    """New preset with one named parameter replaced."""
    if name == "J12":
        j = np.array(preset.network.J)
        j[0, 1] = j[1, 0] = value
        net = dataclasses.replace(preset.network, J=j)
        return dataclasses.replace(preset, network=net)
    if name == "epsilon2":
        eps = np.array(preset.network.epsilon)
        eps[1] = value
        net = dataclasses.replace(preset.network, epsilon=eps)
        return dataclasses.replace(preset, network=net)
    if name == "omega_H_bath":
        return dataclasses.replace(preset, bath=spectral.shifted_bath(preset.bath, value))
    if name == "temperature":
        return dataclasses.replace(preset, temperature=value)
    if name == "omega_H_osc":
        # handled by the lindblad engine when building vibronic models
        return preset
    raise ValueError(f"unknown axis {name!r}")


def _grid_points(grid: SweepGrid):
    if grid.is_2d:
        for i, v1 in enumerate(grid.axis1_values):
            for j, v2 in enumerate(grid.axis2_values):
                yield (i, j), ((grid.axis1_name, float(v1)), (grid.axis2_name, float(v2)))
    else:
        for i, v1 in enumerate(grid.axis1_values):
            yield (i,), ((grid.axis1_name, float(v1)),)


def _redfield_point(preset: ModelPreset, t_eval: float, dt: float) -> float:
    basis = network.build_exciton_basis(preset.network)
    rates = network.redfield_rates(
        basis, preset.bath, spectral.ThermalBathContext(preset.temperature)
    )
    return kinetics.sink_population_at(
        rates, preset.network.initial_site, basis, t_eval, dt=dt
    )


def run_sweep(
    base_model: ModelPreset,
    grid: SweepGrid,
    engine: str = "redfield",
    t_eval: float | None = None,
    dt: float | None = None,
    fock_dim: int | None = None,
    osc_freq: float = 200.0,
    jobs: int | None = None,
) -> Landscape:
    """Evaluate p_sink(t_eval) at every grid point.

    engine='redfield' propagates the secular population equations per point;
    engine='lindblad' batch-propagates the vibronic model (the oscillator
    coupling re-derives from the bath reorganization energy at each oscillator
    frequency). jobs caps the vibronic batch width; points are independent, so
    it only affects memory and speed.
    """
    if engine not in ("redfield", "lindblad"):
        raise ValueError(f"unknown engine {engine!r}")
    t = preset_t_eval(base_model, t_eval)
    values = np.full(grid.shape, np.nan)
    failures = []
    if engine == "redfield":
        step = kinetics.DEFAULT_DT if dt is None else dt
        for index, assignments in _grid_points(grid):
            point = base_model
            for name, value in assignments:
                if name == "omega_H_osc":
                    raise ValueError("omega_H_osc is a lindblad-engine axis")
                point = _apply_axis(point, name, value)
            try:
                values[index] = _redfield_point(point, t, step)
            except Exception as exc:  # recorded, not silently zeroed
                failures.append((index, f"{type(exc).__name__}: {exc}"))
        return Landscape(grid=grid, values=values, t_eval=t, engine="redfield",
                         failures=tuple(failures))

    step = vibronic.DEFAULT_DT if dt is None else dt
    d = vibronic.DEFAULT_FOCK_DIM if fock_dim is None else fock_dim
    indices = []
    vib_models = []
    for index, assignments in _grid_points(grid):
        point = base_model
        freq = osc_freq
        try:
            for name, value in assignments:
                if name == "omega_H_osc":
                    freq = value
                else:
                    point = _apply_axis(point, name, value)
            model = vibronic.VibronicModel(
                network=point.network,
                osc_freq=freq,
                temperature=point.temperature,
                fock_dim=d,
                lam=getattr(point.bath, "lam", 35.0),
            )
        except Exception as exc:
            failures.append((index, f"{type(exc).__name__}: {exc}"))
            continue
        vib_models.append(model)
        indices.append(index)
    chunk = len(vib_models) if not jobs else max(1, int(jobs))
    for start in range(0, len(vib_models), chunk):
        batch = vib_models[start : start + chunk]
        try:
            trace = vibronic.propagate_vibronic_batch(batch, t_final=t, dt=step)
            finals = trace.sink[:, -1]
            for offset, index in enumerate(indices[start : start + chunk]):
                values[index] = finals[offset]
        except Exception as exc:
            for index in indices[start : start + chunk]:
                failures.append((index, f"{type(exc).__name__}: {exc}"))
    return Landscape(grid=grid, values=values, t_eval=t, engine="lindblad",
                     failures=tuple(failures))


def preset_t_eval(base_model: ModelPreset, t_eval: float | None) -> float:
    t = base_model.t_eval if t_eval is None else float(t_eval)
    if t <= 0:
        raise ValueError("t_eval must be positive")
    return t


def argmax(landscape: Landscape):
    """Grid maximizer: (axis1_value, axis2_value_or_None, value, ties).

    Ties within exact float equality are reported together; the returned point
    is the tie with the smallest axis values.
    """
    values = landscape.values
    if np.all(np.isnan(values)):
        raise ValueError("landscape has no evaluated points")
    best = np.nanmax(values)
    tie_indices = np.argwhere(values == best)
    ties = []
    for idx in tie_indices:
        v1 = float(landscape.grid.axis1_values[idx[0]])
        v2 = float(landscape.grid.axis2_values[idx[1]]) if landscape.grid.is_2d else None
        ties.append((v1, v2))
    ties.sort(key=lambda p: (p[0], p[1] if p[1] is not None else 0.0))
    v1, v2 = ties[0]
    return v1, v2, float(best), tuple(ties)


# --- figure of merit for ladder matching ---------------------------------


@dataclass(frozen=True)
class FomInputs:
    """Three exciton energies (descending: E_plus >= E_minus >= E_G) and the
    target vibrational frequency."""

    E_plus: float
    E_minus: float
    E_G: float
    omega_H: float

    def __post_init__(self):
        if not (self.E_plus >= self.E_minus >= self.E_G):
            raise ValueError("energies must be ordered E_plus >= E_minus >= E_G")


def f_antenna(inp: FomInputs) -> float:
    """Ladder-matching score, <= 0 with 0 iff both gaps equal omega_H or the
    outer gap equals 2*omega_H."""
    upper = abs(inp.E_plus - inp.E_minus)
    lower = abs(inp.E_minus - inp.E_G)
    outer = abs(inp.E_plus - inp.E_G)
    sequential = -abs(inp.omega_H - upper) - abs(inp.omega_H - lower)
    direct = -0.5 * abs(2.0 * inp.omega_H - outer)
    return max(sequential, direct)


def fom_inputs_for_network(net: network.ExcitonNetwork, omega_H: float) -> FomInputs:
    """Pick the exciton triple entering the figure of merit.

    For three-site networks the three excitons are used directly. For larger
    networks the excitons with the largest weight on sites 1, 2 and 3 (indices
    0, 1, 2) are selected, greedily and without repetition, then ordered.
    """
    basis = network.build_exciton_basis(net)
    if basis.n_excitons < 3:
        raise ValueError("figure of merit needs at least three excitons")
    if basis.n_excitons == 3:
        chosen = [2, 1, 0]
    else:
        weights = np.abs(basis.coeffs) ** 2
        chosen = []
        for site in (0, 1, 2):
            order = np.argsort(weights[site, :])[::-1]
            pick = next(int(n) for n in order if int(n) not in chosen)
            chosen.append(pick)
    energies = sorted((float(basis.energies[n]) for n in chosen), reverse=True)
    return FomInputs(
        E_plus=energies[0], E_minus=energies[1], E_G=energies[2], omega_H=omega_H
    )


def f_antenna_map(base_model: ModelPreset, grid: SweepGrid, omega_H: float) -> Landscape:
    """Figure-of-merit value at every grid point of Hamiltonian parameters."""
    values = np.full(grid.shape, np.nan)
    failures = []
    for index, assignments in _grid_points(grid):
        point = base_model
        for name, value in assignments:
            if name in ("omega_H_bath", "omega_H_osc", "temperature"):
                raise ValueError(f"{name} does not alter the exciton ladder")
            point = _apply_axis(point, name, value)
        try:
            values[index] = f_antenna(fom_inputs_for_network(point.network, omega_H))
        except Exception as exc:
            failures.append((index, f"{type(exc).__name__}: {exc}"))
    return Landscape(grid=grid, values=values, t_eval=0.0, engine="fom",
                     failures=tuple(failures))
