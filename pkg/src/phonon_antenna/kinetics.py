"""Propagation of the exciton-population master equation with an absorbing sink.

The linear rate system is integrated with fixed-step RK4. Transition rates are
stored in cm^-1 and converted to ps^-1 here, exactly once; sink rates are
already ps^-1. The initial condition is a selectively excited site expanded in
the exciton basis, which drops initial exciton coherences (the population-only
equation cannot carry them).
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .network import ExcitonBasis, RateSystem
from .quantum_core import WAVENUMBER_TO_ANGULAR_PS, rk4_step

DEFAULT_DT = 1e-3  # ps


class IntegrationError(RuntimeError):
    """Raised when populations leave [0, 1] beyond tolerance during integration."""


@dataclass(frozen=True)
class PopulationState:
    """Exciton populations plus sink population at one instant."""

    exciton_pops: np.ndarray
    sink_pop: float
    time: float

    @property
    def total(self) -> float:
        return float(self.exciton_pops.sum() + self.sink_pop)


@dataclass(frozen=True)
class TimeTrace:
    """Population history on a uniform time grid; sink column is non-decreasing."""

    times: np.ndarray
    populations: np.ndarray  # shape (n_times, n_excitons + 1); last column = sink

    @property
    def n_excitons(self) -> int:
        return self.populations.shape[1] - 1

    @property
    def sink(self) -> np.ndarray:
        return self.populations[:, -1]

    def state_at(self, index: int) -> PopulationState:
        return PopulationState(
            exciton_pops=self.populations[index, :-1].copy(),
            sink_pop=float(self.populations[index, -1]),
            time=float(self.times[index]),
        )

    def to_csv(self, stream=None) -> str:
        """Write `time_ps,p_e1,...,p_eN,p_sink` rows at full double precision."""
        own = stream is None
        out = io.StringIO() if own else stream
        cols = ["time_ps"] + [f"p_e{k + 1}" for k in range(self.n_excitons)] + ["p_sink"]
        out.write(",".join(cols) + "\n")
        for t, row in zip(self.times, self.populations):
            out.write(",".join(repr(float(x)) for x in (t, *row)) + "\n")
        return out.getvalue() if own else ""


def rate_generator_matrix(rates: RateSystem) -> np.ndarray:
    """Full linear generator (ps^-1) on (exciton populations..., sink).

    Column n carries gains W[m, n] to other excitons, the total loss on the
    diagonal, and the sink gain; the sink column is zero (absorbing).
    """
    w_ps = rates.W * WAVENUMBER_TO_ANGULAR_PS
    n = w_ps.shape[0]
    gen = np.zeros((n + 1, n + 1))
    gen[:n, :n] = w_ps
    gen[np.arange(n), np.arange(n)] = -w_ps.sum(axis=0) - rates.sink_exciton_rates
    gen[n, :n] = rates.sink_exciton_rates
    return gen


def propagate(
    rates: RateSystem,
    initial_site: int,
    basis: ExcitonBasis,
    t_final: float,
    dt: float = DEFAULT_DT,
) -> TimeTrace:
    """Integrate the population equations from a selectively excited site.

    Records every step; raises IntegrationError if any population drops below
    -1e-9 (advice: reduce dt).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_final < dt:
        raise ValueError("t_final must be at least one step dt")
    gen = rate_generator_matrix(rates)
    n = rates.W.shape[0]
    state = np.zeros(n + 1)
    state[:n] = basis.initial_populations(initial_site)
    n_steps = int(round(t_final / dt))
    times = np.empty(n_steps + 1)
    pops = np.empty((n_steps + 1, n + 1))
    times[0] = 0.0
    pops[0] = state
    apply = gen.dot
    for step in range(1, n_steps + 1):
        state = rk4_step(apply, state, dt)
        if state.min() < -1e-9:
            raise IntegrationError(
                f"population {state.min():.3e} < -1e-9 at t={step * dt:.6g} ps; "
                "the rate system is too stiff for this step size, reduce dt"
            )
        times[step] = step * dt
        pops[step] = state
    return TimeTrace(times=times, populations=pops)


def sink_population_at(
    rates: RateSystem,
    initial_site: int,
    basis: ExcitonBasis,
    t: float,
    dt: float = DEFAULT_DT,
) -> float:
    """Sink population after propagating to time t (0 at t = 0)."""
    if t == 0.0:
        return 0.0
    trace = propagate(rates, initial_site, basis, t_final=t, dt=dt)
    return float(trace.sink[-1])
