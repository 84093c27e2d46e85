"""Vibronic density-matrix simulator: each site strongly coupled to one damped
harmonic oscillator, with an explicit sink level drained from the sink site.

The Hilbert space is (electronic levels: sink + sites) x (truncated Fock space
per site oscillator). The generator

    drho/dt = -i [H, rho] + L_thermal(rho) + L_sink(rho)

is applied through structured slice/einsum operations so the full superoperator
matrix is never materialized; a batch of density matrices (one per parameter
point) propagates through the same fused operations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import ExcitonNetwork
from .quantum_core import KB_CM_PER_K, WAVENUMBER_TO_ANGULAR_PS

DEFAULT_FOCK_DIM = 5
# RK4 on this generator is stability-limited, not accuracy-limited: halving
# the step from this default changes p_sink(10 ps) by ~3e-13 on the standard
# three-site model, far below the 1e-6 convergence requirement.
DEFAULT_DT = 2e-3  # ps
DIMENSION_LIMIT = 4000
RESYMMETRIZE_EVERY = 100
TRACE_TOLERANCE = 1e-6


class DimensionError(ValueError):
    """Raised when the vibronic Hilbert space would be too large."""


class TraceDriftError(RuntimeError):
    """Raised when the propagated density matrix loses normalization."""


@dataclass(frozen=True)
class VibronicModel:
    """Three-site network with one damped oscillator per site.

    The oscillator coupling defaults to half the geometric mean of the
    reorganization energy and the oscillator frequency, 0.5*sqrt(lam*osc_freq);
    pass coupling_g to override. osc_damping is a rate expressed in cm^-1 and
    is converted to ps^-1 inside the propagator.
    """

    network: ExcitonNetwork
    osc_freq: float
    coupling_g: float | None = None
    osc_damping: float = 60.0
    temperature: float = 4.0
    fock_dim: int = DEFAULT_FOCK_DIM
    lam: float = 35.0

    def __post_init__(self):
        if self.network.n_sites != 3:
            raise DimensionError(
                f"the vibronic simulator supports exactly 3 sites (one oscillator each); "
                f"got {self.network.n_sites} sites whose Hilbert space would grow as "
                f"fock_dim**n_sites"
            )
        if self.fock_dim < 2:
            raise ValueError("fock_dim must be at least 2")
        if self.osc_freq <= 0:
            raise ValueError("osc_freq must be positive")
        if self.osc_damping < 0 or self.temperature < 0:
            raise ValueError("osc_damping and temperature must be non-negative")
        if self.coupling_g is not None and self.coupling_g < 0:
            raise ValueError("coupling_g must be non-negative")
        if self.total_dim > DIMENSION_LIMIT:
            raise DimensionError(
                f"total vibronic dimension {self.total_dim} exceeds the supported "
                f"limit {DIMENSION_LIMIT}; reduce fock_dim"
            )

    @property
    def n_modes(self) -> int:
        return self.network.n_sites

    @property
    def elec_dim(self) -> int:
        # index 0 is the sink level, 1..n_sites are the sites
        return self.network.n_sites + 1

    @property
    def osc_dim(self) -> int:
        return self.fock_dim**self.n_modes

    @property
    def total_dim(self) -> int:
        return self.elec_dim * self.osc_dim

    @property
    def g(self) -> float:
        if self.coupling_g is not None:
            return self.coupling_g
        return 0.5 * math.sqrt(self.lam * self.osc_freq)

    def electronic_hamiltonian(self) -> np.ndarray:
        """(1 + n_sites)-dim electronic Hamiltonian with the sink level at zero."""
        h = np.zeros((self.elec_dim, self.elec_dim))
        h[1:, 1:] = self.network.hamiltonian()
        return h


def lowering_operator(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, d)), 1)


def thermal_mode_populations(omega: float, temperature: float, d: int) -> np.ndarray:
    """Fock populations of a thermal oscillator state, normalized within truncation."""
    if temperature <= 0.0:
        pops = np.zeros(d)
        pops[0] = 1.0
        return pops
    x = omega / (KB_CM_PER_K * temperature)
    weights = np.exp(-x * np.arange(d))
    return weights / weights.sum()


def mean_occupation(model: VibronicModel) -> float:
    if model.temperature <= 0.0:
        return 0.0
    x = model.osc_freq / (KB_CM_PER_K * model.temperature)
    return 0.0 if x > 700.0 else 1.0 / math.expm1(x)


def _lift_mode(op: np.ndarray, mode: int, model: VibronicModel) -> np.ndarray:
    """op on one oscillator, identity elsewhere (electronic factor included)."""
    out = np.eye(model.elec_dim)
    for k in range(model.n_modes):
        out = np.kron(out, op if k == mode else np.eye(model.fock_dim))
    return out


def _lift_electronic(op: np.ndarray, model: VibronicModel) -> np.ndarray:
    return np.kron(op, np.eye(model.osc_dim))


def build_vibronic_hamiltonian(model: VibronicModel) -> np.ndarray:
    """Dense H = H_el x I + sum_k osc_freq a_k^dag a_k + g sum_k x_k |site_k><site_k|."""
    a = lowering_operator(model.fock_dim)
    number = a.T @ a
    x = a + a.T
    h = _lift_electronic(model.electronic_hamiltonian(), model)
    for k in range(model.n_modes):
        h = h + model.osc_freq * _lift_mode(number, k, model)
        proj = np.zeros((model.elec_dim, model.elec_dim))
        proj[1 + k, 1 + k] = 1.0
        h = h + model.g * _lift_electronic(proj, model) @ _lift_mode(x, k, model)
    return h


def _dissipator(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    op_dag = op.conj().T
    op2 = op_dag @ op
    return op @ rho @ op_dag - 0.5 * (op2 @ rho + rho @ op2)


def dissipator_thermal(model: VibronicModel, rho: np.ndarray) -> np.ndarray:
    """Damping of every oscillator toward the thermal state, in ps^-1."""
    gamma = model.osc_damping * WAVENUMBER_TO_ANGULAR_PS
    nbar = mean_occupation(model)
    a = lowering_operator(model.fock_dim)
    out = np.zeros_like(rho, dtype=complex)
    for k in range(model.n_modes):
        a_k = _lift_mode(a, k, model)
        out += gamma * (nbar + 1.0) * _dissipator(a_k, rho)
        if nbar > 0.0:
            out += gamma * nbar * _dissipator(a_k.T, rho)
    return out


def dissipator_sink(model: VibronicModel, rho: np.ndarray) -> np.ndarray:
    """Irreversible jump from the sink-attached site to the sink level, in ps^-1."""
    jump = np.zeros((model.elec_dim, model.elec_dim))
    jump[0, 1 + model.network.sink_site] = 1.0
    return model.network.sink_rate * _dissipator(_lift_electronic(jump, model), rho)


class VibronicGenerator:
    """Batched right-hand side of the vibronic master equation.

    States are arrays of shape (batch, ne, d, d, d, ne, d, d, d): axis 1 is the
    electronic row, axes 2-4 the oscillator rows, axis 5 the electronic column,
    axes 6-8 the oscillator columns. All models in a batch share fock_dim and
    the sink site; energies, couplings, oscillator frequency and temperature
    may vary per batch entry.
    """

    def __init__(self, models):
        models = list(models)
        if not models:
            raise ValueError("need at least one model")
        d = models[0].fock_dim
        if any(m.fock_dim != d for m in models):
            raise ValueError("all models in a batch must share fock_dim")
        if any(m.network.sink_site != models[0].network.sink_site for m in models):
            raise ValueError("all models in a batch must share the sink site")
        self.models = models
        self.d = d
        self.ne = models[0].elec_dim
        self.n_modes = models[0].n_modes
        b = len(models)
        self.batch = b
        self.shape = (b, self.ne, d, d, d, self.ne, d, d, d)
        nd = len(self.shape)

        conv = WAVENUMBER_TO_ANGULAR_PS
        self._minus_i_conv = -1j * conv
        self.h_el = np.stack([m.electronic_hamiltonian() for m in models]).astype(complex)
        # left and right electronic factors of -i*conv*(H rho - rho H), shaped
        # for batched matmul against flattened state views
        self._h_left = self._minus_i_conv * self.h_el
        self._h_right = (1j * conv) * np.transpose(self.h_el, (0, 2, 1)).reshape(
            b, 1, self.ne, self.ne
        )
        self._g_flat = np.array([m.g for m in models])
        gamma = np.array([m.osc_damping * conv for m in models])
        nbar = np.array([mean_occupation(m) for m in models])
        self.rate_down = (gamma * (nbar + 1.0)).reshape(b, *([1] * (nd - 1)))
        self.rate_up = (gamma * nbar).reshape(b, *([1] * (nd - 1)))
        self.has_up = bool(np.any(gamma * nbar > 0.0))
        self.sink_rate = np.array([m.network.sink_rate for m in models]).reshape(
            b, *([1] * 6)
        )
        self.sink_elec = 1 + models[0].network.sink_site

        # Oscillator number energies and every diagonal loss rate fused into one
        # elementwise factor: phi[b, I, J] = -i*conv*(w_I - w_J) - (loss_I + loss_J)/2.
        n_axis = np.arange(d, dtype=float)
        total_n = (
            n_axis.reshape(d, 1, 1) + n_axis.reshape(1, d, 1) + n_axis.reshape(1, 1, d)
        )
        osc_freq = np.array([m.osc_freq for m in models])
        w = osc_freq.reshape(b, 1, 1, 1, 1) * total_n.reshape(1, 1, d, d, d)
        w = np.broadcast_to(w, (b, self.ne, d, d, d)).copy()
        loss = (gamma * (nbar + 1.0)).reshape(b, 1, 1, 1, 1) * total_n.reshape(1, 1, d, d, d)
        loss = np.broadcast_to(loss, w.shape).copy()
        if self.has_up:
            # a a^dag of the truncated ladder is diag(1, .., d-1, 0): the top
            # Fock state is annihilated by the truncated raising operator
            aad = np.arange(1.0, d + 1.0)
            aad[d - 1] = 0.0
            total_aad = (
                aad.reshape(d, 1, 1) + aad.reshape(1, d, 1) + aad.reshape(1, 1, d)
            )
            loss += (gamma * nbar).reshape(b, 1, 1, 1, 1) * total_aad.reshape(1, 1, d, d, d)
        loss[:, self.sink_elec] += np.array(
            [m.network.sink_rate for m in models]
        ).reshape(b, 1, 1, 1)
        w_row = w.reshape(b, self.ne, d, d, d, 1, 1, 1, 1)
        w_col = w.reshape(b, 1, 1, 1, 1, self.ne, d, d, d)
        loss_row = loss.reshape(b, self.ne, d, d, d, 1, 1, 1, 1)
        loss_col = loss.reshape(b, 1, 1, 1, 1, self.ne, d, d, d)
        self.phi = (-1j * conv) * (w_row - w_col) - 0.5 * (loss_row + loss_col)

        sq = np.sqrt(np.arange(1.0, d))
        sq_on = {
            axis: sq.reshape(*[d - 1 if ax == axis else 1 for ax in range(nd)])
            for axis in (2, 3, 4, 6, 7, 8)
        }
        # thermal-jump coefficients with the rates folded in, one per mode
        self._down_coeff = [
            self.rate_down * sq_on[2 + k] * sq_on[6 + k] for k in range(self.n_modes)
        ]
        self._up_coeff = [
            self.rate_up * sq_on[2 + k] * sq_on[6 + k] for k in range(self.n_modes)
        ]
        # coupling coefficients -i*conv*g*sqrt(n+1), shaped for the 8-axis views
        # obtained by slicing out one electronic index
        g_scaled = self._minus_i_conv * self._g_flat
        self._x_row = [
            g_scaled.reshape(b, 1, 1, 1, 1, 1, 1, 1)
            * sq.reshape(*[d - 1 if ax == 1 + k else 1 for ax in range(nd - 1)])
            for k in range(self.n_modes)
        ]
        self._x_col = [
            -g_scaled.reshape(b, 1, 1, 1, 1, 1, 1, 1)
            * sq.reshape(*[d - 1 if ax == 5 + k else 1 for ax in range(nd - 1)])
            for k in range(self.n_modes)
        ]

    def initial_state(self) -> np.ndarray:
        """|initial site><initial site| x thermal oscillator states, per batch entry."""
        d = self.d
        rho = np.zeros(self.shape, dtype=complex)
        idx = np.arange(d)
        n1, n2, n3 = np.meshgrid(idx, idx, idx, indexing="ij")
        for item, m in enumerate(self.models):
            pops = thermal_mode_populations(m.osc_freq, m.temperature, d)
            osc_diag = (
                pops.reshape(d, 1, 1) * pops.reshape(1, d, 1) * pops.reshape(1, 1, d)
            )
            el = 1 + m.network.initial_site
            rho[item, el, n1, n2, n3, el, n1, n2, n3] = osc_diag
        return rho

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Full generator in ps^-1 acting on a batched state."""
        nd = rho.ndim
        d = self.d
        b, ne = self.batch, self.ne
        big = ne * d**3
        out = self.phi * rho
        # electronic Hamiltonian commutator: -i*conv*(H rho - rho H), as batched
        # matmuls on flattened views
        left = np.matmul(self._h_left, rho.reshape(b, ne, d**3 * big))
        out += left.reshape(out.shape)
        right = np.matmul(self._h_right, rho.reshape(b, big, ne, d**3))
        out += right.reshape(out.shape)
        # site-oscillator coupling g (a_k + a_k^dag) |site_k><site_k| on each side
        lo = slice(0, d - 1)
        hi = slice(1, d)
        for k in range(self.n_modes):
            el = 1 + k
            dst, src = out[:, el], rho[:, el]
            low = _axis_slice(nd - 1, 1 + k, lo)
            high = _axis_slice(nd - 1, 1 + k, hi)
            coeff = self._x_row[k]
            dst[low] += coeff * src[high]
            dst[high] += coeff * src[low]
            dst = out[:, :, :, :, :, el]
            src = rho[:, :, :, :, :, el]
            low = _axis_slice(nd - 1, 5 + k, lo)
            high = _axis_slice(nd - 1, 5 + k, hi)
            coeff = self._x_col[k]
            dst[low] += coeff * src[high]
            dst[high] += coeff * src[low]
        # thermal jump terms a rho a^dag (and a^dag rho a when thermally occupied)
        for k in range(self.n_modes):
            row_ax, col_ax = 2 + k, 6 + k
            target = tuple(
                lo if i in (row_ax, col_ax) else slice(None) for i in range(nd)
            )
            source = tuple(
                hi if i in (row_ax, col_ax) else slice(None) for i in range(nd)
            )
            out[target] += self._down_coeff[k] * rho[source]
            if self.has_up:
                out[source] += self._up_coeff[k] * rho[target]
        # sink jump: the sink-attached site block feeds the sink block
        out[:, 0, :, :, :, 0] += (
            self.sink_rate * rho[:, self.sink_elec, :, :, :, self.sink_elec]
        )
        return out

    def site_populations(self, rho: np.ndarray) -> np.ndarray:
        """Reduced electronic populations, shape (batch, elec_dim); index 0 = sink."""
        d = self.d
        rho_v = rho.reshape(self.batch, self.ne, d**3, self.ne, d**3)
        diag = np.einsum("bsisi->bsi", rho_v).real
        return diag.sum(axis=2)

    def trace(self, rho: np.ndarray) -> np.ndarray:
        return self.site_populations(rho).sum(axis=1)

    def hermitize(self, rho: np.ndarray) -> np.ndarray:
        swapped = np.transpose(rho, (0, 5, 6, 7, 8, 1, 2, 3, 4))
        return 0.5 * (rho + swapped.conj())


def _axis_slice(ndim: int, axis: int, sl) -> tuple:
    out = [slice(None)] * ndim
    out[axis] = sl
    return tuple(out)


@dataclass(frozen=True)
class VibronicTrace:
    """Recorded electronic populations; column 0 is the sink, then the sites."""

    times: np.ndarray
    populations: np.ndarray  # (n_records, elec_dim) or (batch, n_records, elec_dim)

    @property
    def sink(self) -> np.ndarray:
        return self.populations[..., 0]

    def to_csv(self, stream) -> None:
        if self.populations.ndim != 2:
            raise ValueError("batched traces cannot be serialized to a single CSV")
        n_sites = self.populations.shape[1] - 1
        cols = ["time_ps"] + [f"p_site{k + 1}" for k in range(n_sites)] + ["p_sink"]
        stream.write(",".join(cols) + "\n")
        for t, row in zip(self.times, self.populations):
            values = [t, *row[1:], row[0]]
            stream.write(",".join(repr(float(x)) for x in values) + "\n")


def propagate_vibronic_batch(
    models,
    t_final: float,
    dt: float = DEFAULT_DT,
    record_every: int | None = None,
    resymmetrize_every: int = RESYMMETRIZE_EVERY,
    trace_tol: float = TRACE_TOLERANCE,
) -> VibronicTrace:
    """RK4 propagation of a batch of vibronic models on a shared time grid."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_final < dt:
        raise ValueError("t_final must be at least one step dt")
    gen = VibronicGenerator(models)
    n_steps = int(round(t_final / dt))
    if record_every is None:
        record_every = max(1, int(round(0.01 / dt)))
    rho = gen.initial_state()
    n_records = n_steps // record_every + 1
    times = np.empty(n_records)
    pops = np.empty((gen.batch, n_records, gen.ne))
    times[0] = 0.0
    pops[:, 0, :] = gen.site_populations(rho)
    rec = 1
    apply = gen.apply
    # For a linear time-independent generator the classical RK4 update is the
    # 4th-order Taylor polynomial of exp(dt*L); evaluating it in Horner-like
    # form saves the stage-state temporaries.
    coeffs = (dt, dt * dt / 2.0, dt**3 / 6.0, dt**4 / 24.0)
    for step in range(1, n_steps + 1):
        power = rho
        for c in coeffs:
            power = apply(power)
            rho += c * power
        if step % resymmetrize_every == 0:
            rho = gen.hermitize(rho)
        if step % record_every == 0:
            current = gen.site_populations(rho)
            drift = np.abs(current.sum(axis=1) - 1.0).max()
            if drift > trace_tol:
                raise TraceDriftError(
                    f"trace drifted by {drift:.3e} (> {trace_tol:.1e}) at "
                    f"t={step * dt:.4g} ps; reduce dt"
                )
            times[rec] = step * dt
            pops[:, rec, :] = current
            rec += 1
    return VibronicTrace(times=times[:rec], populations=pops[:, :rec, :])


def propagate_vibronic(
    model: VibronicModel,
    t_final: float,
    dt: float = DEFAULT_DT,
    record_every: int | None = None,
) -> VibronicTrace:
    """Propagate a single model; returns its sink/site population trace."""
    trace = propagate_vibronic_batch([model], t_final, dt=dt, record_every=record_every)
    return VibronicTrace(times=trace.times, populations=trace.populations[0])
