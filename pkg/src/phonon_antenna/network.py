"""The excitonic system: site Hamiltonian, exciton basis, overlap factors and
secular relaxation rates between exciton populations.

Sites carry an absorbing sink attached to one site at a fixed rate in ps^-1;
in the exciton picture each eigenstate drains at that rate weighted by its
amplitude on the sink site.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import quantum_core, spectral


@dataclass(frozen=True)
class ExcitonNetwork:
    """Site energies (cm^-1), symmetric couplings (cm^-1), sink and initial site.

    Site indices are 0-based. sink_rate is in ps^-1.
    """

    epsilon: np.ndarray
    J: np.ndarray
    sink_site: int
    sink_rate: float
    initial_site: int

    def __post_init__(self):
        eps = np.array(self.epsilon, dtype=float)
        j = np.array(self.J, dtype=float)
        if eps.ndim != 1 or eps.size == 0:
            raise ValueError("epsilon must be a non-empty 1-D array of site energies")
        n = eps.size
        if j.shape != (n, n):
            raise ValueError(f"J must be {n}x{n} to match epsilon, got {j.shape}")
        asym = np.abs(j - j.T)
        if asym.size and asym.max() > 1e-9:
            i, k = np.unravel_index(np.argmax(asym), asym.shape)
            raise ValueError(
                f"J must be symmetric: J[{i}][{k}]={j[i, k]!r} != J[{k}][{i}]={j[k, i]!r}"
            )
        j = 0.5 * (j + j.T)
        if np.abs(np.diag(j)).max(initial=0.0) > 1e-12:
            raise ValueError("J must have a zero diagonal")
        np.fill_diagonal(j, 0.0)
        if not (0 <= self.sink_site < n):
            raise ValueError(f"sink_site {self.sink_site} out of range for {n} sites")
        if not (0 <= self.initial_site < n):
            raise ValueError(f"initial_site {self.initial_site} out of range for {n} sites")
        if self.sink_rate < 0:
            raise ValueError("sink_rate must be non-negative")
        if not (np.all(np.isfinite(eps)) and np.all(np.isfinite(j))):
            raise ValueError("site energies and couplings must be finite")
        eps.setflags(write=False)
        j.setflags(write=False)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "J", j)

    @property
    def n_sites(self) -> int:
        return self.epsilon.size

    def hamiltonian(self) -> np.ndarray:
        """Electronic site-basis Hamiltonian H = diag(epsilon) + J."""
        return np.diag(self.epsilon) + self.J


@dataclass(frozen=True)
class ExcitonBasis:
    """Eigenstates of the site Hamiltonian with overlap factors and sink rates.

    coeffs[i, n] is the amplitude of exciton n on site i; chi[m, n] =
    sum_i |coeffs[i, n] * coeffs[i, m]|^2; sink_exciton_rates are ps^-1.
    """

    energies: np.ndarray
    coeffs: np.ndarray
    chi: np.ndarray
    sink_exciton_rates: np.ndarray

    @property
    def n_excitons(self) -> int:
        return self.energies.size

    def initial_populations(self, site: int) -> np.ndarray:
        """Exciton populations for a selectively excited site: |C^site_n|^2."""
        return np.abs(self.coeffs[site, :]) ** 2


@dataclass(frozen=True)
class RateSystem:
    """Exciton-to-exciton transition rates (cm^-1) plus per-exciton sink rates (ps^-1).

    W[m, n] is the rate from exciton n to exciton m; detailed balance
    W_up/W_down = exp(-|gap| / kB T) holds pairwise by construction.
    """

    W: np.ndarray
    sink_exciton_rates: np.ndarray
    energies: np.ndarray


def build_exciton_basis(net: ExcitonNetwork) -> ExcitonBasis:
    """Diagonalize the network Hamiltonian and derive chi and sink rates."""
    decomp = quantum_core.eigh(net.hamiltonian())
    coeffs = decomp.vectors
    prob = np.abs(coeffs) ** 2
    chi = prob.T @ prob
    sink = net.sink_rate * prob[net.sink_site, :]
    return ExcitonBasis(
        energies=decomp.values,
        coeffs=coeffs,
        chi=chi,
        sink_exciton_rates=sink,
    )


def sink_rates(basis: ExcitonBasis, net: ExcitonNetwork) -> np.ndarray:
    """Per-exciton drain rates |<e_n|sink_site>|^2 * sink_rate; they sum to sink_rate."""
    return net.sink_rate * np.abs(basis.coeffs[net.sink_site, :]) ** 2


# Exciton pairs closer than this (cm^-1) are treated as degenerate: the secular
# rate between them is zero (J(0) = 0 regardless).
DEGENERACY_CUTOFF = 1e-9


def redfield_rates(basis: ExcitonBasis, bath, ctx: spectral.ThermalBathContext) -> RateSystem:
    """Secular population-transfer rates between excitons.

    Uphill (target above source): 2 pi J(gap) chi n(gap); downhill:
    2 pi J(gap) chi (n(gap) + 1). Rates come out in cm^-1 and are converted
    to ps^-1 only inside propagators.
    """
    n = basis.n_excitons
    w = np.zeros((n, n))
    for m in range(n):
        for k in range(n):
            if m == k:
                continue
            gap = basis.energies[m] - basis.energies[k]
            if abs(gap) < DEGENERACY_CUTOFF:
                continue
            j_val = spectral.evaluate_j(bath, abs(gap))
            occ = spectral.bose_occupation(ctx, abs(gap))
            factor = occ if gap > 0 else occ + 1.0
            w[m, k] = 2.0 * np.pi * j_val * basis.chi[m, k] * factor
    return RateSystem(
        W=w,
        sink_exciton_rates=basis.sink_exciton_rates.copy(),
        energies=basis.energies.copy(),
    )
