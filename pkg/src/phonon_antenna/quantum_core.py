"""Core numerics: unit constants, a dense Hermitian eigensolver, RK4 stepping,
and tensor-product helpers.

Unit conventions used throughout the package: energies, couplings, rates and
spectral densities are stored in wavenumbers (cm^-1); time is in picoseconds.
The single conversion wavenumber -> angular frequency (rad/ps) is applied once,
inside the propagators.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Boltzmann constant in cm^-1 per Kelvin.
KB_CM_PER_K = 0.6950348

# 2*pi*c with c in cm/ps: converts a wavenumber to an angular frequency in rad/ps.
WAVENUMBER_TO_ANGULAR_PS = 0.1883651567

# Reciprocal of the above: a 1 ps^-1 rate expressed as a wavenumber.
PS_RATE_IN_WAVENUMBERS = 1.0 / WAVENUMBER_TO_ANGULAR_PS


def cm_to_angular_ps(energy_cm):
    """Wavenumber (cm^-1) -> angular frequency (rad/ps)."""
    return energy_cm * WAVENUMBER_TO_ANGULAR_PS


def angular_ps_to_cm(omega_ps):
    """Angular frequency (rad/ps) -> wavenumber (cm^-1)."""
    return omega_ps / WAVENUMBER_TO_ANGULAR_PS


class NotHermitianError(ValueError):
    """Raised when a matrix fails the Hermiticity tolerance."""


class ConvergenceError(RuntimeError):
    """Raised when the Jacobi sweep loop fails to converge."""


def max_asymmetry(matrix) -> float:
    """Largest elementwise magnitude of M - M^dagger."""
    m = np.asarray(matrix)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def require_hermitian(matrix, tol: float = 1e-12) -> np.ndarray:
    """Validate M = M^dagger within an absolute elementwise tolerance.

    Returns the exactly symmetrized matrix (M + M^dagger)/2 so downstream
    code never sees roundoff-level asymmetry.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = max_asymmetry(m)
    if asym > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: max |M - M^dagger| = {asym:.3e} > {tol:.1e}"
        )
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending, real) and orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.values) @ v.conj().T


def eigh(matrix, hermitian_tol: float = 1e-12, max_sweeps: int = 100) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Deterministic phase convention: the largest-magnitude component of each
    eigenvector is made real and positive (ties broken by lowest index).
    Convergence: off-diagonal Frobenius norm below 1e-12 * ||M||_F.
    """
    a = require_hermitian(matrix, tol=hermitian_tol)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if n > 1 and norm > 0.0:
        threshold = 1e-12 * norm
        for _ in range(max_sweeps):
            off = np.linalg.norm(a - np.diag(np.diag(a)))
            if off < threshold:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = abs(a[p, q])
                    if r < 1e-300 or r < 1e-18 * norm:
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    phase = a[p, q] / r
                    tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                    sign = 1.0 if tau >= 0.0 else -1.0
                    t = -sign / (abs(tau) + np.hypot(1.0, tau))
                    c = 1.0 / np.hypot(1.0, t)
                    s = t * c
                    # A <- U^dagger A U with the plane rotation
                    # U[p,p]=c, U[p,q]=-s*phase, U[q,p]=s*conj(phase), U[q,q]=c
                    col_p = a[:, p].copy()
                    col_q = a[:, q].copy()
                    a[:, p] = c * col_p + s * np.conj(phase) * col_q
                    a[:, q] = -s * phase * col_p + c * col_q
                    row_p = a[p, :].copy()
                    row_q = a[q, :].copy()
                    a[p, :] = c * row_p + s * phase * row_q
                    a[q, :] = -s * np.conj(phase) * row_p + c * row_q
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    col_p = v[:, p].copy()
                    col_q = v[:, q].copy()
                    v[:, p] = c * col_p + s * np.conj(phase) * col_q
                    v[:, q] = -s * phase * col_p + c * col_q
        else:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, target {threshold:.3e})"
            )
    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for k in range(n):
        col = vectors[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        mag = abs(pivot)
        if mag > 0.0:
            vectors[:, k] = col * (np.conj(pivot) / mag)
    return EigenDecomposition(values=values, vectors=vectors)


def rk4_step(generator, state, dt: float):
    """One classical 4th-order Runge-Kutta step of d(state)/dt = generator(state).

    The generator must already produce the full right-hand side in ps^-1.
    """
    k1 = generator(state)
    k2 = generator(state + (0.5 * dt) * k1)
    k3 = generator(state + (0.5 * dt) * k2)
    k4 = generator(state + dt * k3)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def kron(a, b) -> np.ndarray:
    """Tensor product of two operators (row-major convention)."""
    return np.kron(np.asarray(a), np.asarray(b))
