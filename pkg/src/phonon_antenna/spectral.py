"""Environmental spectral densities J(omega) and thermal occupation factors.

Two bath families are provided: a quasi-Lorentzian profile peaked at omega_H,
and a composite form with a super-ohmic background plus a Lorentzian
vibrational feature. Both evaluate in cm^-1 for omega in cm^-1 and are pure
functions of immutable bath parameters.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .quantum_core import KB_CM_PER_K

FACTORIAL_9 = 362880.0


@dataclass(frozen=True)
class LorentzianBath:
    """Quasi-Lorentzian bath peaked at omega_H with reorganization energy lam.

    The amplitude is fixed by the reorganization energy: beta =
    lam * gamma / (pi * omega_H^2), which makes integral J(w)/w dw equal lam.
    """

    omega_H: float = 200.0
    gamma: float = 60.0
    lam: float = 35.0

    def __post_init__(self):
        if self.omega_H <= 0 or self.gamma <= 0 or self.lam <= 0:
            raise ValueError("omega_H, gamma and lam must all be positive")

    @property
    def beta(self) -> float:
        return self.lam * self.gamma / (math.pi * self.omega_H**2)

    def j(self, omega):
        return lorentzian_j(self, omega)


@dataclass(frozen=True)
class AdolphsRengerBath:
    """Super-ohmic background plus a Lorentzian vibrational feature at omega_H."""

    lam: float = 35.0
    omega_1: float = 0.5
    omega_2: float = 1.95
    S_H: float = 0.22
    omega_H: float = 180.0
    gamma_H: float = 60.0

    def __post_init__(self):
        for name in ("lam", "omega_1", "omega_2", "S_H", "omega_H", "gamma_H"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def j(self, omega):
        return adolphs_renger_j(self, omega)


@dataclass(frozen=True)
class ThermalBathContext:
    """Temperature context for occupation factors; T = 0 is the exact zero limit."""

    temperature: float

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")


def _check_omega(omega: float) -> float:
    w = float(omega)
    if w < 0:
        raise ValueError(f"omega must be non-negative, got {w}")
    return w


def lorentzian_j(bath: LorentzianBath, omega: float) -> float:
    """J(w) = 2 beta w omega_H^4 / [(w^2 - omega_H^2)^2 + (gamma w)^2]."""
    w = _check_omega(omega)
    num = 2.0 * bath.beta * w * bath.omega_H**4
    den = (w * w - bath.omega_H**2) ** 2 + (bath.gamma * w) ** 2
    return num / den if w > 0 else 0.0


def adolphs_renger_background(bath: AdolphsRengerBath, omega: float) -> float:
    """Super-ohmic background term alone (zero at omega = 0)."""
    w = _check_omega(omega)
    if w == 0.0:
        return 0.0
    norm = FACTORIAL_9 * (1000.0 * bath.omega_1**5 + 4.3 * bath.omega_2**5)
    term = 1000.0 * w**5 * math.exp(-math.sqrt(w / bath.omega_1)) + 4.3 * w**5 * math.exp(
        -math.sqrt(w / bath.omega_2)
    )
    return bath.lam * term / norm


def adolphs_renger_vibration(bath: AdolphsRengerBath, omega: float) -> float:
    """Lorentzian vibrational term (S_H omega_H^2 / pi) * gamma_H / ((w-omega_H)^2 + gamma_H^2)."""
    w = _check_omega(omega)
    return (
        bath.S_H
        * bath.omega_H**2
        / math.pi
        * bath.gamma_H
        / ((w - bath.omega_H) ** 2 + bath.gamma_H**2)
    )


def adolphs_renger_j(bath: AdolphsRengerBath, omega: float) -> float:
    """Composite spectral density: super-ohmic background plus vibrational Lorentzian."""
    return adolphs_renger_background(bath, omega) + adolphs_renger_vibration(bath, omega)


def evaluate_j(bath, omega: float) -> float:
    """Evaluate J(omega) for either bath family."""
    if isinstance(bath, LorentzianBath):
        return lorentzian_j(bath, omega)
    if isinstance(bath, AdolphsRengerBath):
        return adolphs_renger_j(bath, omega)
    raise TypeError(f"unsupported bath type: {type(bath).__name__}")


def bose_occupation(ctx: ThermalBathContext, omega: float) -> float:
    """Bose-Einstein occupation n(w) = 1/(exp(w / kB T) - 1); exactly 0 at T = 0."""
    w = float(omega)
    if w <= 0:
        raise ValueError(f"omega must be positive, got {w}")
    if ctx.temperature == 0.0:
        return 0.0
    x = w / (KB_CM_PER_K * ctx.temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def shifted_bath(bath, new_omega_H: float):
    """Copy of the bath with its peak moved to new_omega_H.

    For the Lorentzian bath the amplitude re-derives from the unchanged lam;
    for the composite bath only the vibrational term moves.
    """
    if new_omega_H <= 0:
        raise ValueError("new_omega_H must be positive")
    if isinstance(bath, (LorentzianBath, AdolphsRengerBath)):
        return dataclasses.replace(bath, omega_H=float(new_omega_H))
    raise TypeError(f"unsupported bath type: {type(bath).__name__}")


def bath_to_dict(bath) -> dict:
    if isinstance(bath, LorentzianBath):
        return {
            "type": "lorentzian",
            "omega_H": bath.omega_H,
            "gamma": bath.gamma,
            "lambda": bath.lam,
        }
    if isinstance(bath, AdolphsRengerBath):
        return {
            "type": "adolphs_renger",
            "lambda": bath.lam,
            "omega_1": bath.omega_1,
            "omega_2": bath.omega_2,
            "S_H": bath.S_H,
            "omega_H": bath.omega_H,
            "gamma_H": bath.gamma_H,
        }
    raise TypeError(f"unsupported bath type: {type(bath).__name__}")


def bath_from_dict(data: dict):
    kind = data.get("type")
    if kind == "lorentzian":
        fields = {"omega_H": 200.0, "gamma": 60.0, "lambda": 35.0}
        fields.update({k: data[k] for k in ("omega_H", "gamma", "lambda") if k in data})
        return LorentzianBath(
            omega_H=float(fields["omega_H"]),
            gamma=float(fields["gamma"]),
            lam=float(fields["lambda"]),
        )
    if kind == "adolphs_renger":
        bath = AdolphsRengerBath()
        overrides = {}
        for key, attr in (
            ("lambda", "lam"),
            ("omega_1", "omega_1"),
            ("omega_2", "omega_2"),
            ("S_H", "S_H"),
            ("omega_H", "omega_H"),
            ("gamma_H", "gamma_H"),
        ):
            if key in data:
                overrides[attr] = float(data[key])
        return dataclasses.replace(bath, **overrides)
    raise ValueError(f"unknown bath type {kind!r} (expected 'lorentzian' or 'adolphs_renger')")
