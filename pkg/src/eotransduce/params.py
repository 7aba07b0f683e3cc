"""System parameters, physical constants and derived quantities.

All rates and frequencies are ordinary frequencies in Hz, i.e. the "/2pi"
numbers of a typical device table. Every downstream formula is homogeneous
in the rate unit; only the thermal occupancy converts f -> 2*pi*f.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, fields, replace

from .errors import ValidationError

# CODATA 2018 exact values
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
H_PLANCK = 2 * math.pi * HBAR

PUMP_WARN_THRESHOLD = 1e3


@dataclass(frozen=True)
class ConventionFlags:
    """Unit-convention switches used to reproduce published numbers.

    occupancy_extra_two_pi
        Use h instead of hbar in the Bose-Einstein exponent (one extra 2*pi).
    gamma_m_extra_division
        Divide the mechanical damping rate by 2*pi once more before use.
    """

    occupancy_extra_two_pi: bool = False
    gamma_m_extra_division: bool = False


@dataclass(frozen=True)
class SystemParams:
    g_o: float = 6.6
    g_e: float = 3.8
    gamma_o: float = 1.1e6
    gamma_e: float = 2.3e6
    gamma_o_int: float = 1.0e6
    gamma_e_int: float = 0.2e6
    gamma_m: float = 11.0
    omega_o: float = 282e12
    omega_e: float = 6e9
    omega_m: float = 1.4732e6
    temperature: float = 35e-3
    n_pump_o: float = 1.7e8
    n_pump_e: float = 1.7e8
    conventions: ConventionFlags = field(default_factory=ConventionFlags)

    def __post_init__(self):
        validate(self)

    def with_conventions(self, **flags) -> "SystemParams":
        return replace(self, conventions=replace(self.conventions, **flags))


POSITIVE_FIELDS = (
    "g_o", "g_e", "gamma_o", "gamma_e", "gamma_o_int", "gamma_e_int",
    "gamma_m", "omega_o", "omega_e", "omega_m", "n_pump_o", "n_pump_e",
)


def validate(params: SystemParams) -> None:
    for name in POSITIVE_FIELDS:
        value = getattr(params, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ValidationError(name, f"must be a finite positive number, got {value!r}")
    t = params.temperature
    if not (isinstance(t, (int, float)) and math.isfinite(t) and t >= 0):
        raise ValidationError("temperature", f"must be finite and >= 0, got {t!r}")
    for name in ("n_pump_o", "n_pump_e"):
        if getattr(params, name) < PUMP_WARN_THRESHOLD:
            warnings.warn(
                f"{name}={getattr(params, name):g} is small; the linearized "
                "model assumes a strongly driven cavity",
                RuntimeWarning,
                stacklevel=3,
            )


def reference_profile() -> SystemParams:
    """Default device with the occupancy convention used for the LN figures."""
    return SystemParams(conventions=ConventionFlags(occupancy_extra_two_pi=True))


def thermal_occupancy(freq: float, temperature: float, extra_two_pi: bool = False) -> float:
    """Bose-Einstein occupancy of a mode at ordinary frequency ``freq``.

    Exactly zero at ``temperature == 0``.
    """
    if temperature == 0:
        return 0.0
    quantum = H_PLANCK if extra_two_pi else HBAR
    x = quantum * 2 * math.pi * freq / (K_B * temperature)
    # exp(-x)/(1-exp(-x)) stays finite for optical modes (x ~ 1e5)
    return math.exp(-x) / -math.expm1(-x)


@dataclass(frozen=True)
class DerivedParams:
    """Quantities consumed by the scattering and entanglement code.

    ``gamma_m`` is the effective mechanical damping after any convention
    rescaling; ``Z`` is G_o^2 Gamma_e + G_e^2 Gamma_o + Gamma_o Gamma_e gamma_m.
    """

    G_o: float
    G_e: float
    gamma_o: float
    gamma_e: float
    gamma_o_int: float
    gamma_e_int: float
    gamma_m: float
    n_th_o: float
    n_th_e: float
    n_th_m: float

    @property
    def Gamma_o(self) -> float:
        return self.gamma_o + self.gamma_o_int

    @property
    def Gamma_e(self) -> float:
        return self.gamma_e + self.gamma_e_int

    @property
    def Z(self) -> float:
        Go2, Ge2 = self.G_o**2, self.G_e**2
        return Go2 * self.Gamma_e + Ge2 * self.Gamma_o + self.Gamma_o * self.Gamma_e * self.gamma_m

    def with_input_losses(self, gamma_o: float, gamma_e: float) -> "DerivedParams":
        return replace(self, gamma_o=gamma_o, gamma_e=gamma_e)

    def zero_temperature(self) -> "DerivedParams":
        return replace(self, n_th_o=0.0, n_th_e=0.0, n_th_m=0.0)

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out.update(Gamma_o=self.Gamma_o, Gamma_e=self.Gamma_e, Z=self.Z)
        return out


def derive(params: SystemParams) -> DerivedParams:
    conv = params.conventions
    gamma_m = params.gamma_m / (2 * math.pi) if conv.gamma_m_extra_division else params.gamma_m
    occ = lambda f: thermal_occupancy(f, params.temperature, conv.occupancy_extra_two_pi)
    return DerivedParams(
        G_o=params.g_o * math.sqrt(params.n_pump_o),
        G_e=params.g_e * math.sqrt(params.n_pump_e),
        gamma_o=params.gamma_o,
        gamma_e=params.gamma_e,
        gamma_o_int=params.gamma_o_int,
        gamma_e_int=params.gamma_e_int,
        gamma_m=gamma_m,
        n_th_o=occ(params.omega_o),
        n_th_e=occ(params.omega_e),
        n_th_m=occ(params.omega_m),
    )


def _mean_field_shift(g_j: float, params: SystemParams) -> float:
    if params.omega_m == 0:
        raise ValidationError("omega_m", "mechanical frequency must be nonzero")
    return g_j * (params.g_o * params.n_pump_o + params.g_e * params.n_pump_e) / params.omega_m


def effective_detuning(delta_drive: float, g_j: float, params: SystemParams) -> float:
    """Cavity detuning after the static radiation-pressure shift of the resonator."""
    return delta_drive - _mean_field_shift(g_j, params)


def required_pump_detunings(params: SystemParams) -> tuple[float, float]:
    """Drive detunings that place both effective detunings on the red sideband."""
    return (
        params.omega_m + _mean_field_shift(params.g_o, params),
        params.omega_m + _mean_field_shift(params.g_e, params),
    )


def pump_photon_number(field_strength: float, Gamma: float, Delta: float) -> float:
    if not Gamma > 0:
        raise ValidationError("Gamma", f"decay rate must be positive, got {Gamma!r}")
    return abs(field_strength) ** 2 / (Gamma**2 + Delta**2)
