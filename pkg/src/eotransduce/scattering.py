"""Frequency-domain input-output map of the red-detuned transducer.

The microwave output is

    beta_out = c1 alpha_in + c2 beta_in + c3 alpha_loss + c4 beta_loss + c5 c_loss

with ``omega`` the sideband offset (Hz) from cavity resonance. Time
derivatives map to ``+i omega``, so each cavity factor reads ``i omega + Gamma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .params import DerivedParams, SystemParams, derive


@dataclass(frozen=True)
class ScatteringSolution:
    omega: float
    c1: complex
    c2: complex
    c3: complex
    c4: complex
    c5: complex

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5])

    @property
    def efficiency(self) -> float:
        return abs(self.c1) ** 2

    @property
    def total_weight(self) -> float:
        """Sum of |c_i|^2; unity for a passive map."""
        return float(np.sum(np.abs(self.coefficients) ** 2))


def _qle_matrix(dp: DerivedParams, omega: float) -> np.ndarray:
    iw = 1j * omega
    return np.array(
        [
            [iw + dp.Gamma_o, 0.0, 1j * dp.G_o],
            [0.0, iw + dp.Gamma_e, 1j * dp.G_e],
            [1j * dp.G_o, 1j * dp.G_e, iw + dp.gamma_m],
        ],
        dtype=complex,
    )


def solve_qle_oracle(dp: DerivedParams, omega: float = 0.0) -> ScatteringSolution:
    """Solve the linear Langevin equations directly, one unit drive per input port.

    Uses no closed-form coefficient expressions; serves as the reference for
    :func:`coefficients`.
    """
    mat = _qle_matrix(dp, omega)
    # columns: alpha_in, beta_in, alpha_loss, beta_loss, c_loss
    drive = np.zeros((3, 5), dtype=complex)
    drive[0, 0] = math.sqrt(2 * dp.gamma_o)
    drive[1, 1] = math.sqrt(2 * dp.gamma_e)
    drive[0, 2] = math.sqrt(2 * dp.gamma_o_int)
    drive[1, 3] = math.sqrt(2 * dp.gamma_e_int)
    drive[2, 4] = math.sqrt(2 * dp.gamma_m)
    try:
        modes = np.linalg.solve(mat, drive)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"singular Langevin system at omega={omega!r} (cond={np.linalg.cond(mat):.3e})"
        ) from exc
    out = math.sqrt(2 * dp.gamma_e) * modes[1]
    out[1] -= 1.0
    return ScatteringSolution(float(omega), *(complex(c) for c in out))


def _denominators(dp: DerivedParams, omega):
    iw = 1j * np.asarray(omega, dtype=float)
    mech = dp.G_o**2 + (iw + dp.gamma_m) * (iw + dp.Gamma_o)
    d = iw + dp.Gamma_e + dp.G_e**2 * (iw + dp.Gamma_o) / mech
    return iw, mech, d


def coefficient_array(dp: DerivedParams, omega) -> np.ndarray:
    """Closed-form c1..c5 stacked along axis 0; broadcasts over ``omega``."""
    iw, mech, d = _denominators(dp, omega)
    dm = d * mech
    gg = dp.G_o * dp.G_e
    return np.stack(
        [
            -2 * gg * math.sqrt(dp.gamma_o * dp.gamma_e) / dm,
            2 * dp.gamma_e / d - 1,
            -2 * gg * math.sqrt(dp.gamma_o_int * dp.gamma_e) / dm,
            2 * math.sqrt(dp.gamma_e * dp.gamma_e_int) / d,
            -2j * dp.G_e * math.sqrt(dp.gamma_e * dp.gamma_m) * (iw + dp.Gamma_o) / dm,
        ]
    )


def coefficients(dp: DerivedParams, omega: float = 0.0) -> ScatteringSolution:
    c = coefficient_array(dp, float(omega))
    return ScatteringSolution(float(omega), *(complex(x) for x in c))


def efficiency(dp: DerivedParams, omega=0.0):
    """R(omega) = |c1|^2, vectorized over omega."""
    return np.abs(coefficient_array(dp, omega)[0]) ** 2


def efficiency_closed_form(dp: DerivedParams) -> float:
    """R(0) = 4 G_o^2 G_e^2 gamma_o gamma_e / Z^2."""
    return 4 * dp.G_o**2 * dp.G_e**2 * dp.gamma_o * dp.gamma_e / dp.Z**2


def output_occupancy(dp: DerivedParams, n_s: float, omega: float = 0.0) -> float:
    """Mean photon number of the microwave output for signal occupancy ``n_s``."""
    w = np.abs(coefficient_array(dp, float(omega))) ** 2
    return float(
        w[0] * (n_s + dp.n_th_o)
        + w[1] * dp.n_th_e
        + w[2] * dp.n_th_o
        + w[3] * dp.n_th_e
        + w[4] * dp.n_th_m
    )


def amplitude_ratio(dp: DerivedParams, n_s: float, omega: float = 0.0) -> float:
    """Output/input photon-number ratio, the efficiency as measured in experiments.

    Exceeds R(omega) whenever thermal noise is present.
    """
    if not n_s > 0:
        raise ValidationError("n_s", f"ratio undefined for n_s={n_s!r}")
    return output_occupancy(dp, n_s, omega) / n_s


def optimal_input_loss_rates(params: SystemParams | DerivedParams) -> tuple[float, float]:
    """Input loss rates (gamma_o, gamma_e) maximizing R(0) with all else fixed."""
    dp = derive(params) if isinstance(params, SystemParams) else params
    go_int, ge_int, gm = dp.gamma_o_int, dp.gamma_e_int, dp.gamma_m
    opt = dp.G_o**2 + go_int * gm
    mw = dp.G_e**2 + ge_int * gm
    shared = dp.G_e**2 * go_int + opt * ge_int
    return (
        math.sqrt(opt * shared / (mw * gm)),
        math.sqrt(mw * shared / (opt * gm)),
    )
