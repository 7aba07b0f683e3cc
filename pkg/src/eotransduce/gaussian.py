"""Two-mode Gaussian covariance matrices and logarithmic negativity.

Quadrature order is (x_S, p_S, x_I, p_I) with vacuum variance 1/2. Matrices
are held in ``np.longdouble``: at large squeezing the entanglement lives in
det V, which cancels to ~1e-9 relative in float64.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .params import DerivedParams
from .scattering import coefficient_array, efficiency_closed_form

LD = np.longdouble
SYMPLECTIC_FORM = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class CovarianceMatrix:
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=LD)
        if v.shape != (4, 4):
            raise ValidationError("v", f"expected a 4x4 matrix, got shape {v.shape}")
        scale = max(1.0, float(np.max(np.abs(v))))
        if float(np.max(np.abs(v - v.T))) > 1e-12 * scale:
            raise ValidationError("v", "covariance matrix is not symmetric")
        object.__setattr__(self, "v", v)

    @property
    def A(self) -> np.ndarray:
        return self.v[:2, :2]

    @property
    def B(self) -> np.ndarray:
        return self.v[2:, 2:]

    @property
    def C(self) -> np.ndarray:
        return self.v[:2, 2:]

    def is_physical(self, tol: float = 1e-9) -> bool:
        """Whether V + i Omega / 2 is positive semidefinite.

        Tested on the Hermitian matrix rather than through the symplectic
        spectrum, whose two roots coincide (and lose half their digits) for
        pure states.
        """
        v = self.v.astype(float)
        herm = v + 0.5j * SYMPLECTIC_FORM
        scale = max(1.0, float(np.max(np.abs(v))))
        return bool(np.linalg.eigvalsh(herm)[0] >= -tol * scale)


@dataclass(frozen=True)
class EntanglementReport:
    xi_minus: float
    xi_plus: float
    ln_value: float


def _det2(m) -> LD:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _positive_2x2(m) -> bool:
    return m[0, 0] > 0 and _det2(m) > 0


def _det4(cm: CovarianceMatrix) -> LD:
    # Schur complement on the signal block doubles as the positivity test
    a, b, c = cm.A, cm.B, cm.C
    if not _positive_2x2(a):
        raise NumericalError("covariance matrix is not positive definite")
    det_a = _det2(a)
    a_inv = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=LD) / det_a
    schur = b - c.T @ a_inv @ c
    if not _positive_2x2(schur):
        raise NumericalError("covariance matrix is not positive definite")
    return det_a * _det2(schur)


def _invariant_roots(seesaw: LD, det_v: LD) -> tuple[LD, LD]:
    disc = seesaw * seesaw - 4 * det_v
    if disc < 0:
        if disc < -1e-12 * max(LD(1), seesaw * seesaw):
            raise NumericalError(f"negative discriminant {float(disc):.3e}: invalid covariance matrix")
        disc = LD(0)
    big = (seesaw + np.sqrt(disc)) / 2
    # small root from the product of roots; the difference form cancels
    return np.sqrt(det_v / big), np.sqrt(big)


def symplectic_eigenvalues(cm: CovarianceMatrix) -> tuple[float, float]:
    det_v = _det4(cm)
    lo, hi = _invariant_roots(_det2(cm.A) + _det2(cm.B) + 2 * _det2(cm.C), det_v)
    return float(lo), float(hi)


def _pt_roots(cm: CovarianceMatrix) -> tuple[LD, LD]:
    det_v = _det4(cm)
    return _invariant_roots(_det2(cm.A) + _det2(cm.B) - 2 * _det2(cm.C), det_v)


def pt_symplectic_eigenvalues(cm: CovarianceMatrix) -> tuple[float, float]:
    """Symplectic eigenvalues of the partial transpose, ``(xi_minus, xi_plus)``.

    Roots of xi^4 - (det A + det B - 2 det C) xi^2 + det V = 0.
    """
    lo, hi = _pt_roots(cm)
    return float(lo), float(hi)


SEPARABLE_TOL = 1e-12


def log_negativity(cm: CovarianceMatrix) -> EntanglementReport:
    """max(0, -ln 2 xi_-), with xi_- within SEPARABLE_TOL of 1/2 treated as separable."""
    lo, hi = _pt_roots(cm)
    if lo >= 0.5 - SEPARABLE_TOL:
        return EntanglementReport(float(lo), float(hi), 0.0)
    return EntanglementReport(float(lo), float(hi), float(-np.log(2 * lo)))


def _check_ns(n_s: float) -> None:
    if not (math.isfinite(n_s) and n_s >= 0):
        raise ValidationError("n_s", f"mean photon number must be >= 0, got {n_s!r}")


def tmsv_covariance(n_s: float) -> CovarianceMatrix:
    _check_ns(n_s)
    n = LD(n_s)
    diag = n + LD(0.5)
    m = np.sqrt(n * (n + 1))
    v = np.array(
        [
            [diag, 0, m, 0],
            [0, diag, 0, -m],
            [m, 0, diag, 0],
            [0, -m, 0, diag],
        ],
        dtype=LD,
    )
    return CovarianceMatrix(v)


def ctmg_covariance(dp: DerivedParams, n_s: float, omega: float = 0.0) -> CovarianceMatrix:
    """State after the signal arm of a TMSV passes through the transducer.

    Every bath port is thermal at its own occupancy; only alpha_in carries the
    correlation with the idler.
    """
    _check_ns(n_s)
    c = coefficient_array(dp, float(omega))
    re = np.array(c.real, dtype=LD)
    im = np.array(c.imag, dtype=LD)
    w = re * re + im * im
    n = LD(n_s)
    n_out = (
        w[0] * (n + LD(dp.n_th_o))
        + w[1] * LD(dp.n_th_e)
        + w[2] * LD(dp.n_th_o)
        + w[3] * LD(dp.n_th_e)
        + w[4] * LD(dp.n_th_m)
    )
    amp = np.sqrt(n * (n + 1))
    mr, mi = re[0] * amp, im[0] * amp
    a = n_out + LD(0.5)
    b = n + LD(0.5)
    v = np.array(
        [
            [a, 0, mr, mi],
            [0, a, mi, -mr],
            [mr, mi, b, 0],
            [mi, -mr, 0, b],
        ],
        dtype=LD,
    )
    return CovarianceMatrix(v)


def ln_tmsv_closed_form(n_s: float) -> float:
    """Logarithmic negativity of a TMSV with ``n_s`` photons per mode.

    Written as -ln(2n+1-2sqrt(n(n+1))) via its reciprocal, which is exact
    and free of cancellation at large n.
    """
    _check_ns(n_s)
    return math.log1p(2 * n_s + 2 * math.sqrt(n_s * (n_s + 1)))


def noise_excess(dp: DerivedParams) -> float:
    """Thermal photons added to the microwave output at omega = 0."""
    Z = dp.Z
    bracket = (
        dp.G_o**2 * dp.n_th_o
        - (dp.G_o**2 + dp.Gamma_o * dp.gamma_m) * dp.n_th_e
        + dp.Gamma_o * dp.gamma_m * dp.n_th_m
    )
    return dp.n_th_e + 4 * dp.G_e**2 * dp.Gamma_o * dp.gamma_e / Z**2 * bracket


def d_terms(dp: DerivedParams, n_s: float) -> tuple[float, float, float]:
    """The (d1, d2, d3) invariants of the omega = 0 converted state."""
    r0 = efficiency_closed_form(dp)
    d1 = 2 * r0 * n_s + 1 + 2 * noise_excess(dp)
    d2 = 2 * n_s + 1
    d3 = 2 * math.sqrt(r0 * n_s * (n_s + 1))
    return d1, d2, d3


def xi_minus_analytic(dp: DerivedParams, n_s: float) -> float:
    """Smallest PT symplectic eigenvalue at omega = 0 without building the CM.

    xi_- = [d1 + d2 - sqrt((d1-d2)^2 + 4 d3^2)] / 4, evaluated through
    d1 d2 - d3^2 = 1 + 2X + 2n(1 - R + 2X) so that large n does not cancel.
    """
    _check_ns(n_s)
    d1, d2, d3 = d_terms(dp, n_s)
    x = noise_excess(dp)
    r0 = efficiency_closed_form(dp)
    product = 1 + 2 * x + 2 * n_s * (1 - r0 + 2 * x)
    return product / (d1 + d2 + math.sqrt((d1 - d2) ** 2 + 4 * d3**2))


def ln_ctmg(dp: DerivedParams, n_s: float, omega: float = 0.0) -> float:
    return log_negativity(ctmg_covariance(dp, n_s, omega)).ln_value
