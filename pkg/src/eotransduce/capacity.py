"""Entanglement-surviving capacity: the large-N_S limit of the converted LN.

At omega = 0, 2 xi_- = A(N) - sqrt(B(N)) with A affine and B quadratic in the
signal photon number N. Writing A = k1 + k2 N and B = k3 + k4 N + k5 N^2 the
limit is k1 - k4 / (2 k2), which requires k2^2 = k5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NumericalError
from .gaussian import d_terms
from .params import DerivedParams
from .scattering import efficiency_closed_form


@dataclass(frozen=True)
class CapacityCoefficients:
    k1: float
    k2: float
    k3: float
    k4: float
    k5: float
    p: float
    p_noiseless: float


def _k_values(dp: DerivedParams) -> tuple[float, float, float, float, float]:
    # d1 + d2 and d1 - d2 are affine in N and d3^2 is quadratic with no
    # constant term, so their coefficients follow from N = 0, 1, 2. B is
    # assembled from these pieces rather than differenced directly, which
    # would cancel its X^2 constant against the O(1) curvature.
    (p0, q0, _), (p1, q1, s1), (_, _, s2) = (
        (d1 + d2, d1 - d2, d3 * d3) for d1, d2, d3 in (d_terms(dp, float(n)) for n in (0, 1, 2))
    )
    sq2 = (s2 - 2 * s1) / 2
    sq1 = s1 - sq2
    slope = q1 - q0
    k1 = p0 / 2
    k2 = (p1 - p0) / 2
    k3 = q0 * q0 / 4
    k4 = (2 * q0 * slope + 4 * sq1) / 4
    k5 = (slope * slope + 4 * sq2) / 4
    return k1, k2, k3, k4, k5


def _neg_log(arg: float, what: str) -> float:
    if arg <= 0:
        if arg == 0:
            return math.inf
        raise NumericalError(f"{what}: logarithm argument {arg:.6g} is not positive")
    return max(0.0, -math.log(arg))


def capacity(dp: DerivedParams) -> float:
    """P = max(0, -ln(k1 - k4 / (2 k2)))."""
    k1, k2, _, k4, k5 = _k_values(dp)
    if not math.isclose(k2 * k2, k5, rel_tol=1e-9):
        raise NumericalError(f"capacity limit diverges: k2^2={k2 * k2:.12g} != k5={k5:.12g}")
    return _neg_log(k1 - k4 / (2 * k2), "capacity")


def capacity_noiseless(dp: DerivedParams) -> float:
    """Zero-temperature capacity, -ln(1 - 2R/(1+R)); infinite at R(0) = 1."""
    r0 = efficiency_closed_form(dp)
    return _neg_log(1 - 2 * r0 / (1 + r0), "noiseless capacity")


def extract_k_coefficients(dp: DerivedParams) -> CapacityCoefficients:
    """Exact k1..k5 from evaluations of the affine/quadratic forms at N = 0, 1, 2."""
    k1, k2, k3, k4, k5 = _k_values(dp)
    return CapacityCoefficients(k1, k2, k3, k4, k5, capacity(dp), capacity_noiseless(dp))


def _printed_l_terms(dp: DerivedParams) -> tuple[float, float, float, float, float]:
    # transcribed verbatim, including the dimensionally inconsistent terms
    Ge, Go_ = dp.G_e, dp.Gamma_o
    Ge_ = dp.Gamma_e
    go, ge, gop, gep, gm = dp.gamma_o, dp.gamma_e, dp.gamma_o_int, dp.gamma_e_int, dp.gamma_m
    No, Ne, Nm = dp.n_th_o, dp.n_th_e, dp.n_th_m
    l1 = (
        -Ne * Ge**8 * Go_**4
        - 4 * Ge**6 * (Ne * gep + Nm * ge) * Go_**4 * gm
        + 2 * Ge**4 * (Ne * (ge - gep) - 4 * Nm * ge) * Go_**4 * Ge_
        - 4 * Ge**2 * (Ne * gep + Nm * ge) * Go_**4 * Ge_**2 * gm**3
        - Ne * Go_**4 * Ge_**4 * gm**4
    )
    inner = (-No * Go_ + Ne * go + 2 * go) * ge - Ne * Go_ * gep
    l2 = (
        4 * Ge**6 * inner * Go_**2
        - 8 * Ge**2 * (Ne * gep + Nm * ge) * Go_**3 * Ge_**2 * gm**2
        + 4 * Ge * inner * Go_**2 * Ge_**2 * gm**2
        - 4 * Ne * Go_**3 * Ge_**4 * gm**3
        + 4 * Ge**4 * (
            ((2 * No - Ne - 2 * Nm + 1) * ge**2 - (No + Nm - 2) * ge * gep - 3 * Ne * gep**2) * go
            + ((-2 * No + Ne - 2 * Nm) * ge - 3 * Ne * gep) * gop * Ge_
        )
    )
    l3 = (
        -4 * Ge**2 * (Ne * gep + Nm * ge) * Go_**2 * Ge_**2 * gm
        + 8 * Ge**2 * inner * Go_ * Ge_**2 * gm
        + 2 * Ge**4 * (
            ((4 * No - 3 * Ne + 8) * ge**2 + 2 * (4 - 2 * No + Ne) * ge * gep - 3 * Ne * gep**2) * go
            + ((-No + 4 * Ne) * ge - 3 * Ne * gep) * gop * Ge_
        )
        - 6 * Ne * Go_**2 * Ge_**4 * gm**2
    )
    l4 = 4 * Ge**2 * (((2 + Ne) * go - No * Go_) * ge - Ne * Go_ * gep) * Ge_**2 - 4 * Ne * Go_ * Ge_**4 * gm
    l5 = -Ne * Ge_**4
    return l1, l2, l3, l4, l5


def _rel_dev(printed: float, exact: float) -> float:
    if exact == 0:
        return abs(printed)
    return abs(printed - exact) / abs(exact)


def check_printed_appendix(dp: DerivedParams) -> dict:
    """Compare the published closed-form k_i against exact extraction.

    k1 is read with G_e^2 (as in d1). k4 is built from the l-polynomials with
    l4 in the G_o^2 slot; its deviation is reported, not asserted.
    """
    exact = extract_k_coefficients(dp)
    Z, Go, Ge = dp.Z, dp.G_o, dp.G_e
    bracket = (
        Go**2 * dp.n_th_o
        - (Go**2 + dp.Gamma_o * dp.gamma_m) * dp.n_th_e
        + dp.Gamma_o * dp.gamma_m * dp.n_th_m
    )
    noise = dp.n_th_e + 4 * Ge**2 * dp.Gamma_o * dp.gamma_e / Z**2 * bracket
    conv = Go**2 * Ge**2 * dp.gamma_o * dp.gamma_e
    l1, l2, l3, l4, l5 = _printed_l_terms(dp)
    printed = {
        "k1": 1 + noise,
        "k2": 1 + 4 * conv / Z**2,
        "k3": noise**2,
        "k4": 2 / Z**4 * (l1 * Go**8 + l2 * Go**6 + l3 * Go**4 + l4 * Go**2 + l5),
        "k5": 1 + 8 * conv / Z**2 + 16 * conv**2 / Z**4,
    }
    report = {}
    for name, value in printed.items():
        ref = getattr(exact, name)
        report[name] = {"printed": value, "extracted": ref, "relative_deviation": _rel_dev(value, ref)}
    return report
