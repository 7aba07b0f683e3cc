import math

import numpy as np
import pytest
from scipy import optimize

from eotransduce.errors import ValidationError
from eotransduce.params import SystemParams, derive
from eotransduce.scattering import (
    amplitude_ratio,
    coefficient_array,
    coefficients,
    efficiency_closed_form,
    optimal_input_loss_rates,
    solve_qle_oracle,
)

from conftest import random_params

# |c_i|^2 at omega = 0 for the reference device, mpmath 40-digit 3x3 solve
WEIGHTS_AT_ZERO = [0.326806428665444, 0.193784932257676, 0.297096753332222,
                   0.180365663697428, 0.0019462220472298]
# complex c_i at omega = Gamma_e, same oracle
COEFFS_AT_GAMMA_E = [
    0.000468677229294436 - 4.03838697844409e-5j,
    -0.0796383313958147 - 0.919999716087365j,
    0.000446866204563523 - 3.85045090484299e-5j,
    0.271399849577973 - 0.271293115603742j,
    -3.99407280240896e-5 + 3.98780696542509e-5j,
]


def bare_cavity():
    # couplings -> 0 isolates the microwave cavity
    return derive(SystemParams(n_pump_o=1e-30, n_pump_e=1e-30))


def test_bare_cavity_limit():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dp = bare_cavity()
    sol = solve_qle_oracle(dp, 0.0)
    g, gi = dp.gamma_e, dp.gamma_e_int
    assert sol.c2 == pytest.approx((g - gi) / (g + gi), abs=1e-14)
    assert sol.c4 == pytest.approx(2 * math.sqrt(g * gi) / (g + gi), abs=1e-14)
    assert max(abs(sol.c1), abs(sol.c3), abs(sol.c5)) < 1e-15
    assert abs(sol.c2) ** 2 + abs(sol.c4) ** 2 == pytest.approx(1.0, abs=1e-14)


def test_oracle_weights_reference(default_dp):
    sol = solve_qle_oracle(default_dp, 0.0)
    np.testing.assert_allclose(np.abs(sol.coefficients) ** 2, WEIGHTS_AT_ZERO, rtol=1e-12)
    assert sol.total_weight == pytest.approx(1.0, abs=1e-14)


def test_closed_form_at_zero(default_dp):
    sol = coefficients(default_dp, 0.0)
    dp = default_dp
    expected = -2 * dp.G_o * dp.G_e * math.sqrt(dp.gamma_o * dp.gamma_e) / dp.Z
    assert sol.c1 == pytest.approx(expected, rel=1e-13)
    assert sol.c1.real == pytest.approx(-0.571669859853958, rel=1e-12)
    assert sol.efficiency == pytest.approx(0.326806428665444, rel=1e-12)


def test_closed_form_matches_reference_off_resonance(default_dp):
    sol = coefficients(default_dp, default_dp.Gamma_e)
    np.testing.assert_allclose(sol.coefficients, COEFFS_AT_GAMMA_E, rtol=1e-10)
    oracle = solve_qle_oracle(default_dp, default_dp.Gamma_e)
    np.testing.assert_allclose(sol.coefficients, oracle.coefficients, rtol=1e-10)


def test_denominator_product_equals_z(default_dp):
    dp = default_dp
    mech = dp.G_o**2 + dp.gamma_m * dp.Gamma_o
    d = dp.Gamma_e + dp.G_e**2 * dp.Gamma_o / mech
    assert d * mech == pytest.approx(dp.Z, rel=1e-12)


def test_efficiency_closed_form(default_dp):
    assert efficiency_closed_form(default_dp) == pytest.approx(abs(coefficients(default_dp).c1) ** 2, rel=1e-12)


def test_efficiency_perfect_limit():
    # lossless cavities and vanishing mechanical damping, at the matched point
    vals = []
    for gm in (1.0, 1e-2, 1e-4, 1e-6):
        p = SystemParams(gamma_o_int=1e-9, gamma_e_int=1e-9, gamma_m=gm)
        dp = derive(p)
        go, ge = dp.G_o**2, dp.G_e**2
        # with gamma' -> 0 any (gamma_o, gamma_e) with equal cooperativity gives R -> 1
        dp = dp.with_input_losses(1e6, 1e6 * ge / go)
        vals.append(efficiency_closed_form(dp))
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(1.0, abs=1e-6)


def test_efficiency_vanishes_without_optical_coupling():
    dp = derive(SystemParams())
    from dataclasses import replace

    assert efficiency_closed_form(replace(dp, G_o=0.0)) == 0.0


def test_passivity_and_oracle_over_grid(rng):
    for _ in range(25):
        dp = derive(random_params(rng))
        omegas = np.geomspace(1e-3, 1e3, 30) * dp.Gamma_e
        closed = coefficient_array(dp, omegas)
        np.testing.assert_allclose(np.sum(np.abs(closed) ** 2, axis=0), 1.0, atol=1e-9)
        for k, w in enumerate(omegas):
            oracle = solve_qle_oracle(dp, w).coefficients
            np.testing.assert_allclose(closed[:, k], oracle, rtol=1e-10)


def test_efficiency_bounded_and_continuous(default_dp):
    omegas = np.geomspace(1e-3, 1e3, 400) * default_dp.Gamma_e
    r = np.abs(coefficient_array(default_dp, omegas)[0]) ** 2
    assert np.all((r >= 0) & (r <= 1))
    assert np.max(np.abs(np.diff(r))) < 0.05


def test_efficiency_not_assumed_symmetric(rng):
    # R(-w) differs from R(w) in general; only check that both are valid
    dp = derive(random_params(rng))
    for w in (0.3 * dp.Gamma_e, dp.G_o):
        for s in (1, -1):
            assert 0 <= abs(coefficients(dp, s * w).c1) ** 2 <= 1


def test_amplitude_ratio_reference(profile_dp):
    # mpmath evaluation of the output occupancy over N_S
    assert amplitude_ratio(profile_dp, 1.0) == pytest.approx(0.479172074366434, rel=1e-10)
    assert amplitude_ratio(profile_dp, 0.5) == pytest.approx(0.631537720067424, rel=1e-10)


def test_amplitude_ratio_zero_temperature(default_dp):
    dp = default_dp.zero_temperature()
    r = efficiency_closed_form(dp)
    for n in (0.01, 1.0, 50.0):
        assert amplitude_ratio(dp, n) == pytest.approx(r, rel=1e-13)


def test_amplitude_ratio_exceeds_efficiency(rng):
    for _ in range(50):
        dp = derive(random_params(rng))
        assert amplitude_ratio(dp, 1.0) >= efficiency_closed_form(dp) * (1 - 1e-12)


def test_amplitude_ratio_needs_signal(default_dp):
    with pytest.raises(ValidationError):
        amplitude_ratio(default_dp, 0.0)


def test_optimal_rates_physical():
    go, ge = optimal_input_loss_rates(SystemParams())
    assert go == pytest.approx(32.87e6, rel=1e-3)
    assert ge == pytest.approx(10.89e6, rel=1e-3)
    dp = derive(SystemParams())
    ratio = (dp.G_o**2 + dp.gamma_o_int * dp.gamma_m) / (dp.G_e**2 + dp.gamma_e_int * dp.gamma_m)
    assert go / ge == pytest.approx(ratio, rel=1e-13)
    assert ratio == pytest.approx(3.018, abs=1e-3)


def test_optimal_rates_match_independent_maximizer(rng):
    for _ in range(10):
        p = random_params(rng)
        dp = derive(p)
        go, ge = optimal_input_loss_rates(dp)

        def neg(t):
            return -efficiency_closed_form(dp.with_input_losses(math.exp(t[0]), math.exp(t[1])))

        # Powell: an independent route from the closed form and from the simplex used elsewhere
        res = optimize.minimize(neg, [math.log(go) + 0.5, math.log(ge) - 0.5], method="Powell",
                                options={"xtol": 1e-10, "ftol": 1e-15})
        assert math.exp(res.x[0]) == pytest.approx(go, rel=1e-3)
        assert math.exp(res.x[1]) == pytest.approx(ge, rel=1e-3)
