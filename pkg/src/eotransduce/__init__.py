"""Optic-to-microwave conversion in an electro-optomechanical transducer and
the entanglement a two-mode squeezed vacuum keeps through it."""
from .capacity import capacity, capacity_noiseless, extract_k_coefficients
from .errors import NumericalError, ValidationError
from .gaussian import (
    CovarianceMatrix,
    EntanglementReport,
    ctmg_covariance,
    ln_tmsv_closed_form,
    log_negativity,
    pt_symplectic_eigenvalues,
    tmsv_covariance,
    xi_minus_analytic,
)
from .params import ConventionFlags, DerivedParams, SystemParams, derive, reference_profile
from .scattering import (
    ScatteringSolution,
    amplitude_ratio,
    coefficients,
    efficiency_closed_form,
    optimal_input_loss_rates,
    solve_qle_oracle,
)

__version__ = "0.1.0"
