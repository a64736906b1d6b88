"""Periodic traveling waves of the 1-D electronic Euler-Poisson system and their spectra."""
from ._backend import BACKEND
from .bloch import (
    BlochOperator,
    Bubble,
    SpectrumSlice,
    assemble,
    bubble_detect,
    refine_bubble,
    scan,
    spectrum,
)
from .crossings import Crossing, crossing_oracle, find_crossing, lambda_branch, omega
from .errors import (
    ConfigError,
    EigensolverFailure,
    EPWavesError,
    InsufficientFourier,
    NoConvergence,
    NonPeriodic,
    NoRoot,
    NotFound,
    PeakonProximity,
)
from .indices import (
    GammaReport,
    ModulationReport,
    gamma_asymptotic,
    gamma_matrix,
    gamma_scalar,
    modulational_index,
    predicted_growth,
)
from .pressure import PressureLaw, f_deriv, h_deriv, p_deriv
from .profile import (
    WaveParams,
    WaveProfile,
    asymptotic_coeffs,
    make_profile,
    rho_max,
    solve_profile,
    speed_from_k0,
    w_dagger,
    w_potential,
    wavenumber,
)

__version__ = "0.1.0"
