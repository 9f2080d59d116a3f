"""Hyperbolic heat transfer: a first-order relaxation model for heat-carrying
gas flow, its jump-condition analysis, linear wave spectra, and a
finite-volume solver with a parabolic reference scheme."""

from .errors import (HeatwaveError, DomainError, NonPhysicalStateError,
                     ConfigError, NumericalError, StabilityError,
                     BranchPoleError, NoShockError, DegenerateFieldError)
from .eos import GasParams
from .model import (ModelParams, Primitive, Conserved, WaveSpeeds,
                    ConvexityReport, prim_to_cons, cons_to_prim, flux, source,
                    relax_time, wave_speeds_1d, quasilinear_matrix_1d,
                    right_eigenvectors_1d, char_field_indicator,
                    eigenvalues_3d, eigenvalues_curl_cleaning,
                    convexity_check, energy_hessian)
from .hugoniot import (HugoniotSample, ShockConstruction, ContactCheck,
                       branch_pressure, branch_poles, hugoniot_residual,
                       center_slopes, mass_flux_squared, psi,
                       g_second_at_center, critical_kappa, v_star,
                       sample_branches, construct_shock_state, rh_residuals,
                       clausius_duhem_production, contact_discontinuity_check)
from .dispersion import (DispersionSample, model_polynomial, euler_polynomial,
                         solve_roots, classify, sweep)
from .solver import (RunConfig, SolutionFrame, Diagnostics, minmod_slope,
                     muscl_reconstruct, rusanov_flux, timestep, ars222_step,
                     implicit_source_solve, euler_fourier_rhs, run)
from .cases import (RiemannProblem, CASE_NAMES, catalog, to_config,
                    piecewise_init, prim_from_pressure, smooth_periodic,
                    self_similar_transform)

__version__ = "0.1.0"
