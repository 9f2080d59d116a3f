"""Polytropic gas closure in (density, specific entropy) variables.

The specific internal energy is

    eps(rho, eta) = rho**(gamma - 1) / (gamma - 1) * exp(eta / c_v)

and pressure / temperature follow from the Gibbs relation
theta d(eta) = d(eps) + p d(v):

    p     = rho**2 * d(eps)/d(rho) = rho**gamma * exp(eta / c_v)
    theta = d(eps)/d(eta)          = rho**(gamma - 1) * exp(eta / c_v) / ((gamma - 1) c_v)

All functions accept scalars or numpy arrays and broadcast elementwise.
"""

import numpy as np
from dataclasses import dataclass

from .errors import ConfigError, DomainError

# densities at or below this are treated as vacuum and rejected
DENSITY_FLOOR = 1.0e-12


@dataclass(frozen=True)
class GasParams:
    """Polytropic gas constants: adiabatic exponent and specific heat c_v."""

    gamma: float
    c_v: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ConfigError(f"gamma must exceed 1, got {self.gamma}")
        if not self.c_v > 0.0:
            raise ConfigError(f"c_v must be positive, got {self.c_v}")


def _check_density(rho, floor):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= floor):
        bad = np.min(rho)
        raise DomainError(f"density {bad} at or below vacuum floor {floor}")
    return rho


def specific_internal_energy(gas, rho, eta, floor=DENSITY_FLOOR):
    """Specific internal energy eps(rho, eta).

    Parameters
    ----------
    gas : GasParams
    rho : float or ndarray
        mass density, strictly positive
    eta : float or ndarray
        specific entropy

    Returns
    -------
    float or ndarray
    """
    rho = _check_density(rho, floor)
    return rho ** (gas.gamma - 1.0) / (gas.gamma - 1.0) * np.exp(np.asarray(eta) / gas.c_v)


def pressure(gas, rho, eta, floor=DENSITY_FLOOR):
    """Thermodynamic pressure p = rho**2 d(eps)/d(rho)."""
    rho = _check_density(rho, floor)
    return rho ** gas.gamma * np.exp(np.asarray(eta) / gas.c_v)


def temperature(gas, rho, eta, floor=DENSITY_FLOOR):
    """Absolute temperature theta = d(eps)/d(eta); positive for any valid state."""
    rho = _check_density(rho, floor)
    g = np.exp(np.asarray(eta) / gas.c_v)
    return rho ** (gas.gamma - 1.0) * g / ((gas.gamma - 1.0) * gas.c_v)


def thermo_derivatives(gas, rho, eta, floor=DENSITY_FLOOR):
    """First derivatives of p and theta with respect to (rho, eta).

    Returns
    -------
    (p_rho, p_eta, theta_rho, theta_eta) : tuple of float or ndarray
        Evaluated at constant eta / constant rho respectively.  For this
        closure p_rho = gamma p / rho > 0 and theta_eta = theta / c_v > 0.
    """
    rho = _check_density(rho, floor)
    g = np.exp(np.asarray(eta) / gas.c_v)
    p = rho ** gas.gamma * g
    theta = rho ** (gas.gamma - 1.0) * g / ((gas.gamma - 1.0) * gas.c_v)
    p_rho = gas.gamma * p / rho
    p_eta = p / gas.c_v
    theta_rho = (gas.gamma - 1.0) * theta / rho
    theta_eta = theta / gas.c_v
    return p_rho, p_eta, theta_rho, theta_eta


def entropy_from_pressure(gas, rho, p, floor=DENSITY_FLOOR):
    """Invert the closure: eta(rho, p) = c_v log(p / rho**gamma)."""
    rho = _check_density(rho, floor)
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0):
        raise DomainError(f"pressure {np.min(p)} is not positive")
    return gas.c_v * np.log(p / rho ** gas.gamma)
