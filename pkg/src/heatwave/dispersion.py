"""Linear plane-wave analysis: phase velocities and attenuation rates.

Perturbing a rest state (rho0, eta0) with exp(i k (x - c t)) turns the
relaxation system into a quartic in the complex phase velocity c and the
parabolic (Fourier) limit into a cubic in c~.  Both polynomials are kept
monic and represented by their trailing coefficients, highest power first.

Stability means every root satisfies Im(c) <= 0: perturbations never grow.
The spectra are symmetric under c -> -conj(c), so velocities come in +/-
pairs with a shared attenuation; reported branch quantities use the
right-going members.
"""

import numpy as np
from dataclasses import dataclass

from . import eos, model
from .errors import ConfigError, DomainError, NumericalError, StabilityError


def _rest_quantities(params, rest):
    rho0, eta0 = float(rest[0]), float(rest[1])
    if rho0 <= 0.0:
        raise DomainError(f"rest density must be positive, got {rho0}")
    gas = params.gas
    p0 = float(eos.pressure(gas, rho0, eta0))
    theta0 = float(eos.temperature(gas, rho0, eta0))
    p_rho, p_eta, th_rho, th_eta = (float(x) for x in
                                    eos.thermo_derivatives(gas, rho0, eta0))
    return rho0, p0, theta0, p_rho, p_eta, th_rho, th_eta


def model_polynomial(params, rest, k):
    """Trailing coefficients of the quartic for the relaxation system.

    Parameters
    ----------
    params : ModelParams
        Needs kappa > 0 and a relaxation time (tau0 or the conductivity K
        for the asymptotic law).
    rest : (rho0, eta0)
        Background state; u0 = 0, j0 = 0.
    k : float
        Wavenumber, > 0.

    Returns
    -------
    ndarray of 4 complex values (a3, a2, a1, a0) for
    c^4 + a3 c^3 + a2 c^2 + a1 c + a0.
    """
    if k <= 0.0:
        raise DomainError(f"wavenumber must be positive, got {k}")
    if params.kappa <= 0.0:
        raise ConfigError("model polynomial needs kappa > 0")
    rho0, p0, theta0, p_rho, p_eta, th_rho, th_eta = _rest_quantities(params, rest)
    tau = float(model.relax_time(params, rho0, p0))
    aT2 = params.kappa ** 2 / rho0 ** 2 * th_eta
    gap = params.kappa ** 2 / rho0 ** 2 * (p_rho * th_eta - p_eta * th_rho)
    r = 1.0 / (k * tau)
    return np.array([1j * r,
                     -(aT2 + p_rho),
                     -1j * r * p_rho,
                     gap], dtype=complex)


def euler_polynomial(params, rest, k):
    """Trailing coefficients of the cubic for the Fourier-conduction limit.

    Returns (b2, b1, b0) for c^3 + b2 c^2 + b1 c + b0.  With K = 0 the roots
    are the adiabatic pair +/- a_p and zero.
    """
    if k <= 0.0:
        raise DomainError(f"wavenumber must be positive, got {k}")
    rho0, p0, theta0, p_rho, p_eta, th_rho, th_eta = _rest_quantities(params, rest)
    s = params.K * k / (rho0 * theta0)
    gap = p_rho * th_eta - p_eta * th_rho
    return np.array([1j * s * th_eta,
                     -p_rho,
                     -1j * s * gap], dtype=complex)


def _polyval(coeffs, z):
    n = len(coeffs)
    val = np.full_like(z, 1.0, dtype=complex)
    for a in coeffs:
        val = val * z + a
    return val


def solve_roots(coeffs, maxiter=500):
    """All roots of a monic polynomial given by trailing coefficients.

    Durand-Kerner iteration from deterministic starting points on a circle
    of the Cauchy bound radius, then a Newton polish.  Degree at most 4.

    Raises
    ------
    NumericalError
        if the iteration has not settled after `maxiter` sweeps, or a
        polished root still has backward error above 1e-10 relative to the
        largest coefficient.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = len(coeffs)
    if n == 0 or n > 4:
        raise ConfigError(f"degree must be 1..4, got {n}")
    radius = 1.0 + np.max(np.abs(coeffs))
    # fixed phase offset keeps the starts away from real-axis symmetries
    z = radius * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n)

    for _ in range(maxiter):
        delta = np.empty(n, dtype=complex)
        for m in range(n):
            denom = np.prod(z[m] - np.delete(z, m)) if n > 1 else 1.0
            delta[m] = _polyval(coeffs, np.array(z[m]))[()] / denom
        z = z - delta
        if np.max(np.abs(delta)) < 1.0e-14 * max(1.0, np.max(np.abs(z))):
            break
    else:
        res = np.abs(_polyval(coeffs, z))
        raise NumericalError(f"root iteration did not settle; residuals {res}")

    # Newton polish; derivative coefficients of the monic polynomial
    dcoeffs = np.arange(n, 0, -1) * np.concatenate(([1.0], coeffs[:-1]))
    for _ in range(2):
        pv = _polyval(coeffs, z)
        dv = np.zeros_like(z)
        for a in dcoeffs:
            dv = dv * z + a
        z = z - np.where(dv != 0.0, pv / np.where(dv == 0.0, 1.0, dv), 0.0)

    # backward-error test: residual relative to the terms actually summed,
    # so a well-conditioned huge root is not penalized for |z|^n roundoff
    res = np.abs(_polyval(coeffs, z))
    az = np.abs(z)
    powers = az[:, None] ** np.arange(n - 1, -1, -1)[None, :]
    scale = np.maximum(az ** n, np.max(np.abs(coeffs)[None, :] * powers, axis=1))
    scale = np.maximum(scale, 1.0)
    if np.any(res > 1.0e-10 * scale):
        raise NumericalError(f"root residuals {res} exceed tolerance at scale {scale}")
    return z


@dataclass(frozen=True)
class DispersionSample:
    """Both spectra at one wavenumber, with branch quantities."""

    k: float
    model_roots: np.ndarray   # 4 complex, sorted by (Re, Im)
    euler_roots: np.ndarray   # 3 complex, sorted by (Re, Im)
    c_f: float                # fast right-going phase velocity
    c_s: float                # slow right-going phase velocity
    beta1: float              # attenuations -k Im(c), in root order
    beta2: float
    beta3: float
    beta4: float
    c_tilde: float            # Fourier-limit propagating velocity
    beta_t1: float            # its attenuation
    beta_t2: float            # attenuation of the non-propagating root


def _ordered(roots, prev, tie=1.0e-9):
    """Sort by (Re, Im); inside near-equal-Re groups follow `prev` if given."""
    idx = np.lexsort((roots.imag, roots.real))
    roots = roots[idx]
    if prev is None:
        return roots
    out = roots.copy()
    i = 0
    n = len(roots)
    while i < n:
        j = i + 1
        while j < n and roots[j].real - roots[i].real < tie:
            j += 1
        if j - i > 1:
            # small group: greedy nearest-to-previous keeps branches continuous
            group = list(roots[i:j])
            for m in range(i, j):
                d = [abs(g - prev[m]) for g in group]
                pick = int(np.argmin(d))
                out[m] = group.pop(pick)
        i = j
    return out


def classify(model_roots, euler_roots, k, prev=None):
    """Label the two spectra at wavenumber k into a DispersionSample.

    Roots are ordered by real part (ties broken by imaginary part, or by
    continuity with `prev`, the previous sample's ordered roots, when
    following a sweep).  Any root with Im above 1e-12 aborts with a
    stability violation.

    `prev` is a pair (model_roots, euler_roots) or None.
    """
    mr = np.asarray(model_roots, dtype=complex)
    er = np.asarray(euler_roots, dtype=complex)
    if mr.shape != (4,) or er.shape != (3,):
        raise ConfigError("expected 4 model roots and 3 euler roots")
    worst = max(float(np.max(mr.imag)), float(np.max(er.imag)))
    if worst > 1.0e-12:
        raise StabilityError(
            f"stability violation at k={k}: root with Im(c)={worst}")
    mr = _ordered(mr, None if prev is None else prev[0])
    er = _ordered(er, None if prev is None else prev[1])
    return DispersionSample(
        k=float(k), model_roots=mr, euler_roots=er,
        c_f=float(mr[3].real), c_s=float(mr[2].real),
        beta1=float(-k * mr[0].imag), beta2=float(-k * mr[1].imag),
        beta3=float(-k * mr[2].imag), beta4=float(-k * mr[3].imag),
        c_tilde=float(er[2].real),
        beta_t1=float(-k * er[2].imag), beta_t2=float(-k * er[1].imag))


def sweep(params, rest, k_values=None):
    """DispersionSamples over a wavenumber grid, followed sequentially.

    Default grid: 400 log-spaced points on [1e-4, 1e6].  Samples are
    computed in grid order so near-degenerate root groups stay on their
    branch from one k to the next.
    """
    if k_values is None:
        k_values = np.geomspace(1.0e-4, 1.0e6, 400)
    out = []
    prev = None
    for k in np.asarray(k_values, dtype=float):
        mroots = solve_roots(model_polynomial(params, rest, k))
        eroots = solve_roots(euler_polynomial(params, rest, k))
        sample = classify(mroots, eroots, k, prev=prev)
        out.append(sample)
        prev = (sample.model_roots, sample.euler_roots)
    return out
