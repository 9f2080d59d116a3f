"""Jump-condition analysis for the hyperbolic heat-transfer model.

Across a discontinuity moving at speed D with mass flux M = rho (u - D) the
model admits two one-parameter families of connected states.  In the
dimensionless variables vt = v/v0, pt = p/p0 (subscript 0: the ahead state)
the jump locus is a conic in pt for each vt, so there are two branch
pressures: the acoustic branch, which reduces to the classical gas-dynamics
curve as the coupling goes to zero, and the thermal branch, which collapses
to pt = 1 in that limit.  The coupling enters through

    kt = kappa v0 / ((gamma - 1) c_v).

Entropy production across the jump (the admissibility function Psi) changes
its behavior at a critical coupling kt_c ~ 1.04: below it, expansion jumps
on the thermal branch are admissible; above it, compressive ones are, and
sufficiently strong jumps split into a shock plus an attached fan.

All dimensionless routines take kt and gamma directly; construct_shock_state
assembles dimensional states from a given ahead state.
"""

import numpy as np
from dataclasses import dataclass
from scipy.optimize import brentq

from . import eos, model
from .errors import (BranchPoleError, ConfigError, DomainError, NoShockError)


def _quad_coeffs(kt, gamma, vt):
    """Coefficients of the jump locus as a quadratic A pt^2 + B pt + C = 0."""
    g1 = gamma - 1.0
    A = vt / g1 + 0.5 * (vt - 1.0) + 0.5 * kt ** 2 * vt ** 2 * (vt - 1.0)
    B = -(vt + 1.0) / g1
    C = 1.0 / g1 - 0.5 * (vt - 1.0) - 0.5 * kt ** 2 * (vt - 1.0)
    return A, B, C


def branch_poles(kt, gamma):
    """Specific volumes where the quadratic's leading coefficient vanishes.

    The acoustic branch diverges there (all poles sit in 0 < vt < 1);
    the thermal branch passes through smoothly.  Returns a sorted tuple,
    possibly empty.
    """
    g1 = gamma - 1.0
    if kt == 0.0:
        return (g1 / (gamma + 1.0),)
    # 0.5*kt^2 vt^3 - 0.5*kt^2 vt^2 + (1/g1 + 1/2) vt - 1/2 = 0
    roots = np.roots([0.5 * kt ** 2, -0.5 * kt ** 2, 1.0 / g1 + 0.5, -0.5])
    real = roots[np.abs(roots.imag) < 1.0e-12].real
    return tuple(sorted(float(r) for r in real if r > 0.0))


def branch_pressure(kt, gamma, v_tilde, branch):
    """Dimensionless pressure pt on one branch of the jump locus.

    Parameters
    ----------
    kt : float
        Dimensionless coupling kappa v0 / ((gamma-1) c_v), >= 0.
    gamma : float
        Adiabatic exponent, > 1.
    v_tilde : float or ndarray
        Dimensionless specific volume v/v0, > 0.
    branch : str
        "acoustic" (connects to the classical curve as kt -> 0) or
        "thermal" (constant 1 at kt = 0).

    Returns
    -------
    float or ndarray
        pt with pt(1) = 1 on both branches; the root is selected so each
        branch is continuous through v_tilde = 1.

    Raises
    ------
    BranchPoleError
        if an evaluation point sits on a pole of the requested branch;
        the error carries the pole locations in its `poles` attribute.
    """
    if branch not in ("acoustic", "thermal"):
        raise ConfigError(f"unknown branch {branch!r}")
    if gamma <= 1.0:
        raise ConfigError(f"gamma must exceed 1, got {gamma}")
    scalar = np.ndim(v_tilde) == 0
    vt = np.atleast_1d(np.asarray(v_tilde, dtype=float))
    if np.any(vt <= 0.0):
        raise DomainError("v_tilde must be positive")

    A, B, C = _quad_coeffs(kt, gamma, vt)
    disc = B ** 2 - 4.0 * A * C
    # on the physical domain the locus has two real intersections; disc can
    # only graze zero at the center point
    sq = np.sqrt(np.maximum(disc, 0.0))
    # B < 0 always, so q carries no cancellation; q/A is the root that
    # diverges at A = 0 and C/q the one that passes through
    q = 0.5 * (-B + sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        root_div = q / A
        root_reg = C / q
    # continuity through vt=1 fixes the assignment: on the expansion side the
    # divergent combination is the thermal root, on the compression side the
    # acoustic one
    expanding = vt > 1.0
    if branch == "acoustic":
        pt = np.where(expanding, root_reg, root_div)
    else:
        pt = np.where(expanding, root_div, root_reg)
    pt = np.where(np.isclose(vt, 1.0, rtol=0.0, atol=1.0e-14), 1.0, pt)

    at_pole = (np.abs(A) <= 1.0e-12 * (np.abs(B) + np.abs(C))) & ~expanding
    if branch == "acoustic" and np.any(at_pole):
        poles = branch_poles(kt, gamma)
        raise BranchPoleError(
            f"acoustic branch pole at v_tilde near {vt[at_pole][0]}", poles=poles)
    return float(pt[0]) if scalar else pt


def hugoniot_residual(kt, gamma, v_tilde, p_tilde):
    """Residual of the dimensionless jump relation at (vt, pt); 0 on the locus."""
    vt = np.asarray(v_tilde, dtype=float)
    pt = np.asarray(p_tilde, dtype=float)
    return ((vt * pt - 1.0) / (gamma - 1.0)
            + 0.5 * (pt + 1.0) * (vt - 1.0)
            + 0.5 * kt ** 2 * ((vt * pt) ** 2 - 1.0) * (vt - 1.0) / (pt - 1.0))


def center_slopes(kt, gamma):
    """dpt/dvt of the two branches at the center point vt = 1.

    The center is a double point of the locus; the two slopes solve
    m^2/(gamma-1) + (1/(gamma-1) + 1 + kt^2) m + kt^2 = 0.
    Returns (acoustic, thermal); at kt = 0 these are (-(gamma+1)/(gamma-1)+...
    the classical slope and 0).
    """
    a = 1.0 / (gamma - 1.0)
    b = 1.0 / (gamma - 1.0) + 1.0 + kt ** 2
    c = kt ** 2
    sq = np.sqrt(b ** 2 - 4.0 * a * c)
    return (-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)


def mass_flux_squared(kt, gamma, v_tilde, branch):
    """Dimensionless M^2 = -(pt-1)/(vt-1) on a branch; slope limit at vt=1."""
    vt = float(v_tilde)
    if abs(vt - 1.0) < 1.0e-12:
        sl = center_slopes(kt, gamma)
        return -sl[0] if branch == "acoustic" else -sl[1]
    pt = branch_pressure(kt, gamma, vt, branch)
    return -(pt - 1.0) / (vt - 1.0)


def _psi_value(kt, gamma, vt, pt):
    msq = -(pt - 1.0) / (vt - 1.0)
    theta_t = pt * vt
    return np.log(pt * vt ** gamma) - (gamma - 1.0) * kt ** 2 / msq * (theta_t - 1.0)


def psi(kt, gamma, v_tilde, branch):
    """Entropy production of the jump to (vt, pt(vt)), in units of c_v.

    Psi = eta_t - (gamma-1) kt^2/Mt^2 (theta_t - 1) with eta_t =
    log(pt vt^gamma) and theta_t = pt vt; a jump is admissible iff Psi >= 0.
    Vanishes to third order at the center point.

    Raises
    ------
    NoShockError
        if the sampled point has Mt^2 <= 0 (no real mass flux).
    DomainError
        if the branch pressure is non-positive there.
    """
    vt = float(v_tilde)
    if abs(vt - 1.0) < 1.0e-12:
        return 0.0
    pt = branch_pressure(kt, gamma, vt, branch)
    if pt <= 0.0:
        raise DomainError(f"non-positive branch pressure {pt} at v_tilde={vt}")
    msq = -(pt - 1.0) / (vt - 1.0)
    if msq <= 0.0:
        raise NoShockError(f"no real mass flux at v_tilde={vt} on {branch} branch")
    return float(_psi_value(kt, gamma, vt, pt))


def g_second_at_center(kt):
    """Thermal-branch curvature indicator at the center point (gamma = 2).

    Equals twice d^2 pt/dvt^2 of the thermal branch at vt = 1.  Zero exactly
    at the critical coupling; negative below it (thermal expansion jumps
    admissible), positive above (compressive ones).
    """
    if kt < 0.0:
        raise DomainError(f"coupling must be non-negative, got {kt}")
    k2 = kt ** 2
    r = np.sqrt(kt ** 4 + 4.0)
    return 2.0 * kt ** 4 / r - 4.0 * k2 + (k2 + 3.0) ** 2 - (k2 + 3.0) * (r + 1.0)


def critical_kappa():
    """The critical coupling kt_c: the positive root of g_second_at_center."""
    return brentq(g_second_at_center, 0.5, 2.0, xtol=1.0e-14, rtol=8.9e-16)


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, a, b, xtol):
    h = b - a
    c = b - _INVPHI * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def v_star(kt):
    """Location of the thermal-branch entropy-production maximum (gamma = 2).

    For kt below the critical coupling the admissible interval lies on the
    expansion side vt > 1, above it on the compression side vt < 1; v_star
    returns the interior argmax of Psi on that side, found by a coarse scan
    plus golden-section refinement to 1e-10.  The mass-flux square attains
    its maximum at the same point, where |u - D| equals the thermal sound
    speed of the connected state.
    """
    g2 = g_second_at_center(kt)
    if abs(g2) < 1.0e-12:
        raise DomainError("coupling is at the critical value: Psi has no "
                          "one-sided interior maximum")

    def f(vt):
        try:
            return psi(kt, 2.0, vt, "thermal")
        except (NoShockError, DomainError):
            return -np.inf

    if g2 < 0.0:
        # expansion side: walk right until Psi turns negative
        hi = 1.0
        step = 1.0e-3
        while f(1.0 + step) > 0.0 and step < 50.0:
            step *= 2.0
        hi = 1.0 + step
        grid = np.linspace(1.0, hi, 600)[1:]
    else:
        lo = 1.0
        step = 1.0e-3
        while step < 0.999 and f(1.0 - step) > 0.0:
            step *= 2.0
        lo = max(1.0 - step, 1.0e-3)
        grid = np.linspace(lo, 1.0, 600)[:-1]

    vals = np.array([f(v) for v in grid])
    i = int(np.argmax(vals))
    if not np.isfinite(vals[i]) or vals[i] <= 0.0:
        raise DomainError(f"no interior Psi maximum found for kt={kt}")
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]
    return _golden_max(f, a, b, xtol=1.0e-10)


@dataclass(frozen=True)
class HugoniotSample:
    """Branch data on a grid of dimensionless specific volumes."""

    v_tilde: np.ndarray
    p_plus: np.ndarray     # acoustic branch
    p_minus: np.ndarray    # thermal branch
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    Msq_minus: np.ndarray  # mass-flux square on the thermal branch


def sample_branches(kt, gamma, v_grid):
    """Evaluate both branches and their Psi on a grid.

    Points within 1e-6 of an acoustic-branch pole get NaN in the acoustic
    columns; Psi is NaN wherever the branch pressure is non-positive or the
    mass-flux square is.
    """
    vt = np.asarray(v_grid, dtype=float)
    poles = branch_poles(kt, gamma)

    A, B, C = _quad_coeffs(kt, gamma, vt)
    sq = np.sqrt(np.maximum(B ** 2 - 4.0 * A * C, 0.0))
    q = 0.5 * (-B + sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        root_div = q / A
        root_reg = C / q
    expanding = vt > 1.0
    p_plus = np.where(expanding, root_reg, root_div)
    p_minus = np.where(expanding, root_div, root_reg)
    center = np.isclose(vt, 1.0, rtol=0.0, atol=1.0e-14)
    p_plus = np.where(center, 1.0, p_plus)
    p_minus = np.where(center, 1.0, p_minus)
    for pole in poles:
        p_plus = np.where(np.abs(vt - pole) < 1.0e-6, np.nan, p_plus)

    def psi_col(pt):
        with np.errstate(divide="ignore", invalid="ignore"):
            msq = -(pt - 1.0) / (vt - 1.0)
            val = _psi_value(kt, gamma, vt, pt)
        bad = ~np.isfinite(pt) | (pt <= 0.0) | (msq <= 0.0)
        return np.where(center, 0.0, np.where(bad, np.nan, val))

    with np.errstate(divide="ignore", invalid="ignore"):
        msq_minus = np.where(center,
                             -center_slopes(kt, gamma)[1],
                             -(p_minus - 1.0) / (vt - 1.0))
    return HugoniotSample(v_tilde=vt.copy(), p_plus=p_plus, p_minus=p_minus,
                          psi_plus=psi_col(p_plus), psi_minus=psi_col(p_minus),
                          Msq_minus=msq_minus)


# ---------------------------------------------------------------------------
# dimensional shock construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShockConstruction:
    """A discontinuity built from an ahead state and a volume ratio."""

    left: model.Primitive
    right: model.Primitive
    D: float              # propagation speed
    M: float              # mass flux rho (u - D), continuous across the jump
    branch: str
    admissible: bool      # entropy production >= 0
    production: float     # M [eta] + kappa^2 [j v]  (brackets: right - left)
    v_tilde: float
    p_tilde: float


def rh_residuals(params, left, right, D):
    """The four jump-condition residuals [f(Q) - D Q] (right minus left)."""
    ql = model.prim_to_cons(params, left)
    qr = model.prim_to_cons(params, right)
    rl = model.flux(params, ql) - D * ql.as_array()
    rr = model.flux(params, qr) - D * qr.as_array()
    return np.asarray(rr - rl, dtype=float).reshape(4)


def clausius_duhem_production(params, left, right, D):
    """Entropy production M [eta] + kappa^2 [j v] across a jump.

    Brackets are right minus left; M is evaluated on the left state (for a
    true jump pair it is continuous).  Non-negative iff the jump is
    admissible.
    """
    M = float(left.rho) * (float(left.u) - D)
    d_eta = float(right.eta) - float(left.eta)
    d_jv = float(right.j) / float(right.rho) - float(left.j) / float(left.rho)
    return M * d_eta + params.kappa ** 2 * d_jv


def construct_shock_state(params, right, v_tilde_left, branch,
                          direction="right_moving"):
    """Build the state jump-connected to `right` at volume ratio vt.

    Parameters
    ----------
    params : ModelParams
    right : Primitive
        The ahead state (placed on the right of the discontinuity).
    v_tilde_left : float
        v_left / v_right.
    branch : str
        "acoustic" or "thermal".
    direction : str
        "right_moving" picks D > u_right (mass flux M < 0),
        "left_moving" the mirror.

    Returns
    -------
    ShockConstruction
        With the constructed left state; all four jump residuals vanish to
        round-off, and `admissible` reflects the sign of the entropy
        production.

    Raises
    ------
    NoShockError
        if the branch point has M^2 <= 0.
    """
    if direction not in ("right_moving", "left_moving"):
        raise ConfigError(f"unknown direction {direction!r}")
    gas = params.gas
    rho_r = float(right.rho)
    u_r = float(right.u)
    j_r = float(right.j)
    v_r = 1.0 / rho_r
    p_r = float(eos.pressure(gas, rho_r, right.eta))
    theta_r = float(eos.temperature(gas, rho_r, right.eta))
    kt = params.kappa * v_r / ((gas.gamma - 1.0) * gas.c_v)

    vt = float(v_tilde_left)
    if vt <= 0.0:
        raise DomainError(f"v_tilde must be positive, got {vt}")
    degenerate = abs(vt - 1.0) < 1.0e-12
    if degenerate:
        pt = 1.0
        msq_t = mass_flux_squared(kt, gas.gamma, 1.0, branch)
    else:
        pt = branch_pressure(kt, gas.gamma, vt, branch)
        msq_t = -(pt - 1.0) / (vt - 1.0)
    if msq_t <= 0.0:
        raise NoShockError(
            f"branch point v_tilde={vt} has non-positive mass-flux square {msq_t}")

    M = np.sqrt(msq_t * p_r / v_r)
    if direction == "right_moving":
        M = -M
    D = u_r - M * v_r

    v_l = vt * v_r
    p_l = pt * p_r
    rho_l = 1.0 / v_l
    u_l = u_r + M * (v_l - v_r)
    theta_l = p_l * v_l / ((gas.gamma - 1.0) * gas.c_v)
    j_l = (j_r * v_r - (theta_l - theta_r) / M) / v_l
    eta_l = float(eos.entropy_from_pressure(gas, rho_l, p_l))
    left = model.Primitive(rho=rho_l, u=u_l, eta=eta_l, j=j_l)

    production = clausius_duhem_production(params, left, right, D)
    return ShockConstruction(left=left, right=model.Primitive(rho_r, u_r, float(right.eta), j_r),
                             D=float(D), M=float(M), branch=branch,
                             admissible=bool(production >= 0.0),
                             production=float(production),
                             v_tilde=vt, p_tilde=float(pt))


@dataclass(frozen=True)
class ContactCheck:
    """Outcome of testing a stationary (M = 0) discontinuity."""

    admissible: bool
    euler_limit: bool     # kappa = 0: only the gas-dynamic subset was checked
    residuals: tuple      # ([u], [p], [theta], [v j]) brackets

    def __bool__(self):
        return self.admissible


def contact_discontinuity_check(params, left, right, tol=1.0e-10):
    """Test whether (left, right) can sit on a stationary discontinuity.

    With kappa > 0 the M = 0 jump conditions force pressure, temperature and
    v j to be continuous, which for this gas closure pins every field: only
    identical states pass.  With kappa = 0 the model degenerates to gas
    dynamics where classical contacts (equal u and p, free density jump)
    exist; the check then tests only those two brackets and raises the
    euler_limit flag.
    """
    gas = params.gas
    p_l = float(eos.pressure(gas, left.rho, left.eta))
    p_r = float(eos.pressure(gas, right.rho, right.eta))
    th_l = float(eos.temperature(gas, left.rho, left.eta))
    th_r = float(eos.temperature(gas, right.rho, right.eta))
    d_u = float(right.u) - float(left.u)
    d_p = p_r - p_l
    d_th = th_r - th_l
    d_jv = float(right.j) / float(right.rho) - float(left.j) / float(left.rho)
    residuals = (d_u, d_p, d_th, d_jv)

    scale = max(abs(p_l), abs(p_r), 1.0)
    if params.kappa == 0.0:
        ok = abs(d_u) <= tol and abs(d_p) <= tol * scale
        return ContactCheck(admissible=ok, euler_limit=True, residuals=residuals)
    ok = (abs(d_u) <= tol and abs(d_p) <= tol * scale
          and abs(d_th) <= tol * max(abs(th_l), abs(th_r), 1.0)
          and abs(d_jv) <= tol)
    return ContactCheck(admissible=ok, euler_limit=False, residuals=residuals)
