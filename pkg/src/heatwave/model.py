"""Hyperbolic model of heat transfer in a compressible inviscid flow.

The gas dynamics equations are extended by a thermal impulse field j whose
flux potential is the temperature.  With alpha(rho) = kappa**2 / rho the 1D
conserved state is Q = (rho, rho u, E, j) with

    E = rho u**2 / 2 + rho eps(rho, eta) + kappa**2 j**2 / (2 rho)

and fluxes

    f(Q) = (rho u,  rho u**2 + p,  E u + p u + (kappa**2/rho) theta j,  j u + theta).

For this particular alpha the total-pressure correction (rho alpha' + alpha)
j**2 / 2 in the momentum flux vanishes identically, so the momentum flux is
the usual rho u**2 + p.  Relaxation of j toward the Fourier law enters as the
stiff source S = (0, 0, 0, -j / tau).

Key components:

* Primitive / Conserved containers and conversions
* flux, source and the relaxation time
* characteristic speeds, right eigenvectors, genuine-nonlinearity indicator
* multi-d characteristic speeds (plain and with curl cleaning)
* convexity of the total energy (Sylvester conditions)
"""

import numpy as np
from dataclasses import dataclass

from . import eos
from .errors import ConfigError, DegenerateFieldError, DomainError, NonPhysicalStateError


@dataclass(frozen=True)
class ModelParams:
    """Gas constants plus the thermal-impulse coupling and relaxation law.

    kappa is the thermal coupling constant in alpha(rho) = kappa**2 / rho,
    K the Fourier heat conductivity used by the relaxation law and by the
    parabolic reference scheme.  tau_policy selects how the relaxation time
    is formed: "asymptotic" uses tau = K rho / (kappa**2 theta), which makes
    the relaxed model consistent with Fourier heat conduction, "constant"
    uses the fixed value tau0.
    """

    gas: eos.GasParams
    kappa: float = 0.0
    K: float = 0.0
    tau_policy: str = "asymptotic"
    tau0: float | None = None

    def __post_init__(self):
        if self.kappa < 0.0:
            raise ConfigError(f"kappa must be non-negative, got {self.kappa}")
        if self.K < 0.0:
            raise ConfigError(f"K must be non-negative, got {self.K}")
        if self.tau_policy not in ("asymptotic", "constant"):
            raise ConfigError(f"unknown tau policy {self.tau_policy!r}")
        if self.tau_policy == "constant":
            if self.tau0 is None or not self.tau0 > 0.0:
                raise ConfigError("constant tau policy needs tau0 > 0")


@dataclass
class Primitive:
    """Primitive state (rho, u, eta, j); fields may be scalars or arrays."""

    rho: float | np.ndarray
    u: float | np.ndarray
    eta: float | np.ndarray
    j: float | np.ndarray


@dataclass
class Conserved:
    """Conserved state (rho, momentum, total energy, thermal impulse)."""

    rho: float | np.ndarray
    mom: float | np.ndarray
    E: float | np.ndarray
    j: float | np.ndarray

    def as_array(self):
        return np.stack([np.asarray(self.rho, dtype=float),
                         np.asarray(self.mom, dtype=float),
                         np.asarray(self.E, dtype=float),
                         np.asarray(self.j, dtype=float)])

    @classmethod
    def from_array(cls, q):
        return cls(q[0], q[1], q[2], q[3])


def prim_to_cons(params, prim):
    """Encode a primitive state; E collects kinetic, internal and impulse parts."""
    gas = params.gas
    rho = np.asarray(prim.rho, dtype=float)
    eps = eos.specific_internal_energy(gas, rho, prim.eta)
    E = 0.5 * rho * np.asarray(prim.u) ** 2 + rho * eps \
        + params.kappa ** 2 * np.asarray(prim.j) ** 2 / (2.0 * rho)
    return Conserved(rho=rho.copy(), mom=rho * np.asarray(prim.u), E=E,
                     j=np.asarray(prim.j, dtype=float).copy())


def internal_energy_density(params, cons):
    """rho eps = E - kinetic - impulse part; must stay positive."""
    rho = np.asarray(cons.rho, dtype=float)
    kin = 0.5 * np.asarray(cons.mom) ** 2 / rho
    imp = params.kappa ** 2 * np.asarray(cons.j) ** 2 / (2.0 * rho)
    return np.asarray(cons.E) - kin - imp


def pressure_from_cons(params, cons):
    """p = (gamma - 1)(E - rho u**2/2 - kappa**2 j**2 / (2 rho))."""
    return (params.gas.gamma - 1.0) * internal_energy_density(params, cons)


def cons_to_prim(params, cons):
    """Decode a conserved state.

    Raises
    ------
    NonPhysicalStateError
        if any cell has non-positive density or internal energy; the message
        names the first offending value.
    """
    rho = np.asarray(cons.rho, dtype=float)
    if np.any(rho <= eos.DENSITY_FLOOR):
        i = int(np.argmin(rho))
        raise NonPhysicalStateError(f"non-positive density {np.ravel(rho)[i]} in cell {i}")
    rhoe = internal_energy_density(params, cons)
    if np.any(rhoe <= 0.0):
        i = int(np.argmin(np.asarray(rhoe)))
        raise NonPhysicalStateError(
            f"non-positive internal energy {np.ravel(rhoe)[i]} in cell {i}")
    p = (params.gas.gamma - 1.0) * rhoe
    eta = eos.entropy_from_pressure(params.gas, rho, p)
    return Primitive(rho=rho.copy(), u=np.asarray(cons.mom) / rho, eta=eta,
                     j=np.asarray(cons.j, dtype=float).copy())


def flux(params, cons):
    """Physical flux f(Q) of the 1D system, returned as a (4, ...) array."""
    gas = params.gas
    rho = np.asarray(cons.rho, dtype=float)
    u = np.asarray(cons.mom) / rho
    p = pressure_from_cons(params, cons)
    theta = p / ((gas.gamma - 1.0) * gas.c_v * rho)
    j = np.asarray(cons.j, dtype=float)
    return np.stack([
        rho * u,
        np.asarray(cons.mom) * u + p,
        (np.asarray(cons.E) + p) * u + params.kappa ** 2 / rho * theta * j,
        j * u + theta,
    ])


def relax_time(params, rho, p):
    """Relaxation time of the thermal impulse.

    The asymptotic policy enforces consistency with Fourier's law:
    tau = K / (alpha(rho) theta) = K c_v (gamma - 1) rho**2 / (kappa**2 p).
    """
    if params.tau_policy == "constant":
        return np.broadcast_to(np.float64(params.tau0), np.shape(rho)).copy() \
            if np.ndim(rho) else float(params.tau0)
    if params.kappa <= 0.0:
        raise ConfigError("asymptotic tau needs kappa > 0")
    if params.K <= 0.0:
        raise ConfigError("asymptotic tau needs K > 0 (tau = 0 is forbidden)")
    gas = params.gas
    return params.K * gas.c_v * (gas.gamma - 1.0) * np.asarray(rho, dtype=float) ** 2 \
        / (params.kappa ** 2 * np.asarray(p, dtype=float))


def source(params, cons, enabled=True):
    """Relaxation source S(Q) = (0, 0, 0, -j/tau); zero when disabled."""
    q = cons.as_array() if isinstance(cons, Conserved) else np.asarray(cons)
    S = np.zeros_like(q, dtype=float)
    if not enabled:
        return S
    p = pressure_from_cons(params, cons)
    tau = relax_time(params, cons.rho, p)
    S[3] = -np.asarray(cons.j) / tau
    return S


# ---------------------------------------------------------------------------
# characteristic structure
# ---------------------------------------------------------------------------

def _speed_blocks(params, rho, eta):
    """a_p^2, a_T^2, a_pT^4 entering every characteristic-speed formula."""
    p_rho, p_eta, th_rho, th_eta = eos.thermo_derivatives(params.gas, rho, eta)
    r2 = np.asarray(rho, dtype=float) ** 2
    ap2 = p_rho
    aT2 = params.kappa ** 2 / r2 * th_eta
    apT4 = params.kappa ** 2 / r2 * p_eta * th_rho
    return ap2, aT2, apT4


def _y_pair(ap2, aT2, apT4):
    Y1 = 0.5 * (ap2 + aT2)
    Y3 = 0.5 * (ap2 - aT2)
    Y2 = np.sqrt(apT4 + Y3 ** 2)
    return Y1, Y2, Y3


def _clamp_slow(diff):
    # analytically Y1 - Y2 >= 0 because ap2*aT2 - apT4 = kappa^2 v^4 det(Hess eps)
    # >= 0; round-off can push it to about -1e-16, which we clamp, but anything
    # below -1e-12 means the state itself is bad
    if np.any(np.asarray(diff) < -1.0e-12):
        raise DomainError(f"loss of hyperbolicity: Y1 - Y2 = {np.min(diff)}")
    return np.maximum(diff, 0.0)


@dataclass(frozen=True)
class WaveSpeeds:
    """Characteristic speeds of the 1D system plus the auxiliary scalars.

    lambda1 <= lambda2 <= lambda3 <= lambda4; the outer (fast) pair is the
    acoustic family, the inner (slow) pair the thermal family.
    """

    lambda1: float | np.ndarray
    lambda2: float | np.ndarray
    lambda3: float | np.ndarray
    lambda4: float | np.ndarray
    Y1: float | np.ndarray
    Y2: float | np.ndarray
    Y3: float | np.ndarray
    a_p: float | np.ndarray
    a_T: float | np.ndarray
    a_pT: float | np.ndarray


def wave_speeds_1d(params, prim):
    """The four characteristic speeds u -+ sqrt(Y1 +- Y2).

    Parameters
    ----------
    params : ModelParams
    prim : Primitive

    Returns
    -------
    WaveSpeeds
        Speeds in ascending order together with Y1, Y2, Y3 and the acoustic,
        thermal and mixed sound speeds a_p, a_T, a_pT.
    """
    for name in ("rho", "u", "eta", "j"):
        if np.any(np.isnan(np.asarray(getattr(prim, name), dtype=float))):
            raise DomainError(f"NaN in primitive field {name}")
    ap2, aT2, apT4 = _speed_blocks(params, prim.rho, prim.eta)
    Y1, Y2, Y3 = _y_pair(ap2, aT2, apT4)
    fast = np.sqrt(Y1 + Y2)
    slow = np.sqrt(_clamp_slow(Y1 - Y2))
    u = np.asarray(prim.u, dtype=float)
    return WaveSpeeds(lambda1=u - fast, lambda2=u - slow,
                      lambda3=u + slow, lambda4=u + fast,
                      Y1=Y1, Y2=Y2, Y3=Y3,
                      a_p=np.sqrt(ap2), a_T=np.sqrt(aT2), a_pT=apT4 ** 0.25)


def max_abs_speed(params, rho, u, p):
    """|u| + sqrt(Y1 + Y2) from (rho, p) directly; avoids log/exp on hot paths."""
    gas = params.gas
    rho = np.asarray(rho, dtype=float)
    p = np.asarray(p, dtype=float)
    theta = p / ((gas.gamma - 1.0) * gas.c_v * rho)
    k2r2 = params.kappa ** 2 / rho ** 2
    ap2 = gas.gamma * p / rho
    aT2 = k2r2 * theta / gas.c_v
    apT4 = k2r2 * (p / gas.c_v) * ((gas.gamma - 1.0) * theta / rho)
    Y1, Y2, _ = _y_pair(ap2, aT2, apT4)
    return np.abs(u) + np.sqrt(Y1 + Y2)


def quasilinear_matrix_1d(params, prim):
    """Coefficient matrix A(V) of V_t + A V_x = 0 in V = (rho, u, eta, j).

    The rows are the transport equations for density, velocity, entropy and
    thermal impulse:

          / u          rho        0          0        \
          | p_rho/rho  u          p_eta/rho  0        |
      A = | -k2 j/r^3  0          u          k2/r^2   |
          \ theta_rho  j          theta_eta  u        /

    with k2 = kappa**2 and r = rho.
    """
    gas = params.gas
    rho = float(prim.rho)
    u = float(prim.u)
    j = float(prim.j)
    p_rho, p_eta, th_rho, th_eta = eos.thermo_derivatives(gas, rho, prim.eta)
    k2 = params.kappa ** 2
    return np.array([
        [u, rho, 0.0, 0.0],
        [p_rho / rho, u, p_eta / rho, 0.0],
        [-k2 * j / rho ** 3, 0.0, u, k2 / rho ** 2],
        [th_rho, j, th_eta, u],
    ])


def right_eigenvectors_1d(params, prim):
    """Right eigenvectors of A(V), columns ordered with wave_speeds_1d.

    With ups_mn(+-) = sqrt(Y_m +- Y_n) the columns are, for
    lam = u - fast, u - slow, u + slow, u + fast:

      rho        rho        rho        rho
      -ups12p    -ups12m    ups12m     ups12p
      (k/r) a    -(k/r)/a   -(k/r)/a   (k/r) a      a = ups23m/ups23p
      j - b c    j + b/c    j - b/c    j + b c      b = (r/k) ups12., c = ups23m/ups23p

    Requires kappa > 0 and distinct families; otherwise the thermal columns
    degenerate.
    """
    if params.kappa <= 0.0:
        raise DegenerateFieldError("eigenvectors need kappa > 0")
    rho = float(prim.rho)
    j = float(prim.j)
    ap2, aT2, apT4 = _speed_blocks(params, rho, prim.eta)
    Y1, Y2, Y3 = _y_pair(ap2, aT2, apT4)
    if Y2 <= 0.0 or Y2 - abs(Y3) <= 0.0 or Y1 - Y2 <= 0.0:
        raise DegenerateFieldError(
            f"coincident characteristic fields (Y1={Y1}, Y2={Y2}, Y3={Y3})")
    u12p = np.sqrt(Y1 + Y2)
    u12m = np.sqrt(Y1 - Y2)
    u23p = np.sqrt(Y2 + Y3)
    u23m = np.sqrt(Y2 - Y3)
    kr = params.kappa / rho
    rk = rho / params.kappa
    return np.array([
        [rho, rho, rho, rho],
        [-u12p, -u12m, u12m, u12p],
        [kr * u23m / u23p, -kr * u23p / u23m, -kr * u23p / u23m, kr * u23m / u23p],
        [j - rk * u12p * u23m / u23p, j + rk * u12m * u23p / u23m,
         j - rk * u12m * u23p / u23m, j + rk * u12p * u23m / u23p],
    ])


def char_field_indicator(params, prim, m, rel_step=1.0e-6):
    """grad_V lambda_m . r_m, the genuine-nonlinearity indicator of field m.

    The gradient is taken by central differences in V = (rho, u, eta, j)
    with relative step rel_step; r_m is the analytic right eigenvector.
    A zero marks a locally linearly degenerate state; for gamma = 2, c_v = 1
    the slow fields change type exactly on the hyperplane kappa v = 1.03999.
    """
    if m not in (1, 2, 3, 4):
        raise ConfigError(f"field index must be 1..4, got {m}")
    base = np.array([float(prim.rho), float(prim.u), float(prim.eta), float(prim.j)])

    def lam(vec):
        ws = wave_speeds_1d(params, Primitive(vec[0], vec[1], vec[2], vec[3]))
        return float((ws.lambda1, ws.lambda2, ws.lambda3, ws.lambda4)[m - 1])

    grad = np.empty(4)
    for i in range(4):
        h = rel_step * max(1.0, abs(base[i]))
        up = base.copy()
        dn = base.copy()
        up[i] += h
        dn[i] -= h
        grad[i] = (lam(up) - lam(dn)) / (2.0 * h)
    r = right_eigenvectors_1d(params, prim)[:, m - 1]
    return float(grad @ r)


def eigenvalues_3d(params, rho, u, eta, j):
    """Characteristic speeds of the 3D system in the x1 direction.

    Parameters
    ----------
    rho, eta : float
    u, j : array_like, shape (3,)

    Returns
    -------
    ndarray, shape (8,), sorted ascending:
        u1 -+ sqrt(Z1 +- Z2) plus u1 with multiplicity four.  The transverse
        impulse enters through a_q^2 = 2 kappa^2 (j2^2 + j3^2) / rho^2, which
        enlarges Z1 and Z2 together (Z2^2 = a_pT^4 + Z3^2 with Z3 built from
        a_p, a_T only).  The system is only weakly hyperbolic: the u1 block
        is defective, which is what the curl-cleaning variant repairs.
    """
    u = np.asarray(u, dtype=float)
    j = np.asarray(j, dtype=float)
    if u.shape != (3,) or j.shape != (3,):
        raise ConfigError("u and j must be 3-vectors")
    ap2, aT2, apT4 = _speed_blocks(params, rho, eta)
    aq2 = 2.0 * params.kappa ** 2 / float(rho) ** 2 * (j[1] ** 2 + j[2] ** 2)
    Z1 = 0.5 * (ap2 + aT2 + aq2)
    Z3 = 0.5 * (ap2 - aT2)
    Z2 = np.sqrt(apT4 + Z3 ** 2)
    fast = np.sqrt(Z1 + Z2)
    slow = np.sqrt(_clamp_slow(Z1 - Z2))
    u1 = u[0]
    return np.sort(np.array([u1 - fast, u1 - slow, u1, u1, u1, u1, u1 + slow, u1 + fast]))


def eigenvalues_curl_cleaning(params, rho, u, eta, j, a_c):
    """Characteristic speeds of the curl-cleaned (GLM) augmented system.

    The cleaning field psi rides at the constant speed a_c and splits the
    defective u1 block: the 11 speeds are u1 +- a_c (double each),
    u1 +- sqrt(Z1 +- Z2) and u1 (triple).  a_c should exceed the fast speed
    for the cleaning to be effective, but any a_c >= 0 is accepted.
    """
    if a_c < 0.0:
        raise ConfigError(f"cleaning speed must be non-negative, got {a_c}")
    chi = eigenvalues_3d(params, rho, u, eta, j)
    u1 = float(np.asarray(u, dtype=float)[0])
    extra = np.array([u1 - a_c, u1 - a_c, u1 + a_c, u1 + a_c])
    # drop one u1 from the multiplicity-four block: the cleaned system keeps three
    keep = np.concatenate([chi[:3], chi[4:], extra])
    return np.sort(keep)


# ---------------------------------------------------------------------------
# convexity of the total energy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityReport:
    """The three Sylvester conditions on the Hessian of e(u, v j, eta, v)."""

    conditions: tuple
    convex: bool


def convexity_check(params, prim):
    """Evaluate the sufficient convexity conditions of the specific total energy.

    In the variables (u, v j, eta, v) the Hessian is block diagonal up to the
    (v j, v) coupling, and positivity reduces to

        eps_etaeta > 0,
        alpha(1/v)/v > 0,
        (alpha alpha'' - 2 alpha'^2) (j^2 / 2 v^3) eps_etaeta
            + alpha(1/v) det Hess_{(v, eta)} eps > 0.

    For alpha = kappa**2 / rho the combination alpha alpha'' - 2 alpha'^2
    vanishes identically, so the third condition carries no j dependence and
    convexity is equivalent to 1/alpha being concave plus convexity of eps.
    With kappa = 0 the model reduces to gas dynamics and only the convexity
    of eps is required.
    """
    gas = params.gas
    rho = float(prim.rho)
    v = 1.0 / rho
    j = float(prim.j)
    p = float(eos.pressure(gas, rho, prim.eta))
    theta = float(eos.temperature(gas, rho, prim.eta))
    eps_ee = theta / gas.c_v
    eps_vv = gas.gamma * p * rho
    eps_ve = -p / gas.c_v
    det_eps = eps_vv * eps_ee - eps_ve ** 2

    if params.kappa == 0.0:
        conds = (eps_ee, det_eps)
        return ConvexityReport(conditions=conds, convex=bool(eps_ee > 0.0 and det_eps > 0.0))

    k2 = params.kappa ** 2
    alpha = k2 * v          # alpha(1/v)
    alpha_p = -k2 * v ** 2  # alpha'(1/v)
    alpha_pp = 2.0 * k2 * v ** 3
    cond1 = eps_ee
    cond2 = alpha / v
    cond3 = (alpha * alpha_pp - 2.0 * alpha_p ** 2) * j ** 2 / (2.0 * v ** 3) * eps_ee \
        + alpha * det_eps
    conds = (cond1, cond2, cond3)
    return ConvexityReport(conditions=conds,
                           convex=bool(cond1 > 0.0 and cond2 > 0.0 and cond3 > 0.0))


def energy_hessian(params, prim):
    """Analytic Hessian of e(u, w, eta, v) with w = v j, for cross-checks.

    Order of variables: (u, w, eta, v).
    """
    gas = params.gas
    rho = float(prim.rho)
    v = 1.0 / rho
    j = float(prim.j)
    p = float(eos.pressure(gas, rho, prim.eta))
    theta = float(eos.temperature(gas, rho, prim.eta))
    eps_ee = theta / gas.c_v
    eps_vv = gas.gamma * p * rho
    eps_ve = -p / gas.c_v
    k2 = params.kappa ** 2
    alpha = k2 * v
    alpha_p = -k2 * v ** 2
    alpha_pp = 2.0 * k2 * v ** 3
    h_wv = -j * (alpha_p + v * alpha) / v ** 2
    h_vv = eps_vv + j ** 2 / (2.0 * v ** 3) * (alpha_pp + 4.0 * v * alpha_p + 2.0 * v ** 2 * alpha)
    return np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, alpha / v, 0.0, h_wv],
        [0.0, 0.0, eps_ee, eps_ve],
        [0.0, h_wv, eps_ve, h_vv],
    ])
