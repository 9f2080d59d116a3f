"""Finite-volume solver for the relaxation system and its Fourier limit.

Space: MUSCL reconstruction of the conserved variables (minmod or central
slopes, two ghost cells) with a Rusanov numerical flux.  Time: the two-stage
second-order IMEX scheme with explicit transport and implicit relaxation
source; the implicit half is a scalar solve per cell because the source acts
on the impulse component only and conserves everything else.

The parabolic reference scheme ("euler_fourier") evolves the three gas
components with the same explicit tableau, no impulse field, and an added
interface heat flux -K dtheta/dx on the energy equation.  Its step combines
the acoustic CFL bound with the diffusion bound 0.9 dx^2 / (2 D) harmonically
(both dissipation mechanisms peak at the grid mode, so their limits add);
the relevant diffusivity is D = K / (rho c_v), the rate at which the energy
field actually diffuses, not the conductivity itself.

Runs are deterministic: identical configs produce identical outputs.
"""

import time as _time

import numpy as np
from dataclasses import dataclass, field

from . import eos, model
from .errors import ConfigError, NonPhysicalStateError, NumericalError

# two-stage IMEX weights; both tableaux are second order
DELTA1 = 1.0 - 1.0 / np.sqrt(2.0)
DELTA2 = 1.0 - 1.0 / (2.0 * DELTA1)

_SCHEMES = ("hyperbolic", "euler_fourier")
_LIMITERS = ("minmod", "none")
_BCS = ("transmissive", "periodic")


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; validated on construction."""

    x_left: float
    x_right: float
    n_cells: int
    cfl: float
    t_end: float
    model: model.ModelParams
    init: object                      # callable(x) -> (rho, u, eta, j)
    scheme: str = "hyperbolic"
    limiter: str = "minmod"
    bc: str = "transmissive"
    relaxation: bool = True
    output_times: tuple = ()

    def __post_init__(self):
        if not self.x_right > self.x_left:
            raise ConfigError(f"empty domain [{self.x_left}, {self.x_right}]")
        if self.n_cells < 4:
            raise ConfigError(f"need at least 4 cells, got {self.n_cells}")
        if not 0.0 < self.cfl < 1.0:
            raise ConfigError(f"cfl must lie in (0, 1), got {self.cfl}")
        if self.t_end < 0.0:
            raise ConfigError(f"t_end must be non-negative, got {self.t_end}")
        if self.scheme not in _SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.limiter not in _LIMITERS:
            raise ConfigError(f"unknown limiter {self.limiter!r}")
        if self.bc not in _BCS:
            raise ConfigError(f"unknown bc {self.bc!r}")
        if not callable(self.init):
            raise ConfigError("init must be callable on cell centers")
        for t in self.output_times:
            if t < 0.0 or t > self.t_end + 1.0e-12 * max(self.t_end, 1.0):
                raise ConfigError(f"output time {t} outside [0, {self.t_end}]")

    @property
    def dx(self):
        return (self.x_right - self.x_left) / self.n_cells

    def centers(self):
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class SolutionFrame:
    """Cell-average fields at one instant."""

    t: float
    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    eta: np.ndarray
    j: np.ndarray
    p: np.ndarray
    theta: np.ndarray
    E: np.ndarray

    @property
    def mom(self):
        return self.rho * self.u


@dataclass
class Diagnostics:
    """Per-step bookkeeping over a run.

    Totals are domain integrals (dx-weighted sums) recorded after every
    step, with the initial state in row 0.  net_boundary_inflow is the
    time-integrated flux entering at the left edge minus the flux leaving
    at the right, using the same flux combination the update applied, so
    total(t) - total(0) - inflow vanishes to round-off for transmissive
    runs of the homogeneous system.
    """

    times: np.ndarray
    dts: np.ndarray
    mass: np.ndarray
    momentum: np.ndarray
    energy: np.ndarray
    entropy: np.ndarray
    fallback_cells: int
    net_boundary_inflow: np.ndarray
    wall_time: float


def _frame_from_cons(params, t, x, Q):
    prim = model.cons_to_prim(params, model.Conserved.from_array(Q))
    p = model.pressure_from_cons(params, model.Conserved.from_array(Q))
    gas = params.gas
    theta = p / ((gas.gamma - 1.0) * gas.c_v * Q[0])
    return SolutionFrame(t=float(t), x=x.copy(), rho=Q[0].copy(),
                         u=np.asarray(prim.u).copy(), eta=np.asarray(prim.eta).copy(),
                         j=Q[3].copy(), p=np.asarray(p), theta=np.asarray(theta),
                         E=Q[2].copy())


def _cons_from_frame(params, frame):
    prim = model.Primitive(rho=frame.rho, u=frame.u, eta=frame.eta, j=frame.j)
    return model.prim_to_cons(params, prim).as_array()


def _pad(Q, bc):
    G = np.empty((4, Q.shape[1] + 4))
    G[:, 2:-2] = Q
    if bc == "periodic":
        G[:, :2] = Q[:, -2:]
        G[:, -2:] = Q[:, :2]
    else:
        G[:, :2] = Q[:, :1]
        G[:, -2:] = Q[:, -1:]
    return G


def minmod_slope(left_diff, right_diff):
    """Minmod of the one-sided differences, elementwise."""
    a = np.asarray(left_diff, dtype=float)
    b = np.asarray(right_diff, dtype=float)
    return np.where(a * b <= 0.0, 0.0, np.where(np.abs(a) < np.abs(b), a, b))


def muscl_reconstruct(params, Qpad, limiter):
    """Face states from padded cell averages of the conserved variables.

    Returns (QL, QR, fallback), the states at the left and right face of
    every non-ghost-boundary cell (all but the outermost padded cell on
    each side), and how many cells fell back to first order because a
    reconstructed face had non-positive density or pressure.
    """
    dl = Qpad[:, 1:-1] - Qpad[:, :-2]
    dr = Qpad[:, 2:] - Qpad[:, 1:-1]
    if limiter == "minmod":
        sig = minmod_slope(dl, dr)
    else:
        sig = 0.5 * (dl + dr)
    mid = Qpad[:, 1:-1]
    QL = mid - 0.5 * sig
    QR = mid + 0.5 * sig

    bad = np.zeros(mid.shape[1], dtype=bool)
    for F in (QL, QR):
        with np.errstate(invalid="ignore"):
            p = _pressure_arr(params, F)
            bad |= (F[0] <= model_density_floor()) | ~np.isfinite(p) | (p <= 0.0)
    fallback = int(bad.sum())
    if fallback:
        QL[:, bad] = mid[:, bad]
        QR[:, bad] = mid[:, bad]
    return QL, QR, fallback


def model_density_floor():
    return eos.DENSITY_FLOOR


def _pressure_arr(params, Q):
    gas = params.gas
    kin = 0.5 * Q[1] ** 2 / Q[0]
    imp = 0.5 * params.kappa ** 2 * Q[3] ** 2 / Q[0]
    return (gas.gamma - 1.0) * (Q[2] - kin - imp)


def rusanov_flux(params, a, b):
    """Single-speed upwind flux between face states a (left) and b (right)."""
    single = np.ndim(a) == 1
    a = np.asarray(a, dtype=float).reshape(4, -1)
    b = np.asarray(b, dtype=float).reshape(4, -1)
    pa = _pressure_arr(params, a)
    pb = _pressure_arr(params, b)
    with np.errstate(invalid="ignore"):
        sa = model.max_abs_speed(params, a[0], a[1] / a[0], pa)
        sb = model.max_abs_speed(params, b[0], b[1] / b[0], pb)
    s = np.maximum(sa, sb)
    fa = model.flux(params, model.Conserved.from_array(a))
    fb = model.flux(params, model.Conserved.from_array(b))
    F = 0.5 * (fa + fb) - 0.5 * s * (b - a)
    return F[:, 0] if single else F


def _divergence(params, Qpad, dx, limiter):
    # the reconstruction spans one ghost cell on each side, so consecutive
    # face pairs are exactly the N+1 physical interfaces
    QL, QR, nfb = muscl_reconstruct(params, Qpad, limiter)
    F = rusanov_flux(params, QR[:, :-1], QL[:, 1:])
    div = (F[:, 1:] - F[:, :-1]) / dx
    return div, F, nfb


def _euler_pressure(params, Q):
    return (params.gas.gamma - 1.0) * (Q[2] - 0.5 * Q[1] ** 2 / Q[0])


def _ef_divergence(params, Qpad, dx, limiter):
    gas = params.gas
    dl = Qpad[:3, 1:-1] - Qpad[:3, :-2]
    dr = Qpad[:3, 2:] - Qpad[:3, 1:-1]
    sig = minmod_slope(dl, dr) if limiter == "minmod" else 0.5 * (dl + dr)
    mid = Qpad[:3, 1:-1]
    QL = mid - 0.5 * sig
    QR = mid + 0.5 * sig
    bad = np.zeros(mid.shape[1], dtype=bool)
    for F in (QL, QR):
        p = (gas.gamma - 1.0) * (F[2] - 0.5 * F[1] ** 2 / F[0])
        bad |= (F[0] <= model_density_floor()) | ~np.isfinite(p) | (p <= 0.0)
    nfb = int(bad.sum())
    if nfb:
        QL[:, bad] = mid[:, bad]
        QR[:, bad] = mid[:, bad]

    a = QR[:, :-1]
    b = QL[:, 1:]
    pa = (gas.gamma - 1.0) * (a[2] - 0.5 * a[1] ** 2 / a[0])
    pb = (gas.gamma - 1.0) * (b[2] - 0.5 * b[1] ** 2 / b[0])
    with np.errstate(invalid="ignore"):
        ca = np.sqrt(gas.gamma * pa / a[0])
        cb = np.sqrt(gas.gamma * pb / b[0])
    s = np.maximum(np.abs(a[1] / a[0]) + ca, np.abs(b[1] / b[0]) + cb)

    def eflux(Q, p):
        u = Q[1] / Q[0]
        return np.stack([Q[1], Q[1] * u + p, (Q[2] + p) * u])

    F3 = 0.5 * (eflux(a, pa) + eflux(b, pb)) - 0.5 * s * (b - a)

    # interface heat flux from cell-average temperatures of the neighbors
    pc = (gas.gamma - 1.0) * (Qpad[2] - 0.5 * Qpad[1] ** 2 / Qpad[0])
    theta = pc / ((gas.gamma - 1.0) * gas.c_v * Qpad[0])
    dth = (theta[2:] - theta[1:-1]) / dx      # gradient at right face of cell i+1
    F3[2] = F3[2] - params.K * dth[:-1]

    F = np.zeros((4, F3.shape[1]))
    F[:3] = F3
    div = (F[:, 1:] - F[:, :-1]) / dx
    return div, F, nfb


def euler_fourier_rhs(params, frame):
    """Right-hand side -div F of the parabolic reference scheme on a frame.

    Transmissive padding; mainly a testing hook, run() drives the same
    kernel directly.
    """
    Q = _cons_from_frame(params, frame)
    dx = float(frame.x[1] - frame.x[0])
    div, _, _ = _ef_divergence(params, _pad(Q, "transmissive"), dx, "minmod")
    return -div


def implicit_source_solve(params, Q, a_dt):
    """Solve j = j_explicit - a_dt j / tau(rho, p(j)) per cell.

    Q holds the explicit part of the stage; only its impulse row is
    replaced.  With a constant relaxation time this is one division.  With
    the asymptotic law tau is proportional to 1/p and p depends on j
    through the impulse energy, which turns the stage equation into a
    cell-local cubic

        j (1 + C p(j)) = j_explicit,   p(j) = (gamma-1)(base - kappa^2 j^2 / (2 rho)).

    Of its positive roots only the smallest continues the non-stiff branch
    (the other sits near the vacuum-pressure bound and is an artifact of
    tau blowing up as p drops); Newton from j = 0 walks up the concave
    profile and converges to exactly that root without ever evaluating a
    non-positive pressure.

    Returns the new impulse row.
    """
    je = Q[3]
    if params.tau_policy == "constant":
        return je / (1.0 + a_dt / params.tau0)

    gas = params.gas
    g1 = gas.gamma - 1.0
    base = Q[2] - 0.5 * Q[1] ** 2 / Q[0]    # E minus kinetic part, fixed
    if np.any(base <= 0.0):
        i = int(np.argmin(base))
        raise NonPhysicalStateError(
            f"non-positive internal energy {base[i]} in cell {i} "
            "entering the source solve")
    C = a_dt * params.kappa ** 2 / (params.K * gas.c_v * g1 * Q[0] ** 2)
    A3 = C * g1 * params.kappa ** 2 / (2.0 * Q[0])
    A1 = 1.0 + C * g1 * base
    y = np.abs(je)

    j = np.zeros_like(y)
    for _ in range(80):
        g = (A1 - A3 * j ** 2) * j - y
        gp = A1 - 3.0 * A3 * j ** 2
        if np.any(gp <= 0.0):
            i = int(np.argmin(gp))
            raise NumericalError(
                f"source solve found no impulse with positive pressure in "
                f"cell {i} (explicit impulse {je[i]})")
        jn = j - g / gp
        if np.all(np.abs(jn - j) < 1.0e-13 * (1.0 + np.abs(jn))):
            j = jn
            break
        j = jn
    else:
        res = np.max(np.abs((A1 - A3 * j ** 2) * j - y) / (1.0 + y))
        if res > 1.0e-10:
            raise NumericalError(f"source solve stalled, residual {res}")
    return np.sign(je) * j


def _check_positive(params, Q, where):
    if np.any(Q[0] <= 0.0) or not np.all(np.isfinite(Q[0])):
        i = int(np.argmin(np.nan_to_num(Q[0], nan=-np.inf)))
        raise NumericalError(f"non-positive density {Q[0][i]} in cell {i} {where}")
    p = _pressure_arr(params, Q)
    if np.any(p <= 0.0) or not np.all(np.isfinite(p)):
        i = int(np.argmin(np.nan_to_num(p, nan=-np.inf)))
        raise NumericalError(f"non-positive pressure {p[i]} in cell {i} {where}")


def _step(params, Q, dx, dt, scheme, bc, limiter, relaxation):
    """One IMEX step; returns (Q_new, applied interface fluxes, fallbacks)."""
    if scheme == "euler_fourier":
        div0, F0, n0 = _ef_divergence(params, _pad(Q, bc), dx, limiter)
        Qs = Q - DELTA1 * dt * div0
        div1, F1, n1 = _ef_divergence(params, _pad(Qs, bc), dx, limiter)
        Qn = Q - dt * (DELTA2 * div0 + (1.0 - DELTA2) * div1)
        return Qn, DELTA2 * F0 + (1.0 - DELTA2) * F1, n0 + n1

    div0, F0, n0 = _divergence(params, _pad(Q, bc), dx, limiter)
    Qs = Q - DELTA1 * dt * div0
    if relaxation:
        js = implicit_source_solve(params, Qs, DELTA1 * dt)
        Ss = (js - Qs[3]) / (DELTA1 * dt)
        Qs = Qs.copy()
        Qs[3] = js
    div1, F1, n1 = _divergence(params, _pad(Qs, bc), dx, limiter)
    Qn = Q - dt * (DELTA2 * div0 + (1.0 - DELTA2) * div1)
    if relaxation:
        Qn[3] = Qn[3] + dt * (1.0 - DELTA1) * Ss
        Qn[3] = implicit_source_solve(params, Qn, DELTA1 * dt)
    return Qn, DELTA2 * F0 + (1.0 - DELTA2) * F1, n0 + n1


def ars222_step(params, frame, dt, scheme="hyperbolic", bc="transmissive",
                limiter="minmod", relaxation=True):
    """Advance a frame by one step of the two-stage IMEX scheme.

    For a spatially uniform frame the transport terms vanish and the update
    reduces to the relaxation tableau alone: with constant tau the stage
    impulse is j / (1 + delta1 dt / tau) exactly.
    """
    Q = _cons_from_frame(params, frame)
    dx = float(frame.x[1] - frame.x[0])
    Qn, _, _ = _step(params, Q, dx, dt, scheme, bc, limiter, relaxation)
    _check_positive(params, Qn, f"after step from t={frame.t}")
    return _frame_from_cons(params, frame.t + dt, frame.x, Qn)


def _dt_bound(params, scheme, dx, cfl, rho, u, p, t):
    if scheme == "hyperbolic":
        smax = float(np.max(model.max_abs_speed(params, rho, u, p)))
    else:
        smax = float(np.max(np.abs(u) + np.sqrt(params.gas.gamma * p / rho)))
    if not np.isfinite(smax) or smax <= 0.0:
        raise NumericalError(f"no positive wave speed at t={t}")
    dt = cfl * dx / smax
    if scheme == "euler_fourier" and params.K > 0.0:
        diff = params.K / (params.gas.c_v * float(np.min(rho)))
        dt_diff = 0.9 * dx ** 2 / (2.0 * diff)
        dt = 1.0 / (1.0 / dt + 1.0 / dt_diff)
    return dt


def timestep(params, frame, cfl, scheme="hyperbolic"):
    """Stable time step for a frame.

    The acoustic CFL bound, harmonically combined for the parabolic scheme
    with the diffusion bound 0.9 dx^2 / (2 D), D = K / (rho c_v).
    """
    dx = float(frame.x[1] - frame.x[0])
    return _dt_bound(params, scheme, dx, cfl, frame.rho, frame.u, frame.p,
                     frame.t)


def _totals(params, Q, dx):
    gas = params.gas
    p = _pressure_arr(params, Q)
    eta = eos.entropy_from_pressure(gas, Q[0], p)
    return (dx * float(np.sum(Q[0])), dx * float(np.sum(Q[1])),
            dx * float(np.sum(Q[2])), dx * float(np.sum(Q[0] * eta)))


def run(config):
    """Integrate a RunConfig to t_end; returns (frames, diagnostics).

    Frames are produced exactly at the requested output times (the step is
    clipped to land on them, never interpolated); with no output_times a
    single frame at t_end is returned, and t_end = 0 echoes the initial
    data.  Any numerical failure aborts with the time and cell in the
    message.
    """
    wall0 = _time.perf_counter()
    params = config.model
    x = config.centers()
    dx = config.dx
    rho, u, eta, j = (np.broadcast_to(np.asarray(a, dtype=float), x.shape).copy()
                      for a in config.init(x))
    Q = model.prim_to_cons(params, model.Primitive(rho, u, eta, j)).as_array()
    if config.scheme == "euler_fourier" and np.any(j != 0.0):
        raise ConfigError("the parabolic reference scheme carries no impulse "
                          "field; initialize j = 0")
    _check_positive(params, Q, "in the initial data")

    outs = sorted(set(float(t) for t in config.output_times))
    if not outs:
        outs = [config.t_end]
    tiny = 1.0e-12 * max(config.t_end, 1.0)

    frames = []
    iout = 0
    while iout < len(outs) and outs[iout] <= tiny:
        frames.append(_frame_from_cons(params, 0.0, x, Q))
        iout += 1

    rec_t, rec_dt = [0.0], [0.0]
    m0, mo0, e0, s0 = _totals(params, Q, dx)
    rec_m, rec_mo, rec_e, rec_s = [m0], [mo0], [e0], [s0]
    fallbacks = 0
    inflow = np.zeros(4)

    t = 0.0
    while t < config.t_end - tiny:
        p = _pressure_arr(params, Q)
        dt = _dt_bound(params, config.scheme, dx, config.cfl, Q[0], Q[1] / Q[0],
                       p, t)
        target = outs[iout] if iout < len(outs) else config.t_end
        dt = min(dt, target - t, config.t_end - t)
        if dt < 1.0e-14 * max(config.t_end, 1.0):
            raise NumericalError(f"time step underflow at t={t}: dt={dt}")

        try:
            Q, G, nfb = _step(params, Q, dx, dt, config.scheme, config.bc,
                              config.limiter, config.relaxation)
            _check_positive(params, Q, f"after the step to t={t + dt}")
        except (NonPhysicalStateError, NumericalError) as exc:
            raise NumericalError(f"aborted at t={t + dt}: {exc}") from exc

        t += dt
        fallbacks += nfb
        inflow += dt * (G[:, 0] - G[:, -1])
        m, mo, e, s = _totals(params, Q, dx)
        rec_t.append(t); rec_dt.append(dt)
        rec_m.append(m); rec_mo.append(mo); rec_e.append(e); rec_s.append(s)

        while iout < len(outs) and t >= outs[iout] - tiny:
            frames.append(_frame_from_cons(params, outs[iout], x, Q))
            iout += 1

    while iout < len(outs):
        frames.append(_frame_from_cons(params, outs[iout], x, Q))
        iout += 1

    diag = Diagnostics(times=np.array(rec_t), dts=np.array(rec_dt),
                       mass=np.array(rec_m), momentum=np.array(rec_mo),
                       energy=np.array(rec_e), entropy=np.array(rec_s),
                       fallback_cells=fallbacks,
                       net_boundary_inflow=inflow,
                       wall_time=_time.perf_counter() - wall0)
    return frames, diag
