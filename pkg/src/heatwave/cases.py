"""Catalog of reference Riemann problems and the smooth convergence setup.

Each catalog entry fixes the two states, the split location, the gas and
coupling parameters, and the run defaults (domain, resolution, CFL, output
times).  Desk-scale resolutions are deliberately coarser than the published
ones; pass paper_scale=True to to_config for the full grids.

The jump cases come in two kinds.  sod_heat and shocktube_hyp start from
the classical shock-tube data with heat conduction added; the impulse
variants keep states identical so the relaxation and parabolic runs are
directly comparable.  expansion_shock, compression_fan and shock_splitting
start from exact jump-connected pairs built by the shock construction:
the first is an admissible expansion jump that must travel undistorted,
the second swaps its states into an inadmissible orientation that must
disintegrate into a fan, and the third uses a coupling above the critical
value where the admissible compressive jump sheds a slow-family fan behind
a leading discontinuity.
"""

import numpy as np
from dataclasses import dataclass

from . import eos, hugoniot, model, solver
from .errors import ConfigError, DomainError

CASE_NAMES = ("sod_heat", "shocktube_hyp", "expansion_shock",
              "compression_fan", "shock_splitting")


@dataclass(frozen=True)
class RiemannProblem:
    """Two piecewise-constant states plus run defaults."""

    name: str
    x_split: float
    left: model.Primitive
    right: model.Primitive
    left_rup: tuple          # (rho, u, p, j), the pressure form
    right_rup: tuple
    params: model.ModelParams
    domain: tuple
    t_end: float
    output_times: tuple
    n_desk: int
    n_paper: int
    cfl: float
    scheme: str
    relaxation: bool


def prim_from_pressure(gas, rho, u, p, j):
    """Primitive state from the (rho, u, p, j) pressure form."""
    eta = float(eos.entropy_from_pressure(gas, rho, p))
    return model.Primitive(rho=rho, u=u, eta=eta, j=j)


def _sod_states(gas):
    left = prim_from_pressure(gas, 1.0, 0.0, 1.0, 0.0)
    right = prim_from_pressure(gas, 0.1, 0.0, 0.1, 0.0)
    return left, right, (1.0, 0.0, 1.0, 0.0), (0.1, 0.0, 0.1, 0.0)


def _rup(gas, prim):
    p = float(eos.pressure(gas, prim.rho, prim.eta))
    return (float(prim.rho), float(prim.u), p, float(prim.j))


def catalog(name, kappa=None, K=None):
    """Look up a reference problem by name.

    kappa only varies for shocktube_hyp (published values 0.01 and 1) and
    K for the conduction cases; requesting a variant of a case whose
    coupling is part of its construction is a configuration error.
    """
    if name not in CASE_NAMES:
        raise ConfigError(f"unknown case {name!r}; known cases: "
                          + ", ".join(CASE_NAMES))
    if kappa is not None and name != "shocktube_hyp":
        raise ConfigError(f"case {name} does not take a kappa override")
    if K is not None and name not in ("sod_heat", "shocktube_hyp"):
        raise ConfigError(f"case {name} does not take a K override")

    if name == "sod_heat":
        gas = eos.GasParams(gamma=1.4, c_v=1.5)
        left, right, lrup, rrup = _sod_states(gas)
        params = model.ModelParams(gas=gas, kappa=0.0,
                                   K=1.0e-3 if K is None else K)
        return RiemannProblem(name=name, x_split=0.5, left=left, right=right,
                              left_rup=lrup, right_rup=rrup, params=params,
                              domain=(0.0, 1.0), t_end=0.2,
                              output_times=(0.2,), n_desk=2000, n_paper=10000,
                              cfl=0.9, scheme="euler_fourier", relaxation=False)

    if name == "shocktube_hyp":
        gas = eos.GasParams(gamma=1.4, c_v=1.5)
        left, right, lrup, rrup = _sod_states(gas)
        kap = 1.0 if kappa is None else kappa
        params = model.ModelParams(gas=gas, kappa=kap,
                                   K=1.0e-3 if K is None else K,
                                   tau_policy="asymptotic")
        # the stiff source at kappa near 1 wants a smaller acoustic step
        cfl = 0.5 if kap >= 1.0 else 0.9
        return RiemannProblem(name=name, x_split=0.5, left=left, right=right,
                              left_rup=lrup, right_rup=rrup, params=params,
                              domain=(0.0, 1.0), t_end=0.5,
                              output_times=(0.5,), n_desk=2000, n_paper=10000,
                              cfl=cfl, scheme="hyperbolic", relaxation=True)

    gas = eos.GasParams(gamma=2.0, c_v=1.0)
    right = prim_from_pressure(gas, 1.0, 0.0, 1.0, 0.0)

    if name in ("expansion_shock", "compression_fan"):
        params = model.ModelParams(gas=gas, kappa=0.8)
        sc = hugoniot.construct_shock_state(params, right, 1.25, "thermal",
                                            "right_moving")
        if name == "expansion_shock":
            return RiemannProblem(name=name, x_split=0.5, left=sc.left,
                                  right=right, left_rup=_rup(gas, sc.left),
                                  right_rup=_rup(gas, right), params=params,
                                  domain=(0.0, 1.0), t_end=0.5,
                                  output_times=(0.5,), n_desk=2000,
                                  n_paper=10000, cfl=0.9,
                                  scheme="hyperbolic", relaxation=False)
        # the same pair with the states swapped is no longer entropy
        # admissible and must break up into a fan
        return RiemannProblem(name=name, x_split=0.2, left=right,
                              right=sc.left, left_rup=_rup(gas, right),
                              right_rup=_rup(gas, sc.left), params=params,
                              domain=(0.0, 1.0), t_end=1.0,
                              output_times=(0.5, 1.0), n_desk=20000,
                              n_paper=100000, cfl=0.9,
                              scheme="hyperbolic", relaxation=False)

    # shock_splitting
    params = model.ModelParams(gas=gas, kappa=1.3)
    sc = hugoniot.construct_shock_state(params, right, 0.635, "thermal",
                                        "right_moving")
    return RiemannProblem(name=name, x_split=0.5, left=sc.left, right=right,
                          left_rup=_rup(gas, sc.left),
                          right_rup=_rup(gas, right), params=params,
                          domain=(0.0, 2.0), t_end=0.2,
                          output_times=(0.1, 0.2), n_desk=20000,
                          n_paper=100000, cfl=0.5,
                          scheme="hyperbolic", relaxation=False)


def piecewise_init(left, right, x_split):
    """Initial-data callable for two constant states."""

    def init(x):
        m = x < x_split
        return (np.where(m, left.rho, right.rho),
                np.where(m, left.u, right.u),
                np.where(m, left.eta, right.eta),
                np.where(m, left.j, right.j))

    return init


def to_config(problem, n_cells=None, paper_scale=False, **overrides):
    """Materialize a RiemannProblem into a RunConfig.

    Keyword overrides are passed through to RunConfig (cfl, t_end,
    output_times, limiter, bc, ...).
    """
    n = n_cells if n_cells is not None else (
        problem.n_paper if paper_scale else problem.n_desk)
    kw = dict(x_left=problem.domain[0], x_right=problem.domain[1],
              n_cells=int(n), cfl=problem.cfl, t_end=problem.t_end,
              model=problem.params,
              init=piecewise_init(problem.left, problem.right, problem.x_split),
              scheme=problem.scheme, limiter="minmod", bc="transmissive",
              relaxation=problem.relaxation, output_times=problem.output_times)
    kw.update(overrides)
    return solver.RunConfig(**kw)


def smooth_periodic(n_cells=128, limiter="none", t_end=0.1, cfl=0.9):
    """Smooth periodic setup used for convergence measurement.

    Homogeneous run (no relaxation) of small sinusoidal perturbations on
    the unit rest state, gamma = 2, c_v = 1, kappa = 1.
    """
    gas = eos.GasParams(gamma=2.0, c_v=1.0)
    params = model.ModelParams(gas=gas, kappa=1.0)

    def init(x):
        return (1.0 + 0.2 * np.sin(2.0 * np.pi * x),
                0.1 * np.sin(2.0 * np.pi * x),
                0.1 * np.cos(2.0 * np.pi * x),
                0.05 * np.cos(2.0 * np.pi * x))

    return solver.RunConfig(x_left=0.0, x_right=1.0, n_cells=n_cells, cfl=cfl,
                            t_end=t_end, model=params, init=init,
                            scheme="hyperbolic", limiter=limiter,
                            bc="periodic", relaxation=False,
                            output_times=(t_end,))


def self_similar_transform(frame, x_s, D):
    """Shifted similarity coordinate (x - x_s - D t) / t for a frame.

    Profiles of a structure moving at speed D collapse in this variable;
    t = 0 has no similarity coordinate.
    """
    if frame.t <= 0.0:
        raise DomainError("self-similar transform needs t > 0")
    return (frame.x - x_s - D * frame.t) / frame.t
