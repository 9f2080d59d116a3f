"""Command-line front end.

Subcommands: run (config file), case (catalog entry), hugoniot, dispersion,
eigen, convergence.  CSV output is deterministic: 17 significant digits,
identical bytes on identical inputs.  The output directory is taken from
-o/--out, then the HEATWAVE_OUT environment variable, then the working
directory.

Exit codes: 0 success, 2 configuration problems (bad flags, unknown case or
config key, malformed files), 3 numerical failures (the message names the
time and cell).
"""

import argparse
import os
import sys
import time

import numpy as np

from . import cases, dispersion, eos, hugoniot, model, solver
from .errors import (ConfigError, DomainError, NonPhysicalStateError,
                     NumericalError, StabilityError)


def _out_dir(args):
    d = args.out or os.environ.get("HEATWAVE_OUT") or "."
    os.makedirs(d, exist_ok=True)
    return d


def _write_csv(path, header, columns):
    rows = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    with open(path, "w") as f:
        f.write(header + "\n")
        for row in rows:
            f.write(",".join("%.17g" % v for v in row) + "\n")


def _frame_columns(frame):
    return (frame.x, frame.rho, frame.u, frame.p, frame.eta, frame.theta,
            frame.j, frame.E)


PROFILE_HEADER = "x,rho,u,p,eta,theta,j,E"
DIAG_HEADER = "t,dt,mass,momentum,energy,entropy"


def _emit_run(base, config, out):
    t0 = time.perf_counter()
    frames, diag = solver.run(config)
    wall = time.perf_counter() - t0
    for fr in frames:
        _write_csv(os.path.join(out, f"{base}_t{fr.t:g}.csv"),
                   PROFILE_HEADER, _frame_columns(fr))
    _write_csv(os.path.join(out, f"{base}_diag.csv"), DIAG_HEADER,
               (diag.times, diag.dts, diag.mass, diag.momentum, diag.energy,
                diag.entropy))
    print(f"{base}: {len(diag.dts) - 1} steps, mass={diag.mass[-1]:.12g}, "
          f"momentum={diag.momentum[-1]:.12g}, energy={diag.energy[-1]:.12g}, "
          f"entropy={diag.entropy[-1]:.12g}, "
          f"fallback_cells={diag.fallback_cells}, wall={wall:.2f}s")
    return frames, diag


def cmd_case(args):
    problem = cases.catalog(args.name, kappa=args.kappa, K=args.K)
    overrides = {}
    if args.cfl is not None:
        overrides["cfl"] = args.cfl
    config = cases.to_config(problem, n_cells=args.n,
                             paper_scale=args.paper_scale, **overrides)
    out = _out_dir(args)
    frames, _ = _emit_run(args.name, config, out)

    if args.name == "shocktube_hyp":
        # quasi-equilibrium comparison: the relaxed impulse approaches
        # -tau dtheta/dx, so j/tau is plotted against the gradient
        for fr in frames:
            tau = model.relax_time(config.model, fr.rho, fr.p)
            dth = np.gradient(fr.theta, fr.x)
            _write_csv(os.path.join(out, f"{args.name}_fourier_t{fr.t:g}.csv"),
                       "x,jdivtau,dtheta_dx", (fr.x, fr.j / tau, dth))
    return 0


_RUN_KEYS = ("domain", "n_cells", "cfl", "t_end", "gamma", "c_v", "kappa",
             "K", "tau", "scheme", "limiter", "bc", "relaxation", "ic",
             "left", "right", "x_split", "output_times")


def _parse_config_file(path):
    values = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _RUN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}; "
                              f"valid keys: {', '.join(_RUN_KEYS)}")
        try:
            values[key] = _convert_key(key, val)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}")
    return values


def _floats(val):
    parts = val.replace(",", " ").split()
    return tuple(float(p) for p in parts)


def _convert_key(key, val):
    if key in ("n_cells",):
        return int(val)
    if key in ("cfl", "t_end", "gamma", "c_v", "kappa", "K", "x_split"):
        return float(val)
    if key == "domain":
        d = _floats(val)
        if len(d) != 2:
            raise ValueError(f"domain needs two numbers, got {val!r}")
        return d
    if key in ("left", "right"):
        s = _floats(val)
        if len(s) != 4:
            raise ValueError(f"{key} needs four numbers (rho u p j), got {val!r}")
        return s
    if key == "output_times":
        return _floats(val)
    if key == "tau":
        if val == "asymptotic":
            return val
        return float(val)
    if key == "relaxation":
        low = val.lower()
        if low in ("on", "true", "1", "yes"):
            return True
        if low in ("off", "false", "0", "no"):
            return False
        raise ValueError(f"relaxation must be on or off, got {val!r}")
    if key in ("scheme", "limiter", "bc", "ic"):
        return val
    raise ValueError(f"unhandled key {key}")


def cmd_run(args):
    values = _parse_config_file(args.config_file)

    if "ic" in values:
        problem = cases.catalog(values["ic"])
        base = problem.name
        gas = problem.params.gas
        gamma = values.get("gamma", gas.gamma)
        c_v = values.get("c_v", gas.c_v)
        kappa = values.get("kappa", problem.params.kappa)
        K = values.get("K", problem.params.K)
        tau = values.get("tau", problem.params.tau0
                         if problem.params.tau_policy == "constant"
                         else "asymptotic")
        domain = values.get("domain", problem.domain)
        left, right = problem.left, problem.right
        x_split = values.get("x_split", problem.x_split)
        defaults = dict(n_cells=problem.n_desk, cfl=problem.cfl,
                        t_end=problem.t_end, scheme=problem.scheme,
                        limiter="minmod", bc="transmissive",
                        relaxation=problem.relaxation,
                        output_times=problem.output_times)
        if values.get("gamma") is not None or values.get("c_v") is not None:
            # a new gas changes the entropies of the stored states
            gas = eos.GasParams(gamma=gamma, c_v=c_v)
            lr, rr = problem.left_rup, problem.right_rup
            left = cases.prim_from_pressure(gas, *lr)
            right = cases.prim_from_pressure(gas, *rr)
    else:
        base = "run"
        if "left" not in values or "right" not in values:
            raise ConfigError("config needs either ic = <case> or both "
                              "left = rho u p j and right = rho u p j")
        gamma = values.get("gamma", 1.4)
        c_v = values.get("c_v", 1.5)
        kappa = values.get("kappa", 1.0)
        K = values.get("K", 1.0e-3)
        tau = values.get("tau", "asymptotic")
        domain = values.get("domain", (0.0, 1.0))
        gas = eos.GasParams(gamma=gamma, c_v=c_v)
        left = cases.prim_from_pressure(gas, *values["left"])
        right = cases.prim_from_pressure(gas, *values["right"])
        x_split = values.get("x_split", 0.5 * (domain[0] + domain[1]))
        defaults = dict(n_cells=2000, cfl=0.9, t_end=None, scheme="hyperbolic",
                        limiter="minmod", bc="transmissive", relaxation=True,
                        output_times=None)

    t_end = values.get("t_end", defaults["t_end"])
    if t_end is None:
        raise ConfigError("config needs t_end")
    output_times = values.get("output_times", defaults["output_times"])
    if output_times is None:
        output_times = (t_end,)

    if tau == "asymptotic":
        params = model.ModelParams(gas=gas, kappa=kappa, K=K,
                                   tau_policy="asymptotic")
    else:
        params = model.ModelParams(gas=gas, kappa=kappa, K=K,
                                   tau_policy="constant", tau0=tau)
    config = solver.RunConfig(
        x_left=domain[0], x_right=domain[1],
        n_cells=values.get("n_cells", defaults["n_cells"]),
        cfl=values.get("cfl", defaults["cfl"]), t_end=t_end, model=params,
        init=cases.piecewise_init(left, right, x_split),
        scheme=values.get("scheme", defaults["scheme"]),
        limiter=values.get("limiter", defaults["limiter"]),
        bc=values.get("bc", defaults["bc"]),
        relaxation=values.get("relaxation", defaults["relaxation"]),
        output_times=tuple(output_times))
    _emit_run(base, config, _out_dir(args))
    return 0


def cmd_hugoniot(args):
    out = _out_dir(args)
    vmin, vmax = args.v_min, args.v_max
    if not 0.0 < vmin < vmax:
        raise ConfigError(f"bad volume range [{vmin}, {vmax}]")
    grid = np.linspace(vmin, vmax, args.samples)
    poles = hugoniot.branch_poles(args.kappa_t, args.gamma)
    keep = np.ones(grid.shape, dtype=bool)
    for pole in poles:
        near = np.abs(grid - pole) < 1.0e-6
        if near.any():
            keep &= ~near
            print(f"warning: skipped {int(near.sum())} rows near the branch "
                  f"pole at v_tilde={pole:.12g}", file=sys.stderr)
    sample = hugoniot.sample_branches(args.kappa_t, args.gamma, grid[keep])
    _write_csv(os.path.join(out, "hugoniot.csv"),
               "v,p_plus,p_minus,psi_plus,psi_minus,Msq_minus",
               (sample.v_tilde, sample.p_plus, sample.p_minus,
                sample.psi_plus, sample.psi_minus, sample.Msq_minus))

    if abs(args.gamma - 2.0) < 1.0e-12:
        kc = hugoniot.critical_kappa()
        print(f"critical coupling kappa_c = {kc:.12g}")
        if abs(args.kappa_t - kc) > 1.0e-6:
            vs = hugoniot.v_star(args.kappa_t)
            print(f"v_star = {vs:.12g}")
        else:
            print("v_star undefined at the critical coupling")
    else:
        print("critical coupling and v_star apply to the gamma = 2 analysis")
    return 0


def cmd_dispersion(args):
    out = _out_dir(args)
    gas = eos.GasParams(gamma=args.gamma, c_v=args.c_v)
    if args.tau is not None:
        params = model.ModelParams(gas=gas, kappa=args.kappa, K=args.K,
                                   tau_policy="constant", tau0=args.tau)
    else:
        params = model.ModelParams(gas=gas, kappa=args.kappa, K=args.K,
                                   tau_policy="asymptotic")
    ks = np.geomspace(args.k_min, args.k_max, args.samples)
    samples = dispersion.sweep(params, (args.rho0, args.eta0), ks)
    cols = list(zip(*[(s.k, s.c_f, s.c_s, s.beta1, s.beta2, s.beta3, s.beta4,
                       s.c_tilde, s.beta_t1, s.beta_t2) for s in samples]))
    _write_csv(os.path.join(out, "dispersion.csv"),
               "k,c_f,c_s,beta1,beta2,beta3,beta4,c_tilde,beta_t1,beta_t2",
               cols)
    print(f"dispersion: {len(samples)} wavenumbers, "
          f"c_f range [{samples[0].c_f:.6g}, {samples[-1].c_f:.6g}]")
    return 0


def cmd_eigen(args):
    gas = eos.GasParams(gamma=args.gamma, c_v=args.c_v)
    params = model.ModelParams(gas=gas, kappa=args.kappa, K=args.K)
    prim = model.Primitive(rho=args.rho, u=args.u, eta=args.eta, j=args.j)
    ws = model.wave_speeds_1d(params, prim)
    for i, lam in enumerate((ws.lambda1, ws.lambda2, ws.lambda3, ws.lambda4),
                            start=1):
        print(f"lambda{i} = {lam:.12g}")
    if args.three_d or args.a_c is not None:
        u = np.array([args.u, args.u2, args.u3])
        j = np.array([args.j, args.j2, args.j3])
        if args.a_c is not None:
            chis = model.eigenvalues_curl_cleaning(params, args.rho, u,
                                                   args.eta, j, args.a_c)
        else:
            chis = model.eigenvalues_3d(params, args.rho, u, args.eta, j)
        for i, chi in enumerate(chis, start=1):
            print(f"chi{i} = {chi:.12g}")
    return 0


def cmd_convergence(args):
    grids = tuple(int(g) for g in args.grids.split(","))
    if len(grids) < 2 or any(2 * a != b for a, b in zip(grids, grids[1:])):
        raise ConfigError(f"grids must double, got {grids}")
    frames = {}
    for n in grids:
        if args.case == "smooth_periodic":
            config = cases.smooth_periodic(n_cells=n, limiter=args.limiter)
        else:
            problem = cases.catalog(args.case)
            config = cases.to_config(problem, n_cells=n, limiter=args.limiter,
                                     output_times=(problem.t_end,))
        fr, _ = solver.run(config)
        frames[n] = fr[-1]

    print(f"L1 self-convergence for {args.case} on grids {grids}:")
    for var in ("rho", "u", "eta", "j"):
        errs = []
        for a, b in zip(grids, grids[1:]):
            fa, fb = getattr(frames[a], var), getattr(frames[b], var)
            coarse = 0.5 * (fb[0::2] + fb[1::2])
            errs.append(float(np.mean(np.abs(fa - coarse))))
        rates = [np.log2(e0 / e1) for e0, e1 in zip(errs, errs[1:])]
        line = f"  {var}: errors " + " ".join(f"{e:.3e}" for e in errs)
        if rates:
            line += "  rates " + " ".join(f"{r:.3f}" for r in rates)
        print(line)
    return 0


def _build_parser():
    p = argparse.ArgumentParser(prog="heatwave",
                                description="hyperbolic heat transfer solver")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("case", help="run a catalog problem")
    pc.add_argument("name")
    pc.add_argument("--n", type=int, default=None, help="cell count")
    pc.add_argument("--paper-scale", action="store_true",
                    help="use the published resolution")
    pc.add_argument("--kappa", type=float, default=None)
    pc.add_argument("--K", type=float, default=None)
    pc.add_argument("--cfl", type=float, default=None)
    pc.add_argument("-o", "--out", default=None)
    pc.set_defaults(func=cmd_case)

    pr = sub.add_parser("run", help="run from a key = value config file")
    pr.add_argument("config_file")
    pr.add_argument("-o", "--out", default=None)
    pr.set_defaults(func=cmd_run)

    ph = sub.add_parser("hugoniot", help="tabulate the jump-locus branches")
    ph.add_argument("--kappa-t", type=float, required=True,
                    help="dimensionless coupling")
    ph.add_argument("--gamma", type=float, default=2.0)
    ph.add_argument("--v-min", type=float, default=0.5)
    ph.add_argument("--v-max", type=float, default=1.5)
    ph.add_argument("--samples", type=int, default=400)
    ph.add_argument("-o", "--out", default=None)
    ph.set_defaults(func=cmd_hugoniot)

    pd = sub.add_parser("dispersion", help="phase velocities and attenuations")
    pd.add_argument("--gamma", type=float, default=1.4)
    pd.add_argument("--c-v", type=float, default=1.5)
    pd.add_argument("--kappa", type=float, default=1.0)
    pd.add_argument("--K", type=float, default=0.1)
    pd.add_argument("--tau", type=float, default=None,
                    help="constant relaxation time (default: asymptotic law)")
    pd.add_argument("--rho0", type=float, default=1.0)
    pd.add_argument("--eta0", type=float, default=1.0)
    pd.add_argument("--k-min", type=float, default=1.0e-4)
    pd.add_argument("--k-max", type=float, default=1.0e6)
    pd.add_argument("--samples", type=int, default=400)
    pd.add_argument("-o", "--out", default=None)
    pd.set_defaults(func=cmd_dispersion)

    pe = sub.add_parser("eigen", help="characteristic speeds of a state")
    pe.add_argument("--gamma", type=float, default=2.0)
    pe.add_argument("--c-v", type=float, default=1.0)
    pe.add_argument("--kappa", type=float, default=1.0)
    pe.add_argument("--K", type=float, default=0.0)
    pe.add_argument("--rho", type=float, required=True)
    pe.add_argument("--u", type=float, default=0.0)
    pe.add_argument("--eta", type=float, default=0.0)
    pe.add_argument("--j", type=float, default=0.0)
    pe.add_argument("--u2", type=float, default=0.0)
    pe.add_argument("--u3", type=float, default=0.0)
    pe.add_argument("--j2", type=float, default=0.0)
    pe.add_argument("--j3", type=float, default=0.0)
    pe.add_argument("--three-d", action="store_true",
                    help="also print the multidimensional speeds")
    pe.add_argument("--a-c", type=float, default=None,
                    help="cleaning speed: print the augmented spectrum")
    pe.set_defaults(func=cmd_eigen)

    pv = sub.add_parser("convergence", help="L1 self-convergence rates")
    pv.add_argument("--case", default="smooth_periodic")
    pv.add_argument("--grids", default="100,200,400,800")
    pv.add_argument("--limiter", default="none",
                    choices=("minmod", "none"))
    pv.set_defaults(func=cmd_convergence)
    return p


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, StabilityError, NonPhysicalStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
