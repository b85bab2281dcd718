"""Command-line entry point: ``kgwick <subcommand> [options]``.

Exit codes: 0 success, 1 a checked invariant failed, 2 configuration or
input error, 3 numerical abort.
"""
import argparse
import csv
import math
import os
import sys
import traceback
from dataclasses import replace
from pathlib import Path

import numpy as np
import scipy.fft as sfft

from . import acceptance, fock, perturbative, profiles, scattering as sc, snapshot, wick
from .config import ConfigError, load_config
from .evolution import BlowUpError, energy_log, nonlinear_trajectory
from .grid import PhaseSpacePoint, graph_distance, map_R, map_R_inv, sobolev_norm

SUMMARY_SCHEMA = "kgwick.summary/1"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_ABORT = 0, 1, 2, 3


class InputError(ValueError):
    pass


# -- profiles --------------------------------------------------------------------

def _preset(grid, choice, section, seed):
    """Build a complex profile from a preset name such as ``mode:3`` or ``hermite:2``."""
    name, _, arg = choice.partition(":")
    p = dict(section)
    if name == "gaussian":
        return profiles.gaussian_profile(grid, p["amplitude"], p["width"], p["center"], p["phase"])
    if name == "mode":
        k = [int(v) for v in arg.split(",")] if arg else p["k"]
        return profiles.mode_profile(grid, k, p["amplitude"])
    if name == "hermite":
        idx = [int(v) for v in arg.split(",")] if arg else p["index"]
        if len(idx) == 1:
            idx = idx * grid.dim
        return p["amplitude"] * fock.phi_k(tuple(idx), grid)
    if name == "random":
        rng = np.random.default_rng([seed, int(arg or 0)])
        return profiles.random_profile(grid, rng, p["amplitude"], p["width"], p["kappa"])
    if name == "zero":
        return np.zeros(grid.shape, complex)
    raise InputError(f"unknown profile preset {choice!r}")


def _load_profile_file(grid, path):
    g, obj = snapshot.read_snapshot(path)
    if (g.dim, g.n, g.box_length) != (grid.dim, grid.n, grid.box_length):
        raise InputError(f"{path}: snapshot grid ({g.dim}, {g.n}, {g.box_length}) does not match "
                         f"the run grid ({grid.dim}, {grid.n}, {grid.box_length})")
    if isinstance(obj, PhaseSpacePoint):
        return map_R(grid, obj)
    return np.asarray(obj, complex)


def resolve_profile(grid, cfg, section, override=None):
    choice = override or cfg[section]["preset"]
    if choice == "file":
        choice = cfg[section]["file"]
    if os.path.exists(choice):
        return _load_profile_file(grid, choice)
    if "/" in choice or choice.endswith(".nlkg"):
        raise InputError(f"profile file not found: {choice}")
    return _preset(grid, choice, cfg[section], cfg.seed)


def resolve_test_function(grid, choice, seed):
    if os.path.exists(choice):
        g, obj = snapshot.read_snapshot(choice)
        if isinstance(obj, PhaseSpacePoint) or np.iscomplexobj(obj):
            raise InputError(f"{choice}: smearing function must be a real field snapshot")
        return np.asarray(obj, float)
    if choice == "gaussian":
        return profiles.gaussian_field(grid, 1.0, 1.0)
    if choice == "random":
        return profiles.random_test_function(grid, np.random.default_rng([seed, 99]))
    raise InputError(f"smearing function {choice!r} is neither a file nor gaussian/random")


# -- outputs ---------------------------------------------------------------------

def _write_summary(out, command, cfg, body):
    summary = {"schema": SUMMARY_SCHEMA, "command": command, "seed": cfg.seed,
               "config": cfg.echo(), **body}
    (out / "summary.json").write_text(acceptance.dumps(summary))
    return summary


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


# -- subcommands -----------------------------------------------------------------

def cmd_evolve(cfg, out, args):
    grid, mp = cfg.grid(), cfg.matching()
    z = resolve_profile(grid, cfg, "profile", args.z1)
    d = map_R_inv(grid, z)
    t_final, stride = cfg["evolve"]["t_final"], cfg["evolve"]["stride"]
    dt = mp.integrator.dt
    nsteps = max(int(round(t_final / dt)), 1)
    times = [min(k * dt, t_final) for k in range(stride, nsteps, stride)] + [t_final]
    states = nonlinear_trajectory(grid, d, times, mp.integrator)
    rows = energy_log(grid, [d] + states, [0.0] + times)
    snapshot.write_energy_csv(out / "energy.csv", rows)
    if cfg["evolve"]["snapshots"]:
        snapshot.write_trajectory(out / "trajectory.nlkg", grid, [d] + states)
    e0, e1 = rows[0][1], rows[-1][1]
    body = {"energy": {"initial": e0, "final": e1,
                       "relative_drift": abs(e1 - e0) / e0 if e0 else 0.0},
            "final_sup": rows[-1][2], "records": len(rows)}
    if grid.coupling == 0 and cfg["profile"]["preset"].startswith("mode") and not args.z1:
        k = np.broadcast_to(cfg["profile"]["k"], (grid.dim,))
        mu = math.sqrt(grid.mass ** 2 + sum((2 * math.pi * ki / grid.box_length) ** 2 for ki in k))
        a = d.phi
        exact = PhaseSpacePoint(math.cos(mu * t_final) * a, -mu * math.sin(mu * t_final) * a)
        err = float(graph_distance(grid, states[-1], exact))
        body["analytic_error"] = err
    _write_summary(out, "evolve", cfg, body)
    print(f"evolve: t = {t_final}, relative energy drift {body['energy']['relative_drift']:.3e}")
    return EXIT_OK


def cmd_scatter(cfg, out, args):
    grid, mp = cfg.grid(), cfg.matching()
    d = map_R_inv(grid, resolve_profile(grid, cfg, "profile", args.z1))
    T_list = [mp.T / 4, mp.T / 2, mp.T]
    if mp.cauchy_check:
        T_list.append(2 * mp.T)
    summary = sc.scattering_summary(grid, d, mp, T_list=T_list)
    if args.snapshots:
        snapshot.write_snapshot(out / "d_in.nlkg", grid, d)
        snapshot.write_snapshot(out / "W_d_in.nlkg", grid, sc.wave_in(grid, d, mp))
        snapshot.write_snapshot(out / "S_d_in.nlkg", grid, sc.scatter(grid, d, mp))
    summary["params"] = {"T": mp.T, "dt": mp.integrator.dt, "order": mp.integrator.order,
                         "coupling": grid.coupling, "wraps_box": sc.wraps_box(grid, max(T_list))}
    _write_summary(out, "scatter", cfg, summary)
    print(f"scatter: ||S d - d|| = {summary['norms']['S_d_minus_d']:.6e}")
    return EXIT_OK


def cmd_kernel(cfg, out, args):
    grid, mp = cfg.grid(), cfg.matching()
    kc = dict(cfg["kernel"])
    for key in ("t1", "s1", "t2", "s2", "smear"):
        if getattr(args, key) is not None:
            kc[key] = getattr(args, key)
    if kc["s1"] < 0 or kc["s2"] < 0:
        raise ConfigError("kernel: damping parameters s1, s2 must be non-negative")
    z1 = resolve_profile(grid, cfg, "profile", args.z1)
    z2 = resolve_profile(grid, cfg, "profile2", args.z2)
    kv = wick.kernel_evolved(grid, z1, z2, kc["t1"], kc["s1"], kc["t2"], kc["s2"], mp)
    kv_swap = wick.kernel_evolved(grid, z2, z1, kc["t2"], kc["s2"], kc["t1"], kc["s1"], mp)
    herm = float(np.max(np.abs(np.conj(kv.full) - kv_swap.full)))
    h = resolve_test_function(grid, kc["smear"], cfg.seed)
    value = complex(wick.smear(grid, kv, h))
    body = {"prefactor": complex(kv.prefactor),
            "profile_norms": {"L2": float(sobolev_norm(grid, kv.profile, 0.0)),
                              "H1": float(sobolev_norm(grid, kv.profile, 1.0)),
                              "sup": float(np.max(np.abs(kv.profile)))},
            "hermiticity_residual": herm, "smear_value": value,
            "smear_pairing_value": complex(wick.smear_pairing(grid, kv, h)),
            "params": {**kc, "T": mp.T, "dt": mp.integrator.dt, "coupling": grid.coupling}}
    if cfg["kernel"]["dump_profile"] or args.snapshots:
        snapshot.write_snapshot(out / "kernel_profile.nlkg", grid, kv.profile)
    _write_summary(out, "kernel", cfg, body)
    print(f"kernel: smear = {value:.6e}, hermiticity residual {herm:.2e}")
    return EXIT_OK


def cmd_basis(cfg, out, args):
    grid = cfg.grid()
    b = cfg["basis"]
    idx = fock.multi_indices(grid.dim, b["max_degree"])
    gram = fock.gram_matrix(grid, idx)
    labels = ["".join(map(str, k)) for k in idx]
    _write_csv(out / "gram.csv", ["index"] + labels,
               [[labels[i]] + [float(v) for v in row.real] for i, row in enumerate(gram)])
    rows = []
    for k in idx:
        e = fock.basis_element(k, grid, b["cap"])
        rows.append([labels[idx.index(k)], float(math.sqrt(fock.h1_inner(grid, e.values, e.values).real)),
                     fock.reality_residual(grid, e), fock.symmetry_residual(grid, e.values)])
    _write_csv(out / "norms.csv", ["index", "norm", "reality_residual", "symmetry_residual"], rows)
    err = float(np.max(np.abs(gram - np.eye(len(idx)))))
    _write_summary(out, "basis", cfg, {"gram_error": err, "indices": labels,
                                       "max_reality_residual": max(r[2] for r in rows)})
    print(f"basis: {len(idx)} elements, Gram error {err:.3e}")
    return EXIT_OK


def cmd_born(cfg, out, args):
    grid, mp = cfg.grid(), cfg.matching()
    z = resolve_profile(grid, cfg, "profile", args.z1)
    z = z / sobolev_norm(grid, z, 1.0)
    eps = cfg["born"]["eps"]
    order = perturbative.order_scaling(grid, z, mp, eps)
    rem = perturbative.remainder_scaling(grid, z, mp, eps)
    par = perturbative.parity(grid, z, mp, eps)
    _write_csv(out / "born.csv", ["eps", "first_order_remainder", "third_order_remainder", "parity"],
               [[e, a, b, c] for e, a, b, c in zip(eps, order.values, rem.values, par.values)])
    body = {"exponents": {"order": order.exponent, "remainder": rem.exponent,
                          "parity": par.exponent},
            "degenerate": {"order": order.degenerate, "remainder": rem.degenerate,
                           "parity": par.degenerate}}
    _write_summary(out, "born", cfg, body)
    print(f"born: order {order.exponent:.3f}, remainder {rem.exponent:.3f}, parity {par.exponent}")
    return EXIT_OK


def cmd_verify(cfg, out, args):
    settings = acceptance.settings_from_config(cfg)
    wanted = cfg["verify"]["criteria"]
    ids = None if wanted == "all" else [c.strip() for c in wanted.split(",")]

    def progress(res, rt):
        print(res.line(rt), flush=True)

    results, runtimes = acceptance.run_criteria(settings, ids, progress)
    if settings.level == "full" and (ids is None or "smoke" in ids):
        smoke, rt = acceptance.run_smoke()
        runtimes["smoke"] = rt
        results.append(smoke)
        progress(smoke, rt)
    if ids is None or "14" in ids:
        replay = replace(acceptance.QUICK, seed=settings.seed)
        det = acceptance.determinism_check(replay)
        results.append(det)
        progress(det, None)
    summary = acceptance.build_summary(settings, results, cfg.echo())
    (out / "summary.json").write_text(acceptance.dumps(summary))
    _write_csv(out / "verify.csv", ["criterion", "name", "passed"],
               [[r.id, r.name, "pass" if r.passed else "fail"] for r in results])
    _write_csv(out / "timings.csv", ["criterion", "seconds"],
               [[k, float(v)] for k, v in runtimes.items()])
    return EXIT_OK if summary["passed"] else EXIT_FAIL


COMMANDS = {"evolve": cmd_evolve, "scatter": cmd_scatter, "kernel": cmd_kernel,
            "basis": cmd_basis, "born": cmd_born, "verify": cmd_verify}


def build_parser():
    parser = argparse.ArgumentParser(prog="kgwick", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration")
    common.add_argument("--out", help="output directory (default: [run] out)")
    common.add_argument("--seed", type=int, help="seed for random profiles")
    common.add_argument("--threads", type=int, help="FFT worker threads")
    common.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override a config value (repeatable)")
    common.add_argument("--z1", help="first profile: snapshot file or preset (gaussian, mode:k, "
                                     "hermite:k, random:n, zero)")
    common.add_argument("--snapshots", action="store_true", help="write field snapshots")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "kernel":
            p.add_argument("--z2", help="second profile (file or preset)")
            for key in ("t1", "s1", "t2", "s2"):
                p.add_argument(f"--{key}", type=float)
            p.add_argument("--smear", help="real field snapshot, or gaussian/random")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for key in ("z2", "t1", "s1", "t2", "s2", "smear"):
        if not hasattr(args, key):
            setattr(args, key, None)
    overrides = list(args.set) + [f"run.scenario={args.command}"]
    if args.seed is not None:
        overrides.append(f"run.seed={args.seed}")
    if args.threads is not None:
        overrides.append(f"run.threads={args.threads}")
    if args.out is not None:
        overrides.append(f"run.out={args.out}")
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(cfg["run"]["out"])
    out.mkdir(parents=True, exist_ok=True)
    try:
        with sfft.set_workers(cfg["run"]["threads"]):
            return COMMANDS[args.command](cfg, out, args)
    except (ConfigError, InputError, snapshot.SnapshotError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BlowUpError, ArithmeticError, FloatingPointError) as exc:
        origin = Path(traceback.extract_tb(exc.__traceback__)[-1].filename).stem
        print(f"numerical abort in {args.command} ({origin}): {exc} "
              f"(grid {cfg.echo()['grid']}, dt {cfg['integrator']['dt']})", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
