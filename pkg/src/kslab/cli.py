"""Command-line surface: simulate | verify | converge | constants.

Exit codes: 0 success, 2 configuration error, 3 check failure,
4 numerical failure (blow-up or fixed-point non-convergence).

Everything is deterministic given (config, seed): per-path RNG streams
are derived from (seed, stream id), with reserved id ranges for
calibration and the verification sweeps so path streams never collide.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from kslab import __version__
from kslab.config import ConfigError, RunConfig, load_config
from kslab.estimates import (
    calibrate_constants,
    check_continuous_dependence,
    check_embedding,
    check_energy,
    check_F_contraction,
    check_G_lipschitz,
    check_semigroup_regularity,
    fit_gronwall,
    random_field,
    random_smooth_path,
)
from kslab.noise import make_stream, sample_wa_matrix
from kslab.solver import (
    BlowUpError,
    PicardConvergenceError,
    Trajectory,
    integrate_y,
    picard_cross_check,
    tau_one,
)
from kslab.spectral import e_norm
from kslab.runio import (
    norm_series,
    report_to_dict,
    write_ledger_json,
    write_manifest,
    write_norm_csv,
    write_report_json,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CHECK = 3
EXIT_NUMERIC = 4

# Reserved stream-id ranges (path streams are 0..paths-1).
STREAM_CALIBRATION = 2**48
STREAM_LIPSCHITZ = 2**32
STREAM_CONTRACTION = 2**33
STREAM_REGULARITY = 2**34
STREAM_DEPENDENCE = 2**35
STREAM_CROSS_CHECK = 2**36


def _simulate_path(cfg: RunConfig, seed: int, index: int) -> Trajectory:
    from kslab.solver import solve_global

    return solve_global(
        u0=cfg.initial_field(),
        T=cfg.solver_t_final,
        dom=cfg.domain(),
        noise=cfg.noise(),
        cfg=cfg.solver(),
        rng=make_stream(seed, index),
    )


def _simulate_worker(args: tuple) -> np.ndarray:
    cfg, seed, index, ledger_dict = args
    from kslab.estimates import ConstantsLedger

    traj = _simulate_path(cfg, seed, index)
    ledger = ConstantsLedger(**ledger_dict)
    return norm_series(traj, cfg.domain(), ledger)


def cmd_simulate(cfg: RunConfig, seed: int, paths: int, out_dir: Path, workers: int) -> int:
    started = time.perf_counter()
    out_dir.mkdir(parents=True, exist_ok=True)
    dom = cfg.domain()
    ledger = calibrate_constants(dom, cfg.checks_samples, make_stream(seed, STREAM_CALIBRATION))

    outputs: list[str] = []
    jobs = [(cfg, seed, i, _ledger_kwargs(ledger)) for i in range(paths)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            all_series = list(pool.map(_simulate_worker, jobs))
    else:
        all_series = [_simulate_worker(job) for job in jobs]
    for i, series in enumerate(all_series):
        name = f"path_{i:04d}.csv"
        write_norm_csv(out_dir / name, series)
        outputs.append(name)
    write_ledger_json(out_dir / "constants.json", ledger)
    outputs.append("constants.json")
    write_manifest(
        out_dir / "manifest.json",
        config=cfg.as_dict(),
        master_seed=seed,
        path_count=paths,
        tool_version=__version__,
        outputs=outputs,
        wall_clock_seconds=time.perf_counter() - started,
    )
    print(f"simulate: wrote {paths} path(s) to {out_dir}")
    return EXIT_OK


def _ledger_kwargs(ledger) -> dict:
    return {
        "C1": ledger.C1,
        "C2": ledger.C2,
        "K": ledger.K,
        "L": ledger.L,
        "M": ledger.M,
        "alpha": ledger.alpha,
        "provenance": dict(ledger.provenance),
    }


def cmd_verify(cfg: RunConfig, seed: int, out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    dom = cfg.domain()
    noise = cfg.noise()
    solver_cfg = cfg.solver()
    slack = cfg.checks_slack
    n_sweep = cfg.checks_sweep_paths
    ledger = calibrate_constants(dom, cfg.checks_samples, make_stream(seed, STREAM_CALIBRATION))
    write_ledger_json(out_dir / "constants.json", ledger)
    all_pass = True

    def emit(name: str, payload: dict) -> None:
        nonlocal all_pass
        write_report_json(out_dir / f"{name}.json", payload)
        status = "pass" if payload["pass"] else "FAIL"
        print(f"verify: {name}: {status}")
        all_pass &= payload["pass"]

    # Picard fixed point against the stepper on the first interval.
    cross = picard_cross_check(
        cfg.initial_field(), dom, noise, solver_cfg, ledger,
        make_stream(seed, STREAM_CROSS_CHECK), T=cfg.solver_t_final,
    )
    cross_pass = (
        cross["agrees"]
        and cross["in_ball"]
        and cross["residual_rel"] <= 10.0 * solver_cfg.picard_tol
        and all(r <= 0.5 + 0.05 for r in cross["ratios"])
    )
    emit("picard_cross_check", {**cross, "pass": bool(cross_pass)})

    # Simulated trajectories drive the embedding and energy sweeps.
    worst_embed = None
    worst_h = None
    worst_v = None
    failures = {"embedding": 0, "energy_H": 0, "energy_V": 0}
    for i in range(n_sweep):
        traj = _simulate_path(cfg, seed, i)
        r_embed = check_embedding(traj.u_fields, traj.times, dom, ledger, slack)
        r_h, r_v = check_energy(traj, dom, ledger, slack)
        for key, rep in (("embedding", r_embed), ("energy_H", r_h), ("energy_V", r_v)):
            failures[key] += 0 if rep.passed else 1
        worst_embed = _worse(worst_embed, r_embed)
        worst_h = _worse(worst_h, r_h)
        worst_v = _worse(worst_v, r_v)
    emit("embedding", _sweep_payload(worst_embed, n_sweep, failures["embedding"]))
    emit("energy_H", _sweep_payload(worst_h, n_sweep, failures["energy_H"]))
    emit("energy_V", _sweep_payload(worst_v, n_sweep, failures["energy_V"]))

    # Synthetic path pairs for the nonlinearity Lipschitz bound.
    times = np.linspace(0.0, cfg.solver_t_final, 129)
    worst = None
    fails = 0
    for i in range(n_sweep):
        rng = make_stream(seed, STREAM_LIPSCHITZ + i)
        u = random_smooth_path(dom, times, rng)
        v = random_smooth_path(dom, times, rng)
        rep = check_G_lipschitz(u, v, times, dom, slack)
        fails += 0 if rep.passed else 1
        worst = _worse(worst, rep)
    emit("G_lipschitz", _sweep_payload(worst, n_sweep, fails))

    # Semigroup regularity on random data.
    worst = None
    fails = 0
    for i in range(n_sweep):
        rng = make_stream(seed, STREAM_REGULARITY + i)
        y0 = random_field(dom, rng)
        g = random_smooth_path(dom, times, rng)
        rep = check_semigroup_regularity(y0, g, times, dom, ledger, slack)
        fails += 0 if rep.passed else 1
        worst = _worse(worst, rep)
    emit("semigroup_regularity", _sweep_payload(worst, n_sweep, fails))

    # Contraction sweep inside the admissible ball (u0 = 0).
    u0_zero = np.zeros(dom.modes)
    tau = tau_one(u0_zero, ledger, dom, T=cfg.solver_t_final)
    tau_times = np.linspace(0.0, min(tau, cfg.solver_t_final), 49)
    worst = None
    fails = 0
    max_ratio = 0.0
    for i in range(n_sweep):
        rng = make_stream(seed, STREAM_CONTRACTION + i)
        z1 = _ball_path(dom, tau_times, rng, ledger.alpha)
        z2 = _ball_path(dom, tau_times, rng, ledger.alpha)
        rep = check_F_contraction(z1, z2, u0_zero, tau_times, dom, ledger, solver_cfg, slack)
        fails += 0 if rep.passed else 1
        max_ratio = max(max_ratio, rep.context.get("ratio", 0.0))
        worst = _worse(worst, rep)
    payload = _sweep_payload(worst, n_sweep, fails)
    payload["max_ratio"] = max_ratio
    emit("F_contraction", payload)

    # Continuous dependence: delta-scaling study on a shared noise stream.
    deltas = (1e-2, 1e-3, 1e-4)
    base_u0 = cfg.initial_field()
    runs = []
    for delta in (0.0,) + deltas:
        u0 = base_u0.copy()
        u0[0] += delta
        traj = _solve_with_u0(cfg, u0, seed)
        runs.append(traj)
    pairs = [(runs[0], runs[j + 1]) for j in range(len(deltas))]
    c2, c3 = fit_gronwall(pairs, dom)
    reports = [
        check_continuous_dependence(a, b, dom, slack, constants=(c2, c3)) for a, b in pairs
    ]
    sups = [rep.context["sup_difference"] for rep in reports]
    ratios = [sups[j] / sups[j + 1] for j in range(len(sups) - 1)]
    scaling_ok = all(5.0 <= r <= 20.0 for r in ratios)
    dep_pass = scaling_ok and all(rep.passed for rep in reports)
    emit(
        "continuous_dependence",
        {
            "pass": bool(dep_pass),
            "C2_fit": c2,
            "C3_fit": c3,
            "deltas": list(deltas),
            "sup_differences": sups,
            "scaling_ratios": ratios,
            "reports": [report_to_dict(rep) for rep in reports],
        },
    )

    return EXIT_OK if all_pass else EXIT_CHECK


def _solve_with_u0(cfg: RunConfig, u0: np.ndarray, seed: int) -> Trajectory:
    from kslab.solver import solve_global

    return solve_global(
        u0=u0,
        T=cfg.solver_t_final,
        dom=cfg.domain(),
        noise=cfg.noise(),
        cfg=cfg.solver(),
        rng=make_stream(seed, STREAM_DEPENDENCE),
    )


def _ball_path(dom, times, rng, alpha: float) -> np.ndarray:
    path = random_smooth_path(dom, times, rng, decay=2.0)
    norm = e_norm(path, times, dom)
    if norm == 0.0:
        return path
    return path * (alpha * rng.uniform(0.1, 1.0) / norm)


def _worse(current, report):
    if current is None:
        return report
    return report if report.margin < current.margin else current


def _sweep_payload(worst, count: int, failures: int) -> dict:
    payload = report_to_dict(worst)
    payload["pass"] = failures == 0
    payload["samples"] = count
    payload["failures"] = failures
    return payload


def cmd_converge(cfg: RunConfig, seed: int, levels: int, paths: int, out_dir: Path) -> int:
    if levels < 3:
        raise ConfigError("levels: need at least 3 refinement levels")
    out_dir.mkdir(parents=True, exist_ok=True)
    dom = cfg.domain()
    noise = cfg.noise()
    T = cfg.solver_t_final
    base_dt = cfg.solver_dt
    n0 = int(round(T / base_dt))
    if n0 < 1:
        raise ConfigError("solver.dt: coarsest level has no steps")

    ref_factor = 2**levels
    dts = [base_dt / 2**j for j in range(levels)]
    errors = np.zeros(levels)
    u0 = cfg.initial_field()
    for p in range(paths):
        rng = make_stream(seed, p)
        n_ref = n0 * ref_factor
        times_ref = np.linspace(0.0, T, n_ref + 1)
        if noise.sigma > 0:
            _, wa_ref = sample_wa_matrix(T, T / n_ref, dom, noise, rng)
        else:
            wa_ref = np.zeros((n_ref + 1, dom.modes))
        y_ref = integrate_y(u0, wa_ref, times_ref, dom)
        u_ref = (y_ref + wa_ref)[:: ref_factor]
        for j, dt_j in enumerate(dts):
            stride = 2 ** (levels - j)
            wa_j = wa_ref[::stride]
            times_j = times_ref[::stride]
            y_j = integrate_y(u0, wa_j, times_j, dom)
            u_j = (y_j + wa_j)[:: 2**j]
            diff = u_j - u_ref
            errors[j] += float(
                np.max(np.sqrt(dom.half_length * np.sum(diff**2, axis=1))) ** 2
            )
    errors = np.sqrt(errors / paths)
    orders = [None] + [float(np.log2(errors[j - 1] / errors[j])) for j in range(1, levels)]
    lines = ["dt,error,order"]
    for dt_j, err, order in zip(dts, errors, orders):
        order_txt = "nan" if order is None else f"{order:.17g}"
        lines.append(f"{dt_j:.17g},{err:.17g},{order_txt}")
    (out_dir / "converge.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    slope = float(np.polyfit(np.log2(dts), np.log2(errors), 1)[0])
    write_report_json(
        out_dir / "converge.json",
        {"dts": dts, "errors": errors.tolist(), "orders": orders, "fitted_order": slope},
    )
    print(f"converge: fitted order {slope:.3f} over {levels} levels, {paths} path(s)")
    return EXIT_OK


def cmd_constants(cfg: RunConfig, seed: int, samples: int, out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    dom = cfg.domain()
    ledger = calibrate_constants(dom, samples, make_stream(seed, STREAM_CALIBRATION))
    write_ledger_json(out_dir / "constants.json", ledger)
    print(f"constants: wrote ledger to {out_dir / 'constants.json'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kslab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None, help="key = value config file")
        p.add_argument("--seed", type=int, default=0, help="master seed (u64)")
        p.add_argument("--out-dir", type=Path, default=Path("out"), help="output directory")

    p_sim = sub.add_parser("simulate", help="sample solution paths and write norm CSVs")
    common(p_sim)
    p_sim.add_argument("--paths", type=int, default=1)
    p_sim.add_argument("--workers", type=int, default=1)

    p_ver = sub.add_parser("verify", help="run every estimate check; exit 3 on failure")
    common(p_ver)

    p_conv = sub.add_parser("converge", help="common-path dt-refinement study")
    common(p_conv)
    p_conv.add_argument("--levels", type=int, default=3)
    p_conv.add_argument("--paths", type=int, default=1)

    p_const = sub.add_parser("constants", help="calibrate the constants ledger")
    common(p_const)
    p_const.add_argument("--samples", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.seed, args.paths, args.out_dir, args.workers)
        if args.command == "verify":
            return cmd_verify(cfg, args.seed, args.out_dir)
        if args.command == "converge":
            return cmd_converge(cfg, args.seed, args.levels, args.paths, args.out_dir)
        if args.command == "constants":
            samples = args.samples if args.samples is not None else cfg.checks_samples
            return cmd_constants(cfg, args.seed, samples, args.out_dir)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BlowUpError, PicardConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
