"""Serialization: norm-series CSVs, constants/report JSON, run manifests.

CSV schema (one file per path):
    t,norm_H,norm_V,norm_L4,wa_norm_H,wa_norm_L4,bound_H,bound_V
norm_* are norms of the solution u, wa_* of the stochastic convolution,
bound_H is the pathwise Gronwall bound on ||u(t)||_H (the H-energy bound
on y at horizon t plus ||w_A(t)||_H) and bound_V bounds the square root
of the time-integrated V-energy of y up to t.  Floats are printed with 17
significant digits so a read-back is exact.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from kslab.estimates import CheckReport, ConstantsLedger, energy_coefficients
from kslab.solver import Trajectory
from kslab.spectral import DomainSpec, l4_norms

CSV_HEADER = "t,norm_H,norm_V,norm_L4,wa_norm_H,wa_norm_L4,bound_H,bound_V"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def norm_series(traj: Trajectory, dom: DomainSpec, ledger: ConstantsLedger) -> np.ndarray:
    """Columns of the CSV schema as a (steps, 8) array."""
    times = traj.times
    u = traj.u_fields
    wa = traj.wa_fields
    w = 1.0 + dom.mu**2
    u_h = np.sqrt(dom.half_length * np.sum(u**2, axis=1))
    u_v = np.sqrt(dom.half_length * np.sum(w * u**2, axis=1))
    u_l4 = l4_norms(u, dom)
    wa_h = np.sqrt(dom.half_length * np.sum(wa**2, axis=1))
    wa_l4 = l4_norms(wa, dom)

    f, g = energy_coefficients(wa, times, dom, ledger)
    dt_half = 0.5 * np.diff(times)
    f_cum = np.concatenate(([0.0], np.cumsum(dt_half * (f[:-1] + f[1:]))))
    g_cum = np.concatenate(([0.0], np.cumsum(dt_half * (g[:-1] + g[1:]))))
    u0_h2 = dom.half_length * float(np.sum(traj.y_fields[0] ** 2))
    ybound2 = u0_h2 * np.exp(f_cum) + np.exp(f_cum) * g_cum
    bound_h = np.sqrt(ybound2) + wa_h
    bound_v = np.sqrt(u0_h2 + ybound2 * f_cum + g_cum)
    return np.column_stack([times, u_h, u_v, u_l4, wa_h, wa_l4, bound_h, bound_v])


def write_norm_csv(path: Path, series: np.ndarray) -> None:
    lines = [CSV_HEADER]
    for row in series:
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_norm_csv(path: Path) -> dict[str, np.ndarray]:
    """Columns keyed by header name; raises on schema mismatch."""
    text = path.read_text(encoding="utf-8").strip().splitlines()
    if not text or text[0] != CSV_HEADER:
        raise ValueError(f"{path}: expected header {CSV_HEADER!r}")
    data = np.array([[float(x) for x in line.split(",")] for line in text[1:]])
    names = CSV_HEADER.split(",")
    return {name: data[:, i] for i, name in enumerate(names)}


def report_to_dict(report: CheckReport) -> dict:
    d = asdict(report)
    d["pass"] = d.pop("passed")
    return d


def write_report_json(path: Path, payload: dict | list) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def ledger_to_dict(ledger: ConstantsLedger) -> dict:
    return {
        "C1": ledger.C1,
        "C2": ledger.C2,
        "K": ledger.K,
        "L": ledger.L,
        "M": ledger.M,
        "alpha": ledger.alpha,
        "provenance": dict(ledger.provenance),
    }


def write_ledger_json(path: Path, ledger: ConstantsLedger) -> None:
    write_report_json(path, ledger_to_dict(ledger))


def read_ledger_json(path: Path) -> ConstantsLedger:
    data = json.loads(path.read_text(encoding="utf-8"))
    return ConstantsLedger(
        C1=data["C1"],
        C2=data["C2"],
        K=data["K"],
        L=data["L"],
        M=data["M"],
        alpha=data["alpha"],
        provenance=data.get("provenance", {}),
    )


def write_manifest(
    path: Path,
    config: dict,
    master_seed: int,
    path_count: int,
    tool_version: str,
    outputs: list[str],
    wall_clock_seconds: float,
) -> None:
    write_report_json(
        path,
        {
            "config": config,
            "master_seed": master_seed,
            "path_count": path_count,
            "tool_version": tool_version,
            "outputs": sorted(outputs),
            "wall_clock_seconds": wall_clock_seconds,
        },
    )
