/**
 * Figure builders: each returns a plain echarts option object so tests
 * can inspect exactly what gets plotted.  Inputs are never mutated.
 */

import type { ConvergenceRow, NormSeries } from "./csv";
import { assertSharedGrid, SchemaError } from "./csv";
import { convergenceSlope } from "./fit";

export type FigureKind = "trajectory" | "convergence" | "ensemble";

export interface EChartsOption {
  [key: string]: unknown;
}

function zip(x: number[], y: number[]): [number, number][] {
  return x.map((v, i) => [v, y[i]]);
}

const BASE = {
  animation: false,
  backgroundColor: "#ffffff",
  grid: { left: 70, right: 30, top: 60, bottom: 50 },
};

/** Solution norms over time with the pathwise H-bound overlay. */
export function trajectoryFigure(series: NormSeries, title = "norm trajectory"): EChartsOption {
  return {
    ...BASE,
    title: { text: title },
    legend: { top: 28, data: ["norm_H", "norm_V", "bound_H"] },
    xAxis: { type: "value", name: "t" },
    yAxis: { type: "value", name: "norm" },
    series: [
      { name: "norm_H", type: "line", showSymbol: false, data: zip(series.t, series.norm_H) },
      { name: "norm_V", type: "line", showSymbol: false, data: zip(series.t, series.norm_V) },
      {
        name: "bound_H",
        type: "line",
        showSymbol: false,
        lineStyle: { type: "dashed", width: 2 },
        data: zip(series.t, series.bound_H),
      },
    ],
  };
}

/** Log-log refinement errors with the fitted slope in the title. */
export function convergenceFigure(rows: ConvergenceRow[], title = "dt refinement"): EChartsOption {
  const dts = rows.map((r) => r.dt);
  const errors = rows.map((r) => r.error);
  const slope = convergenceSlope(dts, errors);
  return {
    ...BASE,
    title: { text: `${title} (fitted order ${slope.toFixed(2)})` },
    xAxis: { type: "log", name: "dt" },
    yAxis: { type: "log", name: "error" },
    series: [
      {
        name: "error",
        type: "line",
        data: zip(dts, errors),
        label: { show: false },
      },
    ],
    fittedOrder: slope,
  };
}

export interface EnsembleStats {
  t: number[];
  mean: number[];
  halfWidth: number[];
}

/** Per-time mean and 2-standard-error half width of norm_H over paths. */
export function ensembleStats(seriesList: NormSeries[], sources: string[]): EnsembleStats {
  if (seriesList.length === 0) {
    throw new SchemaError("ensemble needs at least one series");
  }
  assertSharedGrid(seriesList, sources);
  const n = seriesList.length;
  const t = seriesList[0].t;
  const mean: number[] = [];
  const halfWidth: number[] = [];
  for (let i = 0; i < t.length; i++) {
    const values = seriesList.map((s) => s.norm_H[i]);
    const m = values.reduce((a, b) => a + b, 0) / n;
    const variance = n > 1 ? values.reduce((a, b) => a + (b - m) ** 2, 0) / (n - 1) : 0;
    mean.push(m);
    halfWidth.push(2 * Math.sqrt(variance / n));
  }
  return { t, mean, halfWidth };
}

export function ensembleFigure(
  seriesList: NormSeries[],
  sources: string[],
  title = "ensemble norm_H",
): EChartsOption {
  const stats = ensembleStats(seriesList, sources);
  const lower = stats.mean.map((m, i) => m - stats.halfWidth[i]);
  const width = stats.halfWidth.map((w) => 2 * w);
  return {
    ...BASE,
    title: { text: `${title} (${seriesList.length} paths, mean ± 2 stderr)` },
    xAxis: { type: "value", name: "t" },
    yAxis: { type: "value", name: "norm_H" },
    series: [
      {
        name: "band_low",
        type: "line",
        stack: "band",
        showSymbol: false,
        lineStyle: { opacity: 0 },
        data: zip(stats.t, lower),
      },
      {
        name: "band",
        type: "line",
        stack: "band",
        showSymbol: false,
        lineStyle: { opacity: 0 },
        areaStyle: { opacity: 0.25 },
        data: zip(stats.t, width),
      },
      { name: "mean", type: "line", showSymbol: false, data: zip(stats.t, stats.mean) },
    ],
  };
}
