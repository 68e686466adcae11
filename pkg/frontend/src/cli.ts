/**
 * kslab-plots: one command per figure kind, consuming simulator CSVs.
 *
 *   kslab-plots trajectory  --csv path_0000.csv --out traj.svg
 *   kslab-plots convergence --csv converge.csv  --out conv.svg
 *   kslab-plots ensemble    --csv a.csv --csv b.csv ... --out ens.svg
 *
 * Options: --width N --height N --title TEXT.  Inputs are never mutated;
 * output is deterministic given the inputs.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseConvergenceCsv, parseNormCsv, SchemaError } from "./csv";
import {
  convergenceFigure,
  ensembleFigure,
  trajectoryFigure,
  type EChartsOption,
  type FigureKind,
} from "./figures";
import { renderSvg } from "./render";

export interface CliArgs {
  kind: FigureKind;
  csvs: string[];
  out: string;
  width: number;
  height: number;
  title?: string;
}

const USAGE =
  "usage: kslab-plots <trajectory|convergence|ensemble> --csv FILE [--csv FILE ...] " +
  "--out FILE.svg [--width N] [--height N] [--title TEXT]";

export function parseArgs(argv: string[]): CliArgs {
  const [kind, ...rest] = argv;
  if (kind !== "trajectory" && kind !== "convergence" && kind !== "ensemble") {
    throw new Error(USAGE);
  }
  const csvs: string[] = [];
  let out: string | undefined;
  let width = 900;
  let height = 560;
  let title: string | undefined;
  for (let i = 0; i < rest.length; i++) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`${flag}: missing value\n${USAGE}`);
    switch (flag) {
      case "--csv":
        csvs.push(value);
        break;
      case "--out":
        out = value;
        break;
      case "--width":
        width = Number(value);
        break;
      case "--height":
        height = Number(value);
        break;
      case "--title":
        title = value;
        break;
      default:
        throw new Error(`unknown flag ${flag}\n${USAGE}`);
    }
    i++;
  }
  if (csvs.length === 0 || out === undefined) throw new Error(USAGE);
  if (kind !== "ensemble" && csvs.length !== 1) {
    throw new Error(`${kind} takes exactly one --csv input`);
  }
  if (!Number.isFinite(width) || !Number.isFinite(height) || width <= 0 || height <= 0) {
    throw new Error("--width/--height must be positive numbers");
  }
  return { kind, csvs, out, width, height, title };
}

export function buildFigure(args: CliArgs): EChartsOption {
  if (args.kind === "trajectory") {
    const series = parseNormCsv(readFileSync(args.csvs[0], "utf-8"), args.csvs[0]);
    return trajectoryFigure(series, args.title ?? args.csvs[0]);
  }
  if (args.kind === "convergence") {
    const rows = parseConvergenceCsv(readFileSync(args.csvs[0], "utf-8"), args.csvs[0]);
    return convergenceFigure(rows, args.title ?? args.csvs[0]);
  }
  const seriesList = args.csvs.map((path) => parseNormCsv(readFileSync(path, "utf-8"), path));
  return ensembleFigure(seriesList, args.csvs, args.title ?? "ensemble norm_H");
}

export function main(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const svg = renderSvg(buildFigure(args), args.width, args.height);
    writeFileSync(args.out, svg, "utf-8");
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(err.message);
      return 2;
    }
    console.error((err as Error).stack ?? String(err));
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
