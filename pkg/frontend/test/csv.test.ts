import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { assertSharedGrid, parseConvergenceCsv, parseNormCsv, SchemaError } from "../src/csv";

const FIXTURE = new URL("../testdata/path_0000.csv", import.meta.url).pathname;
const CONV_FIXTURE = new URL("../testdata/converge.csv", import.meta.url).pathname;

const HEADER = "t,norm_H,norm_V,norm_L4,wa_norm_H,wa_norm_L4,bound_H,bound_V";

describe("parseNormCsv", () => {
  it("reads a production fixture", () => {
    const series = parseNormCsv(readFileSync(FIXTURE, "utf-8"), "path_0000.csv");
    expect(series.t.length).toBeGreaterThan(100);
    expect(series.t[0]).toBe(0);
    expect(series.norm_H.length).toBe(series.t.length);
  });

  it("names a missing column", () => {
    const text = HEADER.replace(",bound_V", "") + "\n0,0,0,0,0,0,0\n";
    expect(() => parseNormCsv(text, "broken.csv")).toThrowError(/bound_V/);
  });

  it("names an unexpected column", () => {
    const text = HEADER + ",extra\n0,0,0,0,0,0,0,0,1\n";
    expect(() => parseNormCsv(text, "broken.csv")).toThrowError(/extra/);
  });

  it("rejects unparseable cells with their column", () => {
    const text = HEADER + "\n0,zero,0,0,0,0,0,0\n";
    expect(() => parseNormCsv(text, "broken.csv")).toThrowError(/norm_H/);
  });

  it("rejects ragged rows", () => {
    const text = HEADER + "\n0,0,0\n";
    expect(() => parseNormCsv(text)).toThrowError(SchemaError);
  });

  it("rejects empty input", () => {
    expect(() => parseNormCsv("", "empty.csv")).toThrowError(/empty/);
  });
});

describe("parseConvergenceCsv", () => {
  it("reads the study fixture including a nan order", () => {
    const rows = parseConvergenceCsv(readFileSync(CONV_FIXTURE, "utf-8"), "converge.csv");
    expect(rows.length).toBeGreaterThanOrEqual(3);
    expect(Number.isNaN(rows[0].order)).toBe(true);
    expect(rows[1].order).toBeGreaterThan(0);
  });

  it("rejects fewer than three rows", () => {
    const text = "dt,error,order\n0.1,1.0,nan\n";
    expect(() => parseConvergenceCsv(text, "one.csv")).toThrowError(/3 refinement rows/);
  });

  it("rejects a foreign header", () => {
    expect(() => parseConvergenceCsv("a,b\n1,2\n")).toThrowError(/dt,error,order/);
  });
});

describe("assertSharedGrid", () => {
  it("rejects mismatched grids naming the offender", () => {
    const a = parseNormCsv(HEADER + "\n0,0,0,0,0,0,0,0\n1,0,0,0,0,0,0,0\n", "a.csv");
    const b = parseNormCsv(HEADER + "\n0,0,0,0,0,0,0,0\n2,0,0,0,0,0,0,0\n", "b.csv");
    expect(() => assertSharedGrid([a, b], ["a.csv", "b.csv"])).toThrowError(/b\.csv/);
  });
});
