import { describe, expect, it } from "vitest";

import { convergenceSlope, leastSquares } from "../src/fit";

describe("convergenceSlope", () => {
  it("recovers exact first order from synthetic data", () => {
    const dts = [1e-3, 5e-4, 2.5e-4, 1.25e-4];
    const errors = dts.map((dt) => 0.37 * dt);
    expect(convergenceSlope(dts, errors)).toBeCloseTo(1.0, 2);
  });

  it("recovers second order", () => {
    const dts = [1e-2, 5e-3, 2.5e-3];
    const errors = dts.map((dt) => 2 * dt * dt);
    expect(convergenceSlope(dts, errors)).toBeCloseTo(2.0, 6);
  });
});

describe("leastSquares", () => {
  it("fits slope and intercept", () => {
    const fit = leastSquares([0, 1, 2, 3], [1, 3, 5, 7]);
    expect(fit.slope).toBeCloseTo(2);
    expect(fit.intercept).toBeCloseTo(1);
  });

  it("rejects degenerate abscissae", () => {
    expect(() => leastSquares([1, 1], [0, 1])).toThrowError(/degenerate/);
  });

  it("rejects single points", () => {
    expect(() => leastSquares([1], [2])).toThrowError(/two aligned/);
  });
});
