/** Least-squares line fit used for log-log convergence slopes. */

export interface LineFit {
  slope: number;
  intercept: number;
}

export function leastSquares(x: number[], y: number[]): LineFit {
  if (x.length !== y.length || x.length < 2) {
    throw new Error(`need at least two aligned points, got ${x.length}/${y.length}`);
  }
  const n = x.length;
  const mx = x.reduce((a, b) => a + b, 0) / n;
  const my = y.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (x[i] - mx) ** 2;
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx === 0) {
    throw new Error("degenerate fit: all abscissae identical");
  }
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}

/** Fitted slope of log2(error) against log2(dt). */
export function convergenceSlope(dts: number[], errors: number[]): number {
  return leastSquares(dts.map(Math.log2), errors.map(Math.log2)).slope;
}
