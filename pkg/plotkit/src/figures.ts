/** Figure builders over the solver's CSV outputs.
 *
 * Every predicted line is computed from the problem constants (the exponent
 * p, the pinch-rate constant, the cone angle), never fitted to the data
 * being plotted.
 */

import { writeFileSync } from "node:fs";
import { column, readCsv, type Table } from "./csv.js";
import { Figure } from "./svg.js";

/** |d(min r)/dt| = PINCH_RATE_CONSTANT / (min r)^3 in the similarity regime. */
export const PINCH_RATE_CONSTANT = 0.060575684;
/** Far-field slope of the selected pinch-off profile: tan(46.0444 deg). */
export const CONE_ANGLE_DEG = 46.0444;
export const CONE_SLOPE = Math.tan((CONE_ANGLE_DEG * Math.PI) / 180);

export type SlopeFitMode = "blowup_rate" | "pinch_rate";

export interface SlopeFitSpec {
  kind: "slope_fit";
  mode: SlopeFitMode;
  seriesCsv: string;
  /** reaction exponent, required for blowup_rate */
  p?: number;
  out: string;
}

export interface CollapseSpec {
  kind: "collapse";
  snapshotCsvs: string[];
  p: number;
  out: string;
}

export interface ConePlateauSpec {
  kind: "cone_plateau";
  snapshotCsv: string;
  out: string;
}

export type FigureSpec = SlopeFitSpec | CollapseSpec | ConePlateauSpec;

function positivePairs(xs: number[], ys: number[]): [number[], number[]] {
  const ox: number[] = [];
  const oy: number[] = [];
  for (let i = 0; i < xs.length; i++) {
    if (xs[i] > 0 && ys[i] > 0 && Number.isFinite(xs[i]) && Number.isFinite(ys[i])) {
      ox.push(xs[i]);
      oy.push(ys[i]);
    }
  }
  return [ox, oy];
}

function logRange(vals: number[]): [number, number] {
  const lo = Math.min(...vals);
  const hi = Math.max(...vals);
  return [lo / 1.5, hi * 1.5];
}

/** Predicted blow-up line: ln u = -1/(p-1) ln(T*-t) - ln(p-1)/(p-1). */
export function blowupPrediction(p: number, tau: number): number {
  return Math.exp((-1 / (p - 1)) * Math.log(tau) - Math.log(p - 1) / (p - 1));
}

/** Predicted pinch line: ln |dr/dt| = -3 ln r + ln(PINCH_RATE_CONSTANT). */
export function pinchPrediction(r: number): number {
  return PINCH_RATE_CONSTANT / r ** 3;
}

function renderSlopeFit(spec: SlopeFitSpec): string {
  const table = readCsv(spec.seriesCsv);
  let xs: number[];
  let ys: number[];
  let xLabel: string;
  let yLabel: string;
  let predict: (x: number) => number;
  if (spec.mode === "blowup_rate") {
    if (spec.p === undefined) {
      throw new Error("blowup_rate figure needs the exponent p");
    }
    const p = spec.p;
    const time = column(table, "time");
    const value = column(table, "value");
    const tStar = Math.max(...time);
    xs = time.map((t) => tStar - t);
    ys = value;
    xLabel = "time to blow-up T*-t";
    yLabel = "max value";
    predict = (tau) => blowupPrediction(p, tau);
  } else {
    const value = column(table, "value");
    const dvdt = column(table, "dvdt");
    xs = value;
    ys = dvdt.map(Math.abs);
    xLabel = "min radius";
    yLabel = "|d(min r)/dt|";
    predict = pinchPrediction;
  }
  const [px, py] = positivePairs(xs, ys);
  const [xmin, xmax] = logRange(px);
  const [ymin, ymax] = logRange(py);
  const fig = new Figure(
    { label: xLabel, scale: "log", min: xmin, max: xmax },
    { label: yLabel, scale: "log", min: ymin, max: ymax },
    spec.mode === "blowup_rate" ? "Blow-up rate law" : "Pinch rate law",
  );
  // predicted line sampled across the data's x-range, from constants only
  const lineX: number[] = [];
  const lineY: number[] = [];
  for (let i = 0; i <= 64; i++) {
    const x = Math.exp(
      Math.log(Math.min(...px)) +
        (i / 64) * (Math.log(Math.max(...px)) - Math.log(Math.min(...px))),
    );
    lineX.push(x);
    lineY.push(predict(x));
  }
  fig.line(lineX, lineY, "#d95f02");
  fig.markers(px, py, "#1b9e77");
  fig.legend([
    { label: "simulation", color: "#1b9e77" },
    { label: "predicted", color: "#d95f02" },
  ]);
  return fig.render();
}

/** Half-max crossing abscissa from tabulated (x, u), by linear interpolation. */
export function halfWidthOf(x: number[], u: number[]): number {
  const umax = Math.max(...u);
  const target = umax / 2;
  const iMax = u.indexOf(umax);
  for (let i = iMax; i < u.length - 1; i++) {
    if (u[i + 1] <= target && u[i] > target) {
      const f = (u[i] - target) / (u[i] - u[i + 1]);
      return x[i] + f * (x[i + 1] - x[i]);
    }
  }
  throw new Error("no half-max crossing right of the peak");
}

export function referenceProfile(eta: number, p: number): number {
  return (1 + eta * eta * (2 ** (p - 1) - 1)) ** (-1 / (p - 1));
}

function renderCollapse(spec: CollapseSpec): string {
  const fig = new Figure(
    { label: "similarity variable x / x_half", scale: "linear", min: -2, max: 2 },
    { label: "u / max u", scale: "linear", min: 0, max: 1.05 },
    "Similarity collapse of rescaled profiles",
  );
  const colors = ["#1b9e77", "#7570b3", "#e7298a", "#66a61e"];
  const etaLine: number[] = [];
  const refLine: number[] = [];
  for (let i = 0; i <= 200; i++) {
    const eta = -2 + (4 * i) / 200;
    etaLine.push(eta);
    refLine.push(referenceProfile(eta, spec.p));
  }
  spec.snapshotCsvs.forEach((path, k) => {
    const table = readCsv(path);
    const x = column(table, "x");
    const u = column(table, "u");
    const umax = Math.max(...u);
    const xh = halfWidthOf(x, u);
    const eta = x.map((v) => v / xh);
    const ure = u.map((v) => v / umax);
    fig.markers(eta, ure, colors[k % colors.length]);
  });
  fig.line(etaLine, refLine, "#d95f02");
  fig.legend([
    { label: "rescaled snapshots", color: "#1b9e77" },
    { label: "reference profile", color: "#d95f02" },
  ]);
  return fig.render();
}

function renderConePlateau(spec: ConePlateauSpec): string {
  const table = readCsv(spec.snapshotCsv);
  const z = column(table, "x");
  const r = column(table, "u");
  const rmin = Math.min(...r);
  const slopes: number[] = [];
  const zs: number[] = [];
  for (let i = 0; i < z.length - 1; i++) {
    const s = Math.abs((r[i + 1] - r[i]) / (z[i + 1] - z[i]));
    const mid = Math.abs(0.5 * (z[i] + z[i + 1]));
    if (mid > 0 && s > 0) {
      zs.push(mid);
      slopes.push(s);
    }
  }
  const [xmin, xmax] = logRange(zs.filter((v) => v >= rmin));
  const fig = new Figure(
    { label: "|z|", scale: "log", min: Math.max(xmin, rmin / 2), max: xmax },
    { label: "|dr/dz| (forward difference)", scale: "linear", min: 0, max: 1.6 },
    "Cone slope plateau near pinch-off",
  );
  fig.line([Math.max(xmin, rmin / 2), xmax], [CONE_SLOPE, CONE_SLOPE], "#d95f02", 2, "6,4");
  fig.markers(zs, slopes, "#1b9e77");
  fig.legend([
    { label: "simulation", color: "#1b9e77" },
    { label: `tan(${CONE_ANGLE_DEG}°)`, color: "#d95f02" },
  ]);
  return fig.render();
}

export function render(spec: FigureSpec): string {
  let svg: string;
  switch (spec.kind) {
    case "slope_fit":
      svg = renderSlopeFit(spec);
      break;
    case "collapse":
      svg = renderCollapse(spec);
      break;
    case "cone_plateau":
      svg = renderConePlateau(spec);
      break;
    default:
      throw new Error(`unknown figure kind ${(spec as FigureSpec).kind}`);
  }
  writeFileSync(spec.out, svg);
  return spec.out;
}
