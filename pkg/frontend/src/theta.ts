/**
 * Percolation-probability plot: estimate against t (or against n when the
 * sweep is over window size), with +-1 stderr error bars. Adjacent points
 * whose estimate drops by more than 3 combined standard errors are flagged
 * as warnings since the curve is expected to be nondecreasing in t.
 */

import { SchemaError, numericColumn, parseCsv, requireColumns } from "./csv.js";
import { SvgCanvas } from "./svg.js";

export interface ThetaPoint {
  x: number;
  estimate: number;
  stderr: number;
}

export interface ThetaScene {
  xLabel: string;
  points: ThetaPoint[];
  warnings: string[];
}

const HEADER = ["kind", "d", "boundary", "kappa", "t", "n", "samples", "estimate", "stderr", "seed"];

export function buildThetaScene(text: string): ThetaScene {
  const table = parseCsv(text);
  if (table.header.join(",") !== HEADER.join(",")) {
    throw new SchemaError(`theta CSV header must be ${HEADER.join(",")}`);
  }
  if (table.rows.length === 0) {
    throw new SchemaError("theta CSV has no data rows");
  }
  const [ti, ni, ei, si] = requireColumns(table, ["t", "n", "estimate", "stderr"]);
  const t = numericColumn(table, ti);
  const n = numericColumn(table, ni);
  const est = numericColumn(table, ei);
  const err = numericColumn(table, si);
  // sweep axis: whichever of t / n actually varies; t wins for a single row
  const tVaries = new Set(t).size > 1;
  const nVaries = new Set(n).size > 1;
  if (tVaries && nVaries) {
    throw new SchemaError("theta CSV varies both t and n; plot one sweep at a time");
  }
  const xs = nVaries ? n : t;
  const xLabel = nVaries ? "window size n" : "clock parameter t";
  const points = xs.map((x, i) => ({ x, estimate: est[i], stderr: err[i] }));
  points.sort((a, b) => a.x - b.x);
  const warnings: string[] = [];
  if (!nVaries) {
    for (let i = 1; i < points.length; i++) {
      const drop = points[i - 1].estimate - points[i].estimate;
      const scale = Math.hypot(points[i - 1].stderr, points[i].stderr);
      if (drop > 3 * scale) {
        warnings.push(
          `estimate drops by ${drop.toFixed(4)} from x=${points[i - 1].x} to x=${points[i].x}, ` +
            `more than 3 combined standard errors`,
        );
      }
    }
  }
  return { xLabel, points, warnings };
}

export function renderThetaSvg(scene: ThetaScene): string {
  const xs = scene.points.map((p) => p.x);
  const lo = Math.min(...xs);
  const hi = Math.max(...xs);
  const pad = lo === hi ? Math.max(Math.abs(lo) * 0.1, 0.5) : (hi - lo) * 0.05;
  const canvas = new SvgCanvas({ x0: lo - pad, x1: hi + pad, y0: 0.0, y1: 1.0 });
  const xTicks = lo === hi ? [lo] : [lo, lo + (hi - lo) / 2, hi];
  canvas.axes(scene.xLabel, "percolation probability estimate",
    xTicks.map((v) => Number(v.toFixed(4))), [0, 0.25, 0.5, 0.75, 1]);
  for (const p of scene.points) {
    const y0 = Math.max(0, p.estimate - p.stderr);
    const y1 = Math.min(1, p.estimate + p.stderr);
    canvas.segment(p.x, y0, p.x, y1, "black");
  }
  canvas.polyline(scene.points.map((p) => [p.x, p.estimate] as [number, number]), "black");
  for (const p of scene.points) {
    canvas.circle(p.x, p.estimate, 2.5, "black");
  }
  scene.warnings.forEach((w, i) => {
    canvas.text(lo === hi ? lo - pad * 0.9 : lo, 0.97 - 0.04 * i, `warning: ${w}`, "start", 11);
  });
  return canvas.render();
}
