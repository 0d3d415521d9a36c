/**
 * Region diagram: the solid critical-curve upper bound from the engine's
 * curve CSV, the dashed product-bound hyperbola s = 0.6795/b, a guide at
 * their crossover, and the labeled nonrigorous reference broken line shipped
 * as a data file. Axes are [0.5, 1] x [0.5, 1].
 */

import { CsvTable, SchemaError, numericColumn, parseCsv, requireColumns } from "./csv.js";
import { SvgCanvas } from "./svg.js";

export interface RegionScene {
  corollary: Array<[number, number]>;
  hyperbola: Array<[number, number]>;
  crossover: number;
  reference: Array<{ b: number; s: number; label: string }>;
}

export function readCurveTable(text: string): CsvTable {
  const table = parseCsv(text);
  const expected = ["b", "sc_upper", "hammersley_s", "region"];
  if (table.header.join(",") !== expected.join(",")) {
    throw new SchemaError(`curve CSV header must be ${expected.join(",")}`);
  }
  if (table.rows.length === 0) {
    throw new SchemaError("curve CSV has no data rows");
  }
  const b = numericColumn(table, 0);
  for (let i = 1; i < b.length; i++) {
    if (!(b[i] > b[i - 1])) {
      throw new SchemaError("curve CSV: b must be strictly increasing");
    }
  }
  const sc = numericColumn(table, 1);
  if (Math.abs(b[0] - 0.5) > 1e-12 || Math.abs(sc[0] - 1.0) > 1e-12) {
    throw new SchemaError("curve CSV must start at (b, sc_upper) = (0.5, 1)");
  }
  return table;
}

export function readReferenceTable(text: string): Array<{ b: number; s: number; label: string }> {
  const table = parseCsv(text);
  const [bi, si, li] = requireColumns(table, ["b", "s", "label"]);
  if (table.rows.length === 0) {
    throw new SchemaError("reference CSV has no data rows");
  }
  return table.rows.map((row) => ({
    b: Number(row[bi]),
    s: Number(row[si]),
    label: row[li],
  }));
}

export function buildRegionScene(curveText: string, referenceText: string): RegionScene {
  const table = readCurveTable(curveText);
  const b = numericColumn(table, 0);
  const sc = numericColumn(table, 1);
  const ham = numericColumn(table, 2);
  const corollary: Array<[number, number]> = b.map((x, i) => [x, sc[i]]);
  const hyperbola: Array<[number, number]> = b
    .map((x, i) => [x, ham[i]] as [number, number])
    .filter(([, s]) => s <= 1.0 + 1e-12);
  // crossover: sign change of sc_upper - hammersley_s, linearly interpolated
  let crossover = NaN;
  for (let i = 1; i < b.length; i++) {
    const f0 = sc[i - 1] - ham[i - 1];
    const f1 = sc[i] - ham[i];
    if (f0 <= 0 && f1 > 0) {
      crossover = b[i - 1] + ((b[i] - b[i - 1]) * -f0) / (f1 - f0);
      break;
    }
  }
  return {
    corollary,
    hyperbola,
    crossover,
    reference: readReferenceTable(referenceText),
  };
}

export function renderRegionSvg(scene: RegionScene): string {
  const canvas = new SvgCanvas({ x0: 0.5, x1: 1.0, y0: 0.5, y1: 1.0 });
  canvas.axes("bond parameter b", "site parameter s",
    [0.5, 0.6, 0.7, 0.8, 0.9, 1.0], [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]);
  canvas.polyline(scene.corollary, "black");
  canvas.polyline(scene.hyperbola, "black", "8 4");
  if (Number.isFinite(scene.crossover)) {
    canvas.segment(scene.crossover, 0.5, scene.crossover, 1.0, "gray", "2 3");
    canvas.text(scene.crossover + 0.005, 0.52, `b = ${scene.crossover.toFixed(3)}`);
  }
  const refPts = scene.reference.map((p) => [p.b, p.s] as [number, number]);
  canvas.polyline(refPts, "gray", "1 3");
  for (const p of scene.reference) {
    canvas.circle(p.b, p.s, 2, "gray");
  }
  if (scene.reference.length > 0) {
    const last = scene.reference[scene.reference.length - 1];
    canvas.text(0.52, 0.97, "rigorous upper bound (solid)");
    canvas.text(0.52, 0.94, "product bound 0.6795/b (dashed)");
    canvas.text(0.52, 0.91, `${last.label} (dotted, nonrigorous)`);
  }
  return canvas.render();
}
