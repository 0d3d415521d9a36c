import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { SchemaError } from "../src/csv.js";
import { buildRegionScene, renderRegionSvg } from "../src/region.js";

const curveText = readFileSync(new URL("fixtures/curve.csv", import.meta.url), "utf8");
const refText = readFileSync(new URL("../data/reference_points.csv", import.meta.url), "utf8");

describe("buildRegionScene", () => {
  const scene = buildRegionScene(curveText, refText);

  it("solid curve runs from (0.5, 1) to (1, ~0.8784)", () => {
    expect(scene.corollary[0]).toEqual([0.5, 1.0]);
    const [bEnd, sEnd] = scene.corollary[scene.corollary.length - 1];
    expect(bEnd).toBe(1.0);
    expect(Math.abs(sEnd - 0.8784)).toBeLessThan(1e-4);
  });

  it("hyperbola is clipped to s <= 1 and ends at (1, 0.6795)", () => {
    for (const [, s] of scene.hyperbola) {
      expect(s).toBeLessThanOrEqual(1.0 + 1e-12);
    }
    const [bEnd, sEnd] = scene.hyperbola[scene.hyperbola.length - 1];
    expect(bEnd).toBe(1.0);
    expect(sEnd).toBeCloseTo(0.6795, 10);
  });

  it("locates the crossover near b = 0.739", () => {
    expect(scene.crossover).toBeGreaterThan(0.73);
    expect(scene.crossover).toBeLessThan(0.75);
  });

  it("carries the labeled reference broken line", () => {
    expect(scene.reference).toHaveLength(9);
    expect(scene.reference[0]).toEqual({ b: 0.5, s: 1.0, label: "numerical critical curve" });
    expect(scene.reference[8].s).toBeCloseTo(0.5927, 10);
  });

  it("rejects a wrong header", () => {
    expect(() => buildRegionScene("b,s\n0.5,1\n", refText)).toThrow(SchemaError);
  });

  it("rejects non-increasing b", () => {
    const bad = "b,sc_upper,hammersley_s,region\n0.5,1.0,1.359,unknown\n0.5,0.99,1.3,unknown\n";
    expect(() => buildRegionScene(bad, refText)).toThrow(/strictly increasing/);
  });

  it("rejects a curve that does not start at (0.5, 1)", () => {
    const bad = "b,sc_upper,hammersley_s,region\n0.6,0.9,1.1,unknown\n";
    expect(() => buildRegionScene(bad, refText)).toThrow(/start at/);
  });

  it("rejects a reference table without a label column", () => {
    expect(() => buildRegionScene(curveText, "b,s\n0.5,1\n")).toThrow('missing column "label"');
  });
});

describe("renderRegionSvg", () => {
  it("is deterministic: repeated renders are byte-identical", () => {
    const a = renderRegionSvg(buildRegionScene(curveText, refText));
    const b = renderRegionSvg(buildRegionScene(curveText, refText));
    expect(a).toBe(b);
    expect(a.startsWith("<svg ")).toBe(true);
    expect(a.trimEnd().endsWith("</svg>")).toBe(true);
  });

  it("mentions the nonrigorous reference label", () => {
    const svg = renderRegionSvg(buildRegionScene(curveText, refText));
    expect(svg).toContain("numerical critical curve (dotted, nonrigorous)");
    expect(svg).toContain("b = 0.739");
  });
});
