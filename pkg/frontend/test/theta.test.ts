import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { SchemaError } from "../src/csv.js";
import { buildThetaScene, renderThetaSvg } from "../src/theta.js";

const HEADER = "kind,d,boundary,kappa,t,n,samples,estimate,stderr,seed";
const thetaText = readFileSync(new URL("fixtures/theta.csv", import.meta.url), "utf8");

function row(t: number, n: number, est: number, err: number): string {
  return `hypercubic,2,free-box,4,${t},${n},400,${est},${err},7`;
}

describe("buildThetaScene", () => {
  it("reads a t-sweep from the engine artifact", () => {
    const scene = buildThetaScene(thetaText);
    expect(scene.xLabel).toBe("clock parameter t");
    expect(scene.points).toHaveLength(19);
    expect(scene.points[0].x).toBeCloseTo(0.05, 12);
    expect(scene.points[18].estimate).toBe(1.0);
    expect(scene.warnings).toEqual([]);
  });

  it("switches the axis to n when only n varies", () => {
    const text = [HEADER, row(0.6, 10, 0.5, 0.02), row(0.6, 20, 0.4, 0.02)].join("\n");
    const scene = buildThetaScene(text);
    expect(scene.xLabel).toBe("window size n");
    expect(scene.points.map((p) => p.x)).toEqual([10, 20]);
  });

  it("accepts a single-row sweep", () => {
    const text = [HEADER, row(0.6, 20, 0.5, 0.025)].join("\n");
    const scene = buildThetaScene(text);
    expect(scene.points).toHaveLength(1);
    expect(scene.points[0]).toEqual({ x: 0.6, estimate: 0.5, stderr: 0.025 });
  });

  it("warns on a drop of more than 3 combined standard errors", () => {
    const text = [HEADER, row(0.5, 20, 0.8, 0.01), row(0.6, 20, 0.7, 0.01)].join("\n");
    const scene = buildThetaScene(text);
    expect(scene.warnings).toHaveLength(1);
    expect(scene.warnings[0]).toMatch(/drops by 0.1000/);
  });

  it("tolerates drops within noise", () => {
    const text = [HEADER, row(0.5, 20, 0.8, 0.05), row(0.6, 20, 0.7, 0.05)].join("\n");
    expect(buildThetaScene(text).warnings).toEqual([]);
  });

  it("rejects a malformed header", () => {
    expect(() => buildThetaScene("t,estimate\n0.5,0.5\n")).toThrow(SchemaError);
  });

  it("rejects a sweep over both t and n", () => {
    const text = [HEADER, row(0.5, 10, 0.1, 0.01), row(0.6, 20, 0.2, 0.01)].join("\n");
    expect(() => buildThetaScene(text)).toThrow(/both t and n/);
  });

  it("rejects an artifact with no rows", () => {
    expect(() => buildThetaScene(HEADER + "\n")).toThrow(/no data rows/);
  });
});

describe("renderThetaSvg", () => {
  it("is deterministic and draws one error bar and marker per point", () => {
    const a = renderThetaSvg(buildThetaScene(thetaText));
    const b = renderThetaSvg(buildThetaScene(thetaText));
    expect(a).toBe(b);
    expect((a.match(/<circle /g) ?? []).length).toBe(19);
  });

  it("renders a single point without a degenerate domain", () => {
    const text = [HEADER, row(0.6, 20, 0.5, 0.025)].join("\n");
    const svg = renderThetaSvg(buildThetaScene(text));
    expect(svg).toContain("<circle ");
    expect(svg).not.toContain("NaN");
  });
});
