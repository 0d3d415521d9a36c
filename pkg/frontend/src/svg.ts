/**
 * Minimal deterministic SVG scene builder. No timestamps, no randomness,
 * fixed number formatting: identical inputs yield byte-identical files.
 */

export interface Rect {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export const WIDTH = 640;
export const HEIGHT = 480;
export const MARGIN = { left: 62, right: 18, top: 24, bottom: 46 };

const fmt = (v: number): string => v.toFixed(2);

export class SvgCanvas {
  private parts: string[] = [];
  constructor(private domain: Rect) {}

  px(x: number): number {
    const w = WIDTH - MARGIN.left - MARGIN.right;
    return MARGIN.left + ((x - this.domain.x0) / (this.domain.x1 - this.domain.x0)) * w;
  }

  py(y: number): number {
    const h = HEIGHT - MARGIN.top - MARGIN.bottom;
    return MARGIN.top + (1 - (y - this.domain.y0) / (this.domain.y1 - this.domain.y0)) * h;
  }

  polyline(points: Array<[number, number]>, stroke: string, dash?: string): void {
    const attr = dash ? ` stroke-dasharray="${dash}"` : "";
    const pts = points
      .map(([x, y]) => `${fmt(this.px(x))},${fmt(this.py(y))}`)
      .join(" ");
    this.parts.push(
      `<polyline fill="none" stroke="${stroke}" stroke-width="1.5"${attr} points="${pts}"/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(
      `<circle cx="${fmt(this.px(x))}" cy="${fmt(this.py(y))}" r="${r}" fill="${fill}"/>`,
    );
  }

  segment(x0: number, y0: number, x1: number, y1: number, stroke: string, dash?: string): void {
    const attr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(this.px(x0))}" y1="${fmt(this.py(y0))}" x2="${fmt(this.px(x1))}" ` +
        `y2="${fmt(this.py(y1))}" stroke="${stroke}" stroke-width="1"${attr}/>`,
    );
  }

  text(x: number, y: number, content: string, anchor = "start", size = 12): void {
    this.parts.push(
      `<text x="${fmt(this.px(x))}" y="${fmt(this.py(y))}" font-family="sans-serif" ` +
        `font-size="${size}" text-anchor="${anchor}">${escapeXml(content)}</text>`,
    );
  }

  axes(xLabel: string, yLabel: string, xTicks: number[], yTicks: number[]): void {
    const { x0, x1, y0, y1 } = this.domain;
    const frame =
      `<rect x="${fmt(this.px(x0))}" y="${fmt(this.py(y1))}" ` +
      `width="${fmt(this.px(x1) - this.px(x0))}" height="${fmt(this.py(y0) - this.py(y1))}" ` +
      `fill="none" stroke="black" stroke-width="1"/>`;
    this.parts.push(frame);
    for (const t of xTicks) {
      const X = fmt(this.px(t));
      this.parts.push(
        `<line x1="${X}" y1="${fmt(this.py(y0))}" x2="${X}" y2="${fmt(this.py(y0) + 5)}" stroke="black"/>`,
      );
      this.parts.push(
        `<text x="${X}" y="${fmt(this.py(y0) + 20)}" font-family="sans-serif" font-size="11" text-anchor="middle">${t}</text>`,
      );
    }
    for (const t of yTicks) {
      const Y = fmt(this.py(t));
      this.parts.push(
        `<line x1="${fmt(this.px(x0) - 5)}" y1="${Y}" x2="${fmt(this.px(x0))}" y2="${Y}" stroke="black"/>`,
      );
      this.parts.push(
        `<text x="${fmt(this.px(x0) - 9)}" y="${Y}" font-family="sans-serif" font-size="11" text-anchor="end" dominant-baseline="middle">${t}</text>`,
      );
    }
    this.parts.push(
      `<text x="${fmt((this.px(x0) + this.px(x1)) / 2)}" y="${HEIGHT - 8}" font-family="sans-serif" font-size="13" text-anchor="middle">${escapeXml(xLabel)}</text>`,
    );
    this.parts.push(
      `<text x="16" y="${fmt((this.py(y0) + this.py(y1)) / 2)}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 ${fmt((this.py(y0) + this.py(y1)) / 2)})">${escapeXml(yLabel)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
