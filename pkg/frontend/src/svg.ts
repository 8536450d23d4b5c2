/**
 * Minimal deterministic SVG assembly: fixed attribute order, fixed number
 * formatting, no timestamps, so identical inputs yield identical bytes.
 */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const rounded = Math.abs(x) < 1e-12 ? 0 : x;
  return Number(rounded.toPrecision(6)).toString();
}

export class LinearScale {
  constructor(
    private d0: number,
    private d1: number,
    private r0: number,
    private r1: number,
  ) {
    if (d1 === d0) {
      // degenerate domain: pad so a flat series still renders mid-range
      this.d0 = d0 - 1;
      this.d1 = d1 + 1;
    }
  }

  map(x: number): number {
    return this.r0 + ((x - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1]; // empty input
  return [lo, hi];
}

export function ticks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const out: number[] = [];
  for (let i = 0; i <= count; i++) out.push(lo + ((hi - lo) * i) / count);
  return out;
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  body = "",
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  return body === "" && name !== "text"
    ? `<${name} ${parts}/>`
    : `<${name} ${parts}>${body}</${name}>`;
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function polyline(
  xs: number[],
  ys: number[],
  sx: LinearScale,
  sy: LinearScale,
  stroke: string,
  cls: string,
): string {
  if (xs.length === 0) return "";
  const pts = xs
    .map((x, i) => `${fmt(sx.map(x))},${fmt(sy.map(ys[i]))}`)
    .join(" ");
  return tag("polyline", {
    class: cls,
    points: pts,
    fill: "none",
    stroke,
    "stroke-width": 1.2,
  });
}

export interface PanelFrame {
  x: number;
  y: number;
  width: number;
  height: number;
  title: string;
  xLabel: string;
  yLabel: string;
}

/** Axes box with tick labels; returns markup plus the inner plot scales. */
export function panel(
  frame: PanelFrame,
  xDomain: [number, number],
  yDomain: [number, number],
): { open: string; close: string; sx: LinearScale; sy: LinearScale } {
  const pad = { left: 62, right: 12, top: 26, bottom: 34 };
  const x0 = frame.x + pad.left;
  const x1 = frame.x + frame.width - pad.right;
  const y0 = frame.y + frame.height - pad.bottom;
  const y1 = frame.y + pad.top;
  const sx = new LinearScale(xDomain[0], xDomain[1], x0, x1);
  const sy = new LinearScale(yDomain[0], yDomain[1], y0, y1);
  let open = `<g class="panel">`;
  open += tag("rect", {
    x: frame.x, y: frame.y, width: frame.width, height: frame.height,
    fill: "#ffffff", stroke: "none",
  });
  open += tag("text", {
    x: frame.x + frame.width / 2, y: frame.y + 16,
    "text-anchor": "middle", "font-size": 12, "font-family": "sans-serif",
  }, escapeText(frame.title));
  // frame box
  open += tag("rect", {
    x: x0, y: y1, width: x1 - x0, height: y0 - y1,
    fill: "none", stroke: "#444444", "stroke-width": 1,
  });
  for (const t of ticks(xDomain[0], xDomain[1])) {
    const px = sx.map(t);
    open += tag("line", { x1: px, y1: y0, x2: px, y2: y0 + 4, stroke: "#444444" });
    open += tag("text", {
      x: px, y: y0 + 16, "text-anchor": "middle",
      "font-size": 9, "font-family": "sans-serif",
    }, fmt(t));
  }
  for (const t of ticks(yDomain[0], yDomain[1], 4)) {
    const py = sy.map(t);
    open += tag("line", { x1: x0 - 4, y1: py, x2: x0, y2: py, stroke: "#444444" });
    open += tag("text", {
      x: x0 - 7, y: py + 3, "text-anchor": "end",
      "font-size": 9, "font-family": "sans-serif",
    }, fmt(t));
  }
  open += tag("text", {
    x: (x0 + x1) / 2, y: frame.y + frame.height - 6, "text-anchor": "middle",
    "font-size": 10, "font-family": "sans-serif",
  }, escapeText(frame.xLabel));
  open += tag("text", {
    x: frame.x + 14, y: (y0 + y1) / 2, "text-anchor": "middle",
    "font-size": 10, "font-family": "sans-serif",
    transform: `rotate(-90 ${fmt(frame.x + 14)} ${fmt((y0 + y1) / 2)})`,
  }, escapeText(frame.yLabel));
  return { open, close: "</g>", sx, sy };
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">` +
    tag("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }) +
    body +
    `</svg>\n`
  );
}
