import { describe, expect, it } from "vitest";

import { parseCsv } from "../src/csv";
import { render, renderComparison, renderSweep } from "../src/figures";

function panelCsv(panel: string, rows: string[]): string {
  const cols = panel === "effort"
    ? "t,u_abs_single,u_abs_cascaded"
    : "t,e_single,e_cascaded,u_single,u_cascaded";
  return `# kind: comparison_panel\n# panel: ${panel}\n${cols}\n${rows.join("\n")}\n`;
}

const STEP = parseCsv(panelCsv("step", ["0.0,1.0,1.0,0.1,0.2", "0.001,0.9,0.8,0.1,0.2"]));
const EFFORT = parseCsv(panelCsv("effort", ["0.0,0.5,0.2", "0.001,0.4,0.1"]));

function sweepCsv(cells: Array<[number, number, number, number, number, number]>): string {
  const body = cells.map((c) => c.join(",")).join("\n");
  return `# kind: sweep\nrow,col,kp2,ki2,stable,margin\n${body}\n`;
}

describe("renderComparison", () => {
  it("renders one classed panel per input with two series each", () => {
    const svg = renderComparison([STEP, STEP, STEP, EFFORT]);
    expect(svg.match(/class="panel"/g)).toHaveLength(4);
    expect(svg.match(/class="series series-single"/g)).toHaveLength(4);
    expect(svg.match(/class="series series-cascaded"/g)).toHaveLength(4);
  });

  it("renders empty axes for a header-only trace", () => {
    const empty = parseCsv(panelCsv("step", []));
    const svg = renderComparison([empty]);
    expect(svg).toContain('class="panel"');
    expect(svg).not.toContain("polyline");
  });

  it("rejects a panel missing its error columns", () => {
    const bad = parseCsv("# panel: step\nt,e_single\n0.0,1.0\n");
    expect(() => renderComparison([bad])).toThrow(/missing column: e_cascaded/);
  });
});

describe("renderSweep", () => {
  it("highlights exactly the unstable cells", () => {
    const table = parseCsv(sweepCsv([
      [0, 0, 0.1, 0.1, 1, 5.0],
      [0, 1, 0.2, 0.1, 0, -1.0],
      [1, 0, 0.1, 0.2, 1, 2.0],
      [1, 1, 0.2, 0.2, 1, 1.0],
    ]));
    const svg = renderSweep(table);
    expect(svg.match(/class="unstable"/g)).toHaveLength(1);
  });

  it("renders an all-stable grid without highlights", () => {
    const table = parseCsv(sweepCsv([[0, 0, 0.1, 0.1, 1, 5.0]]));
    const svg = renderSweep(table);
    expect(svg).not.toContain('class="unstable"');
  });

  it("names a missing schema column", () => {
    const bad = parseCsv("# kind: sweep\nrow,col,kp2,ki2\n0,0,0.1,0.1\n");
    expect(() => renderSweep(bad)).toThrow(/missing column: stable/);
  });
});

describe("render dispatch", () => {
  it("is deterministic for identical inputs", () => {
    const a = render("comparison", [STEP, EFFORT]);
    const b = render("comparison", [STEP, EFFORT]);
    expect(a).toBe(b);
  });

  it("rejects unknown kinds", () => {
    expect(() => render("histogram", [STEP])).toThrow(/unknown figure kind/);
  });

  it("mission figure draws state bands and series", () => {
    const csv = [
      "# kind: mission",
      "t,state,rotor_speed,yaw_error,alt_error",
      "0.0,disarmed,0.0,0.0,0.0",
      "0.001,armed,0.0,0.0,0.0",
      "0.002,rotor_spin_up,10.0,0.001,0.0",
      "0.003,rotor_spin_up,20.0,0.001,0.0",
    ].join("\n");
    const svg = render("mission", [parseCsv(csv)]);
    expect(svg.match(/class="panel"/g)).toHaveLength(3);
    expect(svg.match(/class="state-band/g)).toHaveLength(3);
    expect(svg).toContain("series-rotor");
  });
});
