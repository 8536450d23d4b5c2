/**
 * Figure builders for the three export kinds:
 *
 * - comparison: four stacked panels (step tracking, model mismatch, load
 *   disturbance, command effort), two series each (single loop, cascade);
 * - sweep: stability map over a gain grid, unstable cells highlighted;
 * - mission: flight-state bands plus rotor speed and tracking errors.
 *
 * Pure string-in/string-out; inputs are never modified.
 */

import {
  SchemaError,
  Table,
  numericColumn,
  requireColumns,
  stringColumn,
} from "./csv";
import {
  LinearScale,
  document as svgDocument,
  escapeText,
  extent,
  fmt,
  panel,
  polyline,
  tag,
} from "./svg";

const SINGLE_COLOR = "#1f6fb4";
const CASCADE_COLOR = "#e07b00";
const UNSTABLE_COLOR = "#e07b00";

const STATE_COLORS: Record<string, string> = {
  disarmed: "#bdbdbd",
  armed: "#9e9e9e",
  kill: "#757575",
  rotor_spin_up: "#a5d6a7",
  vtol: "#4caf50",
  deceleration_preparation: "#ffcc80",
  rotor_deceleration: "#ffa726",
  forward_flight_initiation: "#fb8c00",
  forward_flight: "#fdd835",
  vtol_initiation: "#90caf9",
  rotor_acceleration: "#42a5f5",
};

const PANEL_W = 560;
const PANEL_H = 200;

interface ComparisonPanel {
  table: Table;
  title: string;
  yLabel: string;
  columns: [string, string];
}

function comparisonPanelKind(table: Table): ComparisonPanel {
  if (table.columns.includes("u_abs_single")) {
    requireColumns(table, ["t", "u_abs_single", "u_abs_cascaded"]);
    return {
      table,
      title: "command effort",
      yLabel: "|u|",
      columns: ["u_abs_single", "u_abs_cascaded"],
    };
  }
  requireColumns(table, ["t", "e_single", "e_cascaded"]);
  const names: Record<string, string> = {
    step: "step tracking error",
    modelerr: "tracking error under inertia mismatch",
    disturb: "tracking error under input disturbance",
  };
  const panelName = table.meta["panel"] ?? "step";
  return {
    table,
    title: names[panelName] ?? `tracking error (${panelName})`,
    yLabel: "e",
    columns: ["e_single", "e_cascaded"],
  };
}

export function renderComparison(tables: Table[]): string {
  if (tables.length === 0) throw new SchemaError("comparison needs input files");
  let body = "";
  tables.forEach((table, i) => {
    const spec = comparisonPanelKind(table);
    const t = numericColumn(table, "t");
    const a = numericColumn(table, spec.columns[0]);
    const b = numericColumn(table, spec.columns[1]);
    const frame = {
      x: 10,
      y: 10 + i * (PANEL_H + 8),
      width: PANEL_W,
      height: PANEL_H,
      title: spec.title,
      xLabel: "t [s]",
      yLabel: spec.yLabel,
    };
    const yDomain = extent(a.concat(b));
    const { open, close, sx, sy } = panel(frame, extent(t), yDomain);
    body += open;
    body += polyline(t, a, sx, sy, SINGLE_COLOR, "series series-single");
    body += polyline(t, b, sx, sy, CASCADE_COLOR, "series series-cascaded");
    body += close;
  });
  const height = 20 + tables.length * (PANEL_H + 8);
  return svgDocument(PANEL_W + 20, height, body);
}

export function renderSweep(table: Table): string {
  requireColumns(table, ["row", "col", "stable", "margin"]);
  if (table.columns.length < 6) {
    throw new SchemaError("missing column: sweep gain axes");
  }
  const gainX = table.columns[2];
  const gainY = table.columns[3];
  const rows = numericColumn(table, "row");
  const cols = numericColumn(table, "col");
  const xs = numericColumn(table, gainX);
  const ys = numericColumn(table, gainY);
  const stable = numericColumn(table, "stable");

  const frame = {
    x: 10, y: 10, width: PANEL_W, height: 420,
    title: `unstable region over (${gainX}, ${gainY})`,
    xLabel: gainX, yLabel: gainY,
  };
  const nx = rows.length ? Math.max(...cols) + 1 : 1;
  const ny = rows.length ? Math.max(...rows) + 1 : 1;
  const [xLo, xHi] = extent(xs);
  const [yLo, yHi] = extent(ys);
  const { open, close, sx, sy } = panel(frame, [xLo, xHi], [yLo, yHi]);
  let body = open;
  const cellW = Math.abs(sx.map(xHi) - sx.map(xLo)) / Math.max(nx - 1, 1);
  const cellH = Math.abs(sy.map(yHi) - sy.map(yLo)) / Math.max(ny - 1, 1);
  for (let i = 0; i < rows.length; i++) {
    if (stable[i] !== 0) continue;
    body += tag("rect", {
      class: "unstable",
      x: sx.map(xs[i]) - cellW / 2,
      y: sy.map(ys[i]) - cellH / 2,
      width: cellW,
      height: cellH,
      fill: UNSTABLE_COLOR,
      stroke: "none",
    });
  }
  body += close;
  return svgDocument(PANEL_W + 20, 440, body);
}

export function renderMission(table: Table): string {
  requireColumns(table, ["t", "state", "rotor_speed", "yaw_error", "alt_error"]);
  const t = numericColumn(table, "t");
  const states = stringColumn(table, "state");
  const rotor = numericColumn(table, "rotor_speed");
  const yawErr = numericColumn(table, "yaw_error");
  const altErr = numericColumn(table, "alt_error");

  const tDomain = extent(t);
  let body = "";

  // panel 1: flight-state timeline bands
  const bandFrame = {
    x: 10, y: 10, width: PANEL_W, height: 90,
    title: "flight state", xLabel: "", yLabel: "",
  };
  const band = panel(bandFrame, tDomain, [0, 1]);
  body += band.open;
  for (let i = 0; i < states.length; ) {
    let j = i;
    while (j + 1 < states.length && states[j + 1] === states[i]) j++;
    const x0 = band.sx.map(t[i]);
    const x1 = band.sx.map(j + 1 < t.length ? t[j + 1] : t[j]);
    body += tag("rect", {
      class: `state-band state-${states[i]}`,
      x: x0, y: band.sy.map(1), width: Math.max(x1 - x0, 0.5),
      height: Math.abs(band.sy.map(0) - band.sy.map(1)),
      fill: STATE_COLORS[states[i]] ?? "#cccccc",
      stroke: "none",
    });
    i = j + 1;
  }
  body += band.close;

  // panel 2: rotor speed
  const rotorFrame = {
    x: 10, y: 108, width: PANEL_W, height: PANEL_H,
    title: "rotor speed", xLabel: "t [s]", yLabel: "rad/s",
  };
  const rp = panel(rotorFrame, tDomain, extent(rotor));
  body += rp.open;
  body += polyline(t, rotor, rp.sx, rp.sy, SINGLE_COLOR, "series series-rotor");
  body += rp.close;

  // panel 3: tracking errors
  const errFrame = {
    x: 10, y: 108 + PANEL_H + 8, width: PANEL_W, height: PANEL_H,
    title: "tracking errors", xLabel: "t [s]", yLabel: "error",
  };
  const ep = panel(errFrame, tDomain, extent(yawErr.concat(altErr)));
  body += ep.open;
  body += polyline(t, yawErr, ep.sx, ep.sy, SINGLE_COLOR, "series series-yaw");
  body += polyline(t, altErr, ep.sx, ep.sy, CASCADE_COLOR, "series series-alt");
  body += ep.close;

  return svgDocument(PANEL_W + 20, 108 + 2 * (PANEL_H + 8) + 10, body);
}

export function render(kind: string, tables: Table[]): string {
  switch (kind) {
    case "comparison":
      return renderComparison(tables);
    case "sweep":
      if (tables.length !== 1) throw new SchemaError("sweep takes one input file");
      return renderSweep(tables[0]);
    case "mission":
      if (tables.length !== 1) throw new SchemaError("mission takes one input file");
      return renderMission(tables[0]);
    default:
      throw new SchemaError(`unknown figure kind: ${kind}`);
  }
}
