import { describe, expect, it } from "vitest";

import { SchemaError, numericColumn, parseCsv, stringColumn } from "../src/csv";

const SAMPLE = `# kind: mission
# dt [s]: 0.001
t,state,rotor_speed
0.0,disarmed,0.0
0.001,disarmed,1.5
`;

describe("parseCsv", () => {
  it("extracts comment metadata and rows", () => {
    const table = parseCsv(SAMPLE);
    expect(table.meta["kind"]).toBe("mission");
    expect(table.meta["dt [s]"]).toBe("0.001");
    expect(table.columns).toEqual(["t", "state", "rotor_speed"]);
    expect(table.rows).toHaveLength(2);
    expect(table.rows[1][2]).toBe(1.5);
  });

  it("keeps non-numeric cells as strings", () => {
    const table = parseCsv(SAMPLE);
    expect(stringColumn(table, "state")).toEqual(["disarmed", "disarmed"]);
  });

  it("accepts header-only files", () => {
    const table = parseCsv("# kind: empty\nt,x\n");
    expect(table.columns).toEqual(["t", "x"]);
    expect(table.rows).toHaveLength(0);
  });

  it("rejects files without a header", () => {
    expect(() => parseCsv("# just a comment\n")).toThrow(SchemaError);
  });
});

describe("numericColumn", () => {
  it("names the offending column when missing", () => {
    const table = parseCsv(SAMPLE);
    expect(() => numericColumn(table, "altitude")).toThrow(/missing column: altitude/);
  });

  it("names the column holding a non-numeric cell", () => {
    const table = parseCsv(SAMPLE);
    expect(() => numericColumn(table, "state")).toThrow(/column state/);
  });
});
