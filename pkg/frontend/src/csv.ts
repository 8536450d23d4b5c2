/**
 * Reader for the simulator's trace CSV dialect: optional `# key: value`
 * comment lines, then a header row, then data rows.  Values are parsed as
 * numbers where possible and kept as strings otherwise.
 */

export interface Table {
  meta: Record<string, string>;
  columns: string[];
  rows: (number | string)[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const meta: Record<string, string> = {};
  const lines = text.split(/\r?\n/);
  let i = 0;
  for (; i < lines.length; i++) {
    const line = lines[i];
    if (!line.startsWith("#")) break;
    const body = line.slice(1).trim();
    const sep = body.indexOf(":");
    if (sep > 0) meta[body.slice(0, sep).trim()] = body.slice(sep + 1).trim();
  }
  if (i >= lines.length || lines[i].trim() === "") {
    throw new SchemaError("csv has no header row");
  }
  const columns = lines[i].split(",");
  const rows: (number | string)[][] = [];
  for (i += 1; i < lines.length; i++) {
    const line = lines[i];
    if (line.trim() === "") continue;
    rows.push(line.split(",").map((cell) => {
      const value = Number(cell);
      return cell.trim() !== "" && Number.isFinite(value) ? value : cell;
    }));
  }
  return { meta, columns, rows };
}

function columnIndex(table: Table, name: string): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`missing column: ${name}`);
  }
  return idx;
}

export function numericColumn(table: Table, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row, r) => {
    const v = row[idx];
    if (typeof v !== "number") {
      throw new SchemaError(`non-numeric value in column ${name} at row ${r}`);
    }
    return v;
  });
}

export function stringColumn(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => String(row[idx]));
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) columnIndex(table, name);
}
