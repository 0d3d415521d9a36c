/**
 * Reader for the engine's CSV artifacts: a `# config=<json>` line, a
 * mandatory header row, then plain comma-separated data (no quoting is used
 * by the emitter). Schema problems throw SchemaError so callers can exit
 * nonzero without writing partial output.
 */

export class SchemaError extends Error {}

export interface CsvTable {
  config: Record<string, unknown> | null;
  header: string[];
  rows: string[][];
}

const CONFIG_PREFIX = "# config=";

export function parseCsv(text: string): CsvTable {
  let config: Record<string, unknown> | null = null;
  const plain: string[] = [];
  for (const rawLine of text.split(/\r?\n/)) {
    const line = rawLine.trimEnd();
    if (line.startsWith(CONFIG_PREFIX)) {
      try {
        config = JSON.parse(line.slice(CONFIG_PREFIX.length));
      } catch {
        throw new SchemaError("unparseable config line");
      }
    } else if (line.startsWith("#") || line.trim() === "") {
      continue;
    } else {
      plain.push(line);
    }
  }
  if (plain.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const header = plain[0].split(",").map((s) => s.trim());
  const rows = plain.slice(1).map((line) => line.split(",").map((s) => s.trim()));
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new SchemaError(
        `row has ${row.length} fields, header has ${header.length}`,
      );
    }
  }
  return { config, header, rows };
}

export function requireColumns(table: CsvTable, names: string[]): number[] {
  return names.map((name) => {
    const idx = table.header.indexOf(name);
    if (idx < 0) {
      throw new SchemaError(`missing column "${name}"`);
    }
    return idx;
  });
}

export function numericColumn(table: CsvTable, index: number): number[] {
  return table.rows.map((row, i) => {
    const v = Number(row[index]);
    if (!Number.isFinite(v)) {
      throw new SchemaError(`non-numeric value ${row[index]} in data row ${i}`);
    }
    return v;
  });
}
