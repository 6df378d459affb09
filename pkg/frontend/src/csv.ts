export class CsvError extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

/** Parse simple comma-separated text: no quoting, CRLF or LF endings. */
export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV input");
  }
  const first = lines[0]!;
  const header = first.split(",");
  if (header.some((h) => h === "")) {
    throw new CsvError("blank column name in header");
  }
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i]!.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        `row ${i + 1} has ${cells.length} fields, header has ${header.length}`,
      );
    }
    rows.push(cells);
  }
  if (rows.length === 0) {
    throw new CsvError("CSV has a header but no data rows");
  }
  return { header, rows };
}

/** Map required column names to their indices, or fail naming the gap. */
export function columnIndex(table: Table, names: string[]): number[] {
  return names.map((name) => {
    const idx = table.header.indexOf(name);
    if (idx < 0) {
      throw new CsvError(`missing column "${name}"`);
    }
    return idx;
  });
}

/** A cell that must hold a finite number. */
export function num(cell: string, column: string, line: number): number {
  const v = Number(cell);
  if (cell === "" || !Number.isFinite(v)) {
    throw new CsvError(`column "${column}" row ${line}: "${cell}" is not a finite number`);
  }
  return v;
}

/** A cell that may be blank; blank maps to null. */
export function numOrBlank(cell: string, column: string, line: number): number | null {
  if (cell === "") return null;
  return num(cell, column, line);
}
