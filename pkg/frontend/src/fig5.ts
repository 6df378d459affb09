import { CsvError, Table, columnIndex, num, numOrBlank } from "./csv";
import {
  FRAME,
  PALETTE,
  Plot,
  Series,
  linearScale,
  logScale,
  renderSvg,
} from "./svg";

// Fixed display window for the rate/divergence plane.
export const Y_LO = 0.003;
export const Y_HI = 1.7;

export interface Fig5Row {
  series: string;
  algo: string;
  n: number;
  rInfo: number;
  K: number | null;
  selection: number | null;
  lower: number | null;
}

export function fig5Rows(table: Table): Fig5Row[] {
  const [si, ai, ni, , ri, ki, di, li] = columnIndex(table, [
    "series",
    "algo",
    "n",
    "q",
    "r_info",
    "K",
    "selection_div_bits",
    "lower_bound_bits",
  ]);
  return table.rows.map((row, idx) => {
    const line = idx + 2;
    const series = row[si!]!;
    const rec: Fig5Row = {
      series,
      algo: row[ai!]!,
      n: num(row[ni!]!, "n", line),
      rInfo: num(row[ri!]!, "r_info", line),
      K: numOrBlank(row[ki!]!, "K", line),
      selection: numOrBlank(row[di!]!, "selection_div_bits", line),
      lower: numOrBlank(row[li!]!, "lower_bound_bits", line),
    };
    if (series === "sim" && rec.selection === null) {
      throw new CsvError(`sim row ${line} lacks selection_div_bits`);
    }
    if ((series === "lb" || series === "sim") && rec.lower === null) {
      throw new CsvError(`row ${line} of series ${series} lacks lower_bound_bits`);
    }
    return rec;
  });
}

interface Curve {
  label: string;
  points: Array<[number, number]>;
  kind: "sim" | "lb" | "ub" | "optdm";
}

function gather(rows: Fig5Row[]): Curve[] {
  const order: string[] = [];
  const curves = new Map<string, Curve>();
  const push = (key: string, label: string, kind: Curve["kind"], x: number, y: number) => {
    if (!curves.has(key)) {
      curves.set(key, { label, points: [], kind });
      order.push(key);
    }
    curves.get(key)!.points.push([x, y]);
  };
  for (const r of rows) {
    if (r.series === "sim") {
      push(`sim:${r.algo}:${r.n}`, `${r.algo} n=${r.n}`, "sim", r.rInfo, r.selection!);
    } else if (r.series === "lb") {
      push(`lb:${r.n}`, `bound n=${r.n}`, "lb", r.rInfo, r.lower!);
    } else if (r.series === "ub" && r.selection !== null) {
      push(`ub:${r.n}`, `llf bound n=${r.n}`, "ub", r.rInfo, r.selection);
    } else if (r.series === "optdm" && r.selection !== null) {
      push("optdm", "optimal DM", "optdm", r.rInfo, r.selection);
    }
  }
  for (const c of curves.values()) {
    c.points.sort((a, b) => a[0] - b[0]);
  }
  return order.map((k) => curves.get(k)!);
}

export function renderFig5(table: Table): string {
  const rows = fig5Rows(table);
  const curves = gather(rows);
  let xMax = 0;
  for (const c of curves) {
    for (const [x] of c.points) xMax = Math.max(xMax, x);
  }
  const { width, height, left, right, top, bottom } = FRAME;
  const x = linearScale(0, Math.max(0.5, xMax) * 1.04, left, width - right);
  const y = logScale(Y_LO, Y_HI, height - bottom, top);
  const series: Series[] = curves.map((c, i) => {
    const points = c.points.filter(([, v]) => v >= Y_LO && v <= Y_HI);
    const color = PALETTE[i % PALETTE.length]!;
    switch (c.kind) {
      case "sim":
        return { label: c.label, points, dash: "solid", marker: "circle", color } as Series;
      case "lb":
        return { label: c.label, points, dash: "dashed", marker: "none", color } as Series;
      case "ub":
        return { label: c.label, points, dash: "dotted", marker: "none", color } as Series;
      case "optdm":
        return { label: c.label, points, dash: "none", marker: "diamond", color: "#000000" } as Series;
    }
  });
  const plot: Plot = {
    xLabel: "information rate (bits per symbol)",
    yLabel: "divergence (bits)",
    x,
    y,
    series,
  };
  return renderSvg(plot);
}
