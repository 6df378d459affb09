import { Table, columnIndex, num } from "./csv";
import {
  FRAME,
  Marker,
  PALETTE,
  Plot,
  Series,
  linearScale,
  logScale,
  renderSvg,
} from "./svg";

const MARKERS: Marker[] = ["circle", "square", "triangle", "diamond"];

export interface Fig4Series {
  q: string;
  points: Array<[number, number]>;
}

/** One series per q value, points sorted by K. */
export function fig4Series(table: Table): Fig4Series[] {
  const [qi, , ki, di] = columnIndex(table, ["q", "n", "K", "divergence_bits"]);
  const order: string[] = [];
  const byQ = new Map<string, Array<[number, number]>>();
  table.rows.forEach((row, idx) => {
    const line = idx + 2;
    const q = row[qi!]!;
    const K = num(row[ki!]!, "K", line);
    const d = num(row[di!]!, "divergence_bits", line);
    if (!byQ.has(q)) {
      byQ.set(q, []);
      order.push(q);
    }
    byQ.get(q)!.push([K, d]);
  });
  return order.map((q) => ({
    q,
    points: byQ.get(q)!.slice().sort((a, b) => a[0] - b[0]),
  }));
}

export function renderFig4(table: Table, logY = false): string {
  const series = fig4Series(table);
  let kMax = 1;
  let dMax = 0;
  let dMin = Infinity;
  for (const s of series) {
    for (const [k, d] of s.points) {
      kMax = Math.max(kMax, k);
      dMax = Math.max(dMax, d);
      if (d > 0) dMin = Math.min(dMin, d);
    }
  }
  const { width, height, left, right, top, bottom } = FRAME;
  const x = linearScale(1, kMax, left, width - right);
  const y = logY
    ? logScale(dMin / 1.5, dMax * 1.2, height - bottom, top)
    : linearScale(0, dMax * 1.08, height - bottom, top);
  const drawn: Series[] = series.map((s, i) => ({
    label: `q = ${s.q}`,
    points: logY ? s.points.filter(([, d]) => d > 0) : s.points,
    dash: "solid",
    marker: MARKERS[i % MARKERS.length]!,
    color: PALETTE[i % PALETTE.length]!,
  }));
  const plot: Plot = {
    xLabel: "codebook size K",
    yLabel: "divergence (bits)",
    x,
    y,
    series: drawn,
  };
  return renderSvg(plot);
}
