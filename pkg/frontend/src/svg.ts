export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const FRAME: Frame = {
  width: 720,
  height: 480,
  left: 70,
  right: 180,
  top: 24,
  bottom: 56,
};

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
  "#bcbd22",
  "#e377c2",
];

export type Dash = "solid" | "dashed" | "dotted" | "none";
export type Marker = "circle" | "square" | "triangle" | "diamond" | "none";

export interface Series {
  label: string;
  points: Array<[number, number]>;
  dash: Dash;
  marker: Marker;
  color: string;
}

export interface Scale {
  (v: number): number;
  ticks: number[];
  format(v: number): string;
}

/** Fixed-decimal coordinates keep the output byte-stable. */
export function px(v: number): string {
  return v.toFixed(2);
}

function tickStep(span: number): number {
  const raw = span / 6;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= raw) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  const f = (v: number) => outLo + ((v - lo) / span) * (outHi - outLo);
  const step = tickStep(span);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  const scale = f as Scale;
  scale.ticks = ticks;
  scale.format = (v: number) => {
    const digits = Math.max(0, -Math.floor(Math.log10(step)));
    return v.toFixed(Math.min(digits, 6));
  };
  return scale;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const f = (v: number) => outLo + ((Math.log10(v) - llo) / (lhi - llo)) * (outHi - outLo);
  const ticks: number[] = [];
  for (let e = Math.ceil(llo); e <= Math.floor(lhi + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  const scale = f as Scale;
  scale.ticks = ticks;
  scale.format = (v: number) => {
    if (v >= 1) return String(v);
    return v.toFixed(Math.max(0, -Math.floor(Math.log10(v) + 1e-9)));
  };
  return scale;
}

const DASHES: Record<Dash, string> = {
  solid: "",
  dashed: ' stroke-dasharray="7 4"',
  dotted: ' stroke-dasharray="2 3"',
  none: "",
};

function markerShape(m: Marker, x: number, y: number, color: string): string {
  const r = 3.2;
  switch (m) {
    case "circle":
      return `<circle cx="${px(x)}" cy="${px(y)}" r="${r}" fill="${color}"/>`;
    case "square":
      return `<rect x="${px(x - r)}" y="${px(y - r)}" width="${px(2 * r)}" height="${px(2 * r)}" fill="${color}"/>`;
    case "triangle":
      return `<path d="M ${px(x)} ${px(y - r - 0.6)} L ${px(x + r + 0.6)} ${px(y + r)} L ${px(x - r - 0.6)} ${px(y + r)} Z" fill="${color}"/>`;
    case "diamond":
      return `<path d="M ${px(x)} ${px(y - r - 1)} L ${px(x + r + 1)} ${px(y)} L ${px(x)} ${px(y + r + 1)} L ${px(x - r - 1)} ${px(y)} Z" fill="${color}"/>`;
    case "none":
      return "";
  }
}

export interface Plot {
  xLabel: string;
  yLabel: string;
  x: Scale;
  y: Scale;
  series: Series[];
}

/** Assemble the whole document; pure function of its arguments. */
export function renderSvg(plot: Plot): string {
  const { width, height, left, right, top, bottom } = FRAME;
  const x0 = left;
  const x1 = width - right;
  const y0 = height - bottom;
  const y1 = top;
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
  );
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  out.push(
    `<g font-family="Helvetica, Arial, sans-serif" font-size="12" fill="#222">`,
  );

  for (const t of plot.x.ticks) {
    const gx = plot.x(t);
    out.push(
      `<line x1="${px(gx)}" y1="${px(y0)}" x2="${px(gx)}" y2="${px(y1)}" stroke="#ddd" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${px(gx)}" y="${px(y0 + 18)}" text-anchor="middle">${plot.x.format(t)}</text>`,
    );
  }
  for (const t of plot.y.ticks) {
    const gy = plot.y(t);
    out.push(
      `<line x1="${px(x0)}" y1="${px(gy)}" x2="${px(x1)}" y2="${px(gy)}" stroke="#ddd" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${px(x0 - 8)}" y="${px(gy + 4)}" text-anchor="end">${plot.y.format(t)}</text>`,
    );
  }
  out.push(
    `<line x1="${px(x0)}" y1="${px(y0)}" x2="${px(x1)}" y2="${px(y0)}" stroke="#222" stroke-width="1"/>`,
  );
  out.push(
    `<line x1="${px(x0)}" y1="${px(y0)}" x2="${px(x0)}" y2="${px(y1)}" stroke="#222" stroke-width="1"/>`,
  );
  out.push(
    `<text x="${px((x0 + x1) / 2)}" y="${px(height - 14)}" text-anchor="middle">${plot.xLabel}</text>`,
  );
  out.push(
    `<text x="18" y="${px((y0 + y1) / 2)}" text-anchor="middle" transform="rotate(-90 18 ${px((y0 + y1) / 2)})">${plot.yLabel}</text>`,
  );

  for (const s of plot.series) {
    const pts = s.points.map(([vx, vy]) => [plot.x(vx), plot.y(vy)] as const);
    if (s.dash !== "none" && pts.length > 1) {
      const coords = pts.map(([gx, gy]) => `${px(gx)},${px(gy)}`).join(" ");
      out.push(
        `<polyline points="${coords}" fill="none" stroke="${s.color}" stroke-width="1.6"${DASHES[s.dash]}/>`,
      );
    }
    if (s.marker !== "none") {
      for (const [gx, gy] of pts) {
        out.push(markerShape(s.marker, gx, gy, s.color));
      }
    }
  }

  let ly = y1 + 10;
  const lx = x1 + 14;
  for (const s of plot.series) {
    if (s.dash !== "none") {
      out.push(
        `<line x1="${px(lx)}" y1="${px(ly)}" x2="${px(lx + 26)}" y2="${px(ly)}" stroke="${s.color}" stroke-width="1.6"${DASHES[s.dash]}/>`,
      );
    }
    if (s.marker !== "none") {
      out.push(markerShape(s.marker, lx + 13, ly, s.color));
    }
    out.push(`<text x="${px(lx + 32)}" y="${px(ly + 4)}">${s.label}</text>`);
    ly += 18;
  }

  out.push("</g>");
  out.push("</svg>");
  return out.join("\n") + "\n";
}
