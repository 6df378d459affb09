import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { parseCsv } from "../src/csv";
import { Y_HI, Y_LO, fig5Rows, renderFig5 } from "../src/fig5";

const golden = () =>
  parseCsv(readFileSync(join(__dirname, "fixtures", "fig5.csv"), "utf8"));

describe("fig5", () => {
  it("parses every golden row into a typed record", () => {
    const rows = fig5Rows(golden());
    expect(rows.length).toBeGreaterThan(300);
    const kinds = new Set(rows.map((r) => r.series));
    expect(kinds).toEqual(new Set(["sim", "lb", "ub", "optdm"]));
  });

  it("keeps every bound curve below the algorithm curves at shared points", () => {
    const rows = fig5Rows(golden());
    const lbByNK = new Map<string, number>();
    for (const r of rows) {
      if (r.series === "lb" && r.K !== null) {
        lbByNK.set(`${r.n}:${r.K}`, r.lower!);
      }
    }
    let shared = 0;
    for (const r of rows) {
      if (r.series !== "sim") continue;
      expect(r.lower! <= r.selection! + 1e-9).toBe(true);
      const lb = lbByNK.get(`${r.n}:${r.K}`);
      if (lb !== undefined) {
        expect(lb <= r.selection! + 1e-9).toBe(true);
        shared++;
      }
    }
    expect(shared).toBeGreaterThan(10);
  });

  it("uses the fixed logarithmic window", () => {
    expect(Y_LO).toBe(0.003);
    expect(Y_HI).toBe(1.7);
    const svg = renderFig5(golden());
    // decade ticks inside [0.003, 1.7]
    expect(svg).toContain(">0.01</text>");
    expect(svg).toContain(">0.1</text>");
    expect(svg).toContain(">1</text>");
    expect(svg).not.toContain(">10</text>");
  });

  it("draws dashed bounds, dotted upper bound, and DM markers", () => {
    const svg = renderFig5(golden());
    expect(svg).toContain('stroke-dasharray="7 4"');
    expect(svg).toContain('stroke-dasharray="2 3"');
    expect(svg).toContain("optimal DM");
    expect(svg).toContain("mlf n=10");
    expect(svg).toContain("llf n=20");
    expect(svg).toContain("bound n=10000");
  });

  it("is byte-identical across two renders", () => {
    const table = golden();
    const a = renderFig5(table);
    const b = renderFig5(table);
    expect(Buffer.from(a).equals(Buffer.from(b))).toBe(true);
  });

  it("rejects a sim row without a divergence value", () => {
    const text =
      "series,algo,n,q,r_info,K,selection_div_bits,lower_bound_bits\n" +
      "sim,mlf,10,0.11,0.2,4,,0.1\n";
    expect(() => fig5Rows(parseCsv(text))).toThrow(/lacks selection_div_bits/);
  });
});
