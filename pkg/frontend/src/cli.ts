import { readFileSync, writeFileSync } from "node:fs";

import { CsvError, parseCsv } from "./csv";
import { renderFig4 } from "./fig4";
import { renderFig5 } from "./fig5";

export interface CliResult {
  code: number;
  message?: string;
}

interface Args {
  which: "fig4" | "fig5";
  input: string;
  output: string;
  logY: boolean | null;
}

function parseArgs(argv: string[]): Args {
  let which: string | null = null;
  let input: string | null = null;
  let output: string | null = null;
  let logY: boolean | null = null;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i]!;
    const next = () => {
      i++;
      const v = argv[i];
      if (v === undefined) throw new CsvError(`flag ${a} needs a value`);
      return v;
    };
    if (a === "--which") which = next();
    else if (a === "--in") input = next();
    else if (a === "--out") output = next();
    else if (a === "--log-y") logY = true;
    else throw new CsvError(`unknown argument "${a}"`);
  }
  if (which !== "fig4" && which !== "fig5") {
    throw new CsvError('--which must be "fig4" or "fig5"');
  }
  if (!input) throw new CsvError("--in is required");
  if (!output) throw new CsvError("--out is required");
  return { which, input, output, logY };
}

/** Run the renderer; returns the exit code instead of calling exit. */
export function runCli(argv: string[]): CliResult {
  try {
    const args = parseArgs(argv);
    const text = readFileSync(args.input, "utf8");
    const table = parseCsv(text);
    const svg =
      args.which === "fig4"
        ? renderFig4(table, args.logY ?? false)
        : renderFig5(table);
    writeFileSync(args.output, svg, "utf8");
    return { code: 0 };
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    return { code: 2, message };
  }
}

export function main(): void {
  const res = runCli(process.argv.slice(2));
  if (res.message) {
    process.stderr.write(`error: ${res.message}\n`);
  }
  process.exit(res.code);
}

if (require.main === module) {
  main();
}
