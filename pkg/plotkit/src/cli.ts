/** Command line: render figure analogues from solver CSV outputs.
 *
 * Usage:
 *   plotkit slope-fit --series series.csv --mode blowup_rate --p 3 --out fig.svg
 *   plotkit slope-fit --series series.csv --mode pinch_rate --out fig.svg
 *   plotkit collapse --snapshots a.csv,b.csv,c.csv --p 3 --out fig.svg
 *   plotkit cone-plateau --snapshot snap.csv --out fig.svg
 */

import { render, type FigureSpec } from "./figures.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`malformed flags near '${key}'`);
    }
    flags.set(key.slice(2), argv[i + 1]);
  }
  return flags;
}

function need(flags: Map<string, string>, key: string): string {
  const v = flags.get(key);
  if (v === undefined) throw new Error(`missing required flag --${key}`);
  return v;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    const flags = parseFlags(rest);
    let spec: FigureSpec;
    if (command === "slope-fit") {
      const mode = need(flags, "mode");
      if (mode !== "blowup_rate" && mode !== "pinch_rate") {
        throw new Error(`mode must be blowup_rate or pinch_rate, got '${mode}'`);
      }
      spec = {
        kind: "slope_fit",
        mode,
        seriesCsv: need(flags, "series"),
        p: flags.has("p") ? Number(flags.get("p")) : undefined,
        out: need(flags, "out"),
      };
    } else if (command === "collapse") {
      spec = {
        kind: "collapse",
        snapshotCsvs: need(flags, "snapshots").split(","),
        p: Number(need(flags, "p")),
        out: need(flags, "out"),
      };
    } else if (command === "cone-plateau") {
      spec = {
        kind: "cone_plateau",
        snapshotCsv: need(flags, "snapshot"),
        out: need(flags, "out"),
      };
    } else {
      throw new Error(
        `unknown command '${command ?? ""}'; expected slope-fit | collapse | cone-plateau`,
      );
    }
    const out = render(spec);
    console.log(`wrote ${out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return command ? 2 : 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
