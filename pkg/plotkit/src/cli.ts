#!/usr/bin/env node
/**
 * plotkit <kind> --in report.csv --out fig.svg [--title "..."]
 *
 * Exit codes: 0 the figure was written, 1 render failed, 2 bad usage
 * (unknown kind, missing flags, unreadable or malformed input).
 */

import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { UsageError } from "./csv.js";
import { FIGURE_KINDS, render, type FigureKind } from "./render.js";

const USAGE = `usage: plotkit <kind> --in <report.csv> --out <fig.svg> [--title <text>]
kinds: ${FIGURE_KINDS.join(", ")}`;

export function run(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        title: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (err) {
    process.stderr.write(`plotkit: ${(err as Error).message}\n${USAGE}\n`);
    return 2;
  }

  if (parsed.values.help) {
    process.stdout.write(USAGE + "\n");
    return 0;
  }

  const [kind, ...extra] = parsed.positionals;
  if (kind === undefined || extra.length > 0) {
    process.stderr.write(`plotkit: expected exactly one figure kind\n${USAGE}\n`);
    return 2;
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    process.stderr.write(`plotkit: unknown kind "${kind}"\n${USAGE}\n`);
    return 2;
  }
  const input = parsed.values.in;
  const output = parsed.values.out;
  if (input === undefined || output === undefined) {
    process.stderr.write(`plotkit: --in and --out are required\n${USAGE}\n`);
    return 2;
  }

  try {
    const path = render({
      kind: kind as FigureKind,
      input,
      output,
      ...(parsed.values.title !== undefined ? { title: parsed.values.title } : {}),
    });
    process.stdout.write(`wrote ${path}\n`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`plotkit: ${err.message}\n`);
      return 2;
    }
    process.stderr.write(`plotkit: render failed: ${(err as Error).message}\n`);
    return 1;
  }
}

// run only when invoked as the entry script (directly or via the bin
// symlink), never when imported by tests
function isMain(): boolean {
  const entry = process.argv[1];
  if (entry === undefined) return false;
  try {
    return pathToFileURL(realpathSync(entry)).href === import.meta.url;
  } catch {
    return false;
  }
}

if (isMain()) {
  process.exit(run(process.argv.slice(2)));
}
