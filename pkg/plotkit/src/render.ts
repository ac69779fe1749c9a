/**
 * FigureSpec validation and dispatch.  render() is the whole public
 * surface: read one CSV, write one SVG, never touch anything else.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseBracketDump, parseReport, UsageError } from "./csv.js";
import { bkLoglog } from "./figures/bkLoglog.js";
import { bracketGrid } from "./figures/bracketGrid.js";
import { covHeatmap } from "./figures/covHeatmap.js";
import { lilTrace } from "./figures/lilTrace.js";
import type { Figure } from "./figures/types.js";
import { svgDocument } from "./svg.js";

export const FIGURE_KINDS = ["cov-heatmap", "bk-loglog", "lil-trace", "bracket-grid"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  title?: string;
}

export function renderToString(kind: FigureKind, csvText: string, title?: string): string {
  let fig: Figure;
  switch (kind) {
    case "cov-heatmap":
      fig = covHeatmap(parseReport(csvText), title);
      break;
    case "bk-loglog":
      fig = bkLoglog(parseReport(csvText), title);
      break;
    case "lil-trace":
      fig = lilTrace(parseReport(csvText), title);
      break;
    case "bracket-grid":
      fig = bracketGrid(parseBracketDump(csvText), title);
      break;
  }
  return svgDocument(fig.width, fig.height, fig.data, fig.labels);
}

export function render(spec: FigureSpec): string {
  if (!(FIGURE_KINDS as readonly string[]).includes(spec.kind)) {
    throw new UsageError(`unknown figure kind "${spec.kind}"; expected ${FIGURE_KINDS.join(", ")}`);
  }
  let csvText: string;
  try {
    csvText = readFileSync(spec.input, "utf8");
  } catch {
    throw new UsageError(`cannot read input ${spec.input}`);
  }
  const svg = renderToString(spec.kind, csvText, spec.title);
  writeFileSync(spec.output, svg, "utf8");
  return spec.output;
}
