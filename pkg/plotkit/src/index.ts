export { parseBracketDump, parseReport, UsageError } from "./csv.js";
export type { BracketCell, ReportRow } from "./csv.js";
export { FIGURE_KINDS, render, renderToString } from "./render.js";
export type { FigureKind, FigureSpec } from "./render.js";
export { dataLayerChecksum, extractDataLayer } from "./svg.js";
