/**
 * Rectangle diagram of a bracket family dump: one rect per (time cell,
 * level cell), inner cells shaded by their L2 width, edge (tail) cells
 * in a fixed warm tone.  Infinite tail levels are clipped to a margin
 * just beyond the finite level range.
 */

import { interpolateBlues, scaleLinear } from "d3";
import { UsageError, type BracketCell } from "../csv.js";
import { bottomAxis, caption, leftAxis, title } from "../axes.js";
import { el, text } from "../svg.js";
import type { Figure } from "./types.js";

export function bracketGrid(cells: BracketCell[], heading?: string): Figure {
  if (cells.length === 0) {
    throw new UsageError("bracket-grid needs at least one cell row");
  }
  const finite = cells.flatMap((c) => [c.xLo, c.xHi]).filter(Number.isFinite);
  if (finite.length === 0) {
    throw new UsageError("bracket-grid found no finite level bounds");
  }
  let xMin = Math.min(...finite);
  let xMax = Math.max(...finite);
  const pad = 0.08 * (xMax - xMin || 1);
  xMin -= pad;
  xMax += pad;
  const tMin = Math.min(...cells.map((c) => c.tLo));
  const tMax = Math.max(...cells.map((c) => c.tHi));
  const maxW = Math.max(...cells.map((c) => c.widthSq)) || 1;

  const width = 640;
  const height = 520;
  const margin = { left: 70, right: 30, top: 50, bottom: 60 };
  const st = scaleLinear().domain([tMin, tMax]).range([margin.left, width - margin.right]);
  const sx = scaleLinear().domain([xMin, xMax]).range([height - margin.bottom, margin.top]);

  const clipLo = (v: number) => (Number.isFinite(v) ? v : xMin);
  const clipHi = (v: number) => (Number.isFinite(v) ? v : xMax);

  const data: string[] = [];
  for (const c of cells) {
    const lo = clipLo(c.xLo);
    const hi = clipHi(c.xHi);
    const fill =
      c.kind === "inner" ? interpolateBlues(0.12 + 0.78 * (c.widthSq / maxW)) : "#fdbf6f";
    data.push(
      el("rect", {
        x: st(c.tLo),
        y: sx(hi),
        width: st(c.tHi) - st(c.tLo),
        height: sx(lo) - sx(hi),
        fill,
        stroke: "#ffffff",
        "stroke-width": "0.3",
      }),
    );
  }

  const labels: string[] = [title(width, heading ?? "bracket family cells")];
  labels.push(bottomAxis(st, height - margin.bottom, st.ticks(6)));
  labels.push(leftAxis(sx, margin.left, sx.ticks(6)));
  labels.push(caption(width / 2, height - 18, "time t"));
  labels.push(caption(22, height / 2, "level x", true));
  labels.push(el("rect", { x: width - 190, y: 30, width: 12, height: 12, fill: interpolateBlues(0.6) }));
  labels.push(text(width - 172, 40, "inner (shade = width^2)", "start"));
  labels.push(el("rect", { x: width - 190, y: 48, width: 12, height: 12, fill: "#fdbf6f" }));
  labels.push(text(width - 172, 58, "edge / tail", "start"));

  return { width, height, data: data.join("\n"), labels: labels.join("\n") };
}
