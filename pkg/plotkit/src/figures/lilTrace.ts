/**
 * Normalized sup traces against their iterated-logarithm ceiling, from
 * report rows named trace_n<k>.  The horizontal ceiling line encodes the
 * bound value from the report's target column, so it is data.
 */

import { scaleLinear } from "d3";
import { UsageError, type ReportRow } from "../csv.js";
import { bottomAxis, caption, fmtTick, leftAxis, title } from "../axes.js";
import { el, px, text } from "../svg.js";
import type { Figure } from "./types.js";

const NAME_RE = /^trace_n(\d+)$/;

export function lilTrace(rows: ReportRow[], heading?: string): Figure {
  const pts = rows
    .map((r) => ({ m: NAME_RE.exec(r.name), r }))
    .filter((x) => x.m !== null)
    .map((x) => ({ n: Number(x.m![1]), value: x.r.estimate, bound: x.r.target }))
    .sort((a, b) => a.n - b.n);
  if (pts.length === 0) {
    throw new UsageError("lil-trace needs report rows named trace_n<k>");
  }
  const bound = pts.find((p) => p.bound !== null)?.bound;
  if (bound === undefined || bound === null) {
    throw new UsageError("lil-trace rows carry no ceiling in the target column");
  }

  const width = 640;
  const height = 440;
  const margin = { left: 70, right: 30, top: 50, bottom: 60 };
  const xs = pts.map((p) => Math.log(p.n));
  const top = Math.max(bound, ...pts.map((p) => p.value)) * 1.15;
  const sx = scaleLinear()
    .domain([xs[0]!, xs[xs.length - 1]! === xs[0]! ? xs[0]! + 1 : xs[xs.length - 1]!])
    .range([margin.left, width - margin.right]);
  const sy = scaleLinear().domain([0, top]).range([height - margin.bottom, margin.top]);

  const data: string[] = [];
  data.push(
    el("line", {
      x1: sx.range()[0]!,
      y1: sy(bound),
      x2: sx.range()[1]!,
      y2: sy(bound),
      stroke: "#d62728",
      "stroke-width": "1.5",
    }),
  );
  if (pts.length > 1) {
    const path = pts
      .map((p, i) => `${i === 0 ? "M" : "L"}${px(sx(Math.log(p.n)))} ${px(sy(p.value))}`)
      .join(" ");
    data.push(el("path", { d: path, fill: "none", stroke: "#1f77b4", "stroke-width": "1.5" }));
  }
  for (const p of pts) {
    data.push(
      el("circle", { cx: sx(Math.log(p.n)), cy: sy(p.value), r: "3.5", fill: "#1f77b4" }),
    );
  }

  const labels: string[] = [title(width, heading ?? "sup trace vs LIL ceiling")];
  labels.push(bottomAxis(sx, height - margin.bottom, xs, (v) => String(Math.round(Math.exp(v)))));
  labels.push(leftAxis(sy, margin.left, sy.ticks(5)));
  labels.push(caption(width / 2, height - 18, "ensemble size n"));
  labels.push(caption(22, height / 2, "sup / sqrt(2 log log n)", true));
  labels.push(
    text(width - margin.right - 4, sy(bound) - 6, `ceiling ${fmtTick(bound)}`, "end"),
  );

  return { width, height, data: data.join("\n"), labels: labels.join("\n") };
}
