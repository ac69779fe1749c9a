/**
 * Log-log decay of the mean sup remainder from report rows named
 * mean_sup_n<k>, with the least-squares fit line and a dashed slope(-1/4)
 * guide anchored at the first point.  Both lines are geometry, not
 * decoration: the fit's tilt and its offset from the guide are the point
 * of the figure, so they live in the data layer.
 */

import { scaleLinear } from "d3";
import { UsageError, type ReportRow } from "../csv.js";
import { bottomAxis, caption, leftAxis, title } from "../axes.js";
import { el, text } from "../svg.js";
import type { Figure } from "./types.js";

const NAME_RE = /^mean_sup_n(\d+)$/;

export function bkLoglog(rows: ReportRow[], heading?: string): Figure {
  const pts = rows
    .map((r) => ({ m: NAME_RE.exec(r.name), r }))
    .filter((x) => x.m !== null)
    .map((x) => ({
      n: Number(x.m![1]),
      mean: x.r.estimate,
      se: x.r.stdError ?? 0,
    }))
    .sort((a, b) => a.n - b.n);
  if (pts.length < 2) {
    throw new UsageError("bk-loglog needs at least two report rows named mean_sup_n<k>");
  }
  if (pts.some((p) => p.mean <= 0)) {
    throw new UsageError("bk-loglog means must be positive for log axes");
  }

  const xs = pts.map((p) => Math.log(p.n));
  const ys = pts.map((p) => Math.log(p.mean));
  const xMean = xs.reduce((a, b) => a + b, 0) / xs.length;
  const yMean = ys.reduce((a, b) => a + b, 0) / ys.length;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < xs.length; i++) {
    sxx += (xs[i]! - xMean) ** 2;
    sxy += (xs[i]! - xMean) * (ys[i]! - yMean);
  }
  const slope = sxy / sxx;
  const intercept = yMean - slope * xMean;
  const reported = rows.find((r) => r.name === "slope")?.estimate;

  const width = 640;
  const height = 460;
  const margin = { left: 70, right: 30, top: 50, bottom: 60 };
  const yLo = Math.min(...ys) - 0.25;
  const yHi = Math.max(...ys) + 0.25;
  const sx = scaleLinear()
    .domain([xs[0]!, xs[xs.length - 1]!])
    .range([margin.left, width - margin.right]);
  const sy = scaleLinear()
    .domain([yLo, yHi])
    .range([height - margin.bottom, margin.top]);

  const data: string[] = [];
  for (const p of pts) {
    const x = sx(Math.log(p.n));
    if (p.se > 0 && p.mean - p.se > 0) {
      data.push(
        el("line", {
          x1: x,
          y1: sy(Math.log(p.mean - p.se)),
          x2: x,
          y2: sy(Math.log(p.mean + p.se)),
          stroke: "#1f77b4",
          "stroke-width": "1.5",
        }),
      );
    }
  }
  const line = (m: number, b: number, stroke: string, dash: string) =>
    el("line", {
      x1: sx(xs[0]!),
      y1: sy(b + m * xs[0]!),
      x2: sx(xs[xs.length - 1]!),
      y2: sy(b + m * xs[xs.length - 1]!),
      stroke,
      "stroke-width": "1.5",
      "stroke-dasharray": dash,
    });
  data.push(line(slope, intercept, "#d62728", "none"));
  // guide pinned to the first observation
  data.push(line(-0.25, ys[0]! + 0.25 * xs[0]!, "#7f7f7f", "5,4"));
  for (const p of pts) {
    data.push(
      el("circle", {
        cx: sx(Math.log(p.n)),
        cy: sy(Math.log(p.mean)),
        r: "3.5",
        fill: "#1f77b4",
      }),
    );
  }

  const labels: string[] = [title(width, heading ?? "sup remainder decay (log-log)")];
  labels.push(
    bottomAxis(sx, height - margin.bottom, xs, (v) => String(Math.round(Math.exp(v)))),
  );
  const yTicks = sy.ticks(5);
  labels.push(leftAxis(sy, margin.left, yTicks, (v) => Number(Math.exp(v).toPrecision(2)).toString()));
  labels.push(caption(width / 2, height - 18, "ensemble size n"));
  labels.push(caption(22, height / 2, "mean sup remainder", true));
  const slopeText = `fit slope ${slope.toFixed(3)}` +
    (reported !== undefined ? ` (report ${reported.toFixed(3)})` : "");
  labels.push(text(width - margin.right - 4, margin.top + 14, slopeText, "end"));
  labels.push(text(width - margin.right - 4, margin.top + 30, "dashed guide: slope -1/4", "end"));

  return { width, height, data: data.join("\n"), labels: labels.join("\n") };
}
