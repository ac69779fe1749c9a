/**
 * Heatmap of empirical minus analytic covariance from report rows named
 * cov_<t1>_<t2>.  Cells the report does not carry stay neutral grey; the
 * color scale is diverging and symmetric around zero.
 */

import { interpolateRdBu } from "d3";
import { UsageError, type ReportRow } from "../csv.js";
import { caption, fmtTick, title } from "../axes.js";
import { el, text } from "../svg.js";
import type { Figure } from "./types.js";

const NAME_RE = /^cov_([0-9.]+)_([0-9.]+)$/;

export function covHeatmap(rows: ReportRow[], heading?: string): Figure {
  const devs = new Map<string, number>();
  const coordSet = new Set<number>();
  for (const row of rows) {
    const m = NAME_RE.exec(row.name);
    if (!m) continue;
    const a = Number(m[1]);
    const b = Number(m[2]);
    const dev = row.estimate - (row.target ?? 0);
    coordSet.add(a);
    coordSet.add(b);
    devs.set(`${a},${b}`, dev);
    devs.set(`${b},${a}`, dev);
  }
  if (devs.size === 0) {
    throw new UsageError("cov-heatmap needs report rows named cov_<t1>_<t2>");
  }
  const coords = Array.from(coordSet).sort((x, y) => x - y);
  const n = coords.length;

  const width = 560;
  const height = 520;
  const margin = { left: 70, right: 120, top: 50, bottom: 70 };
  const side = Math.min(width - margin.left - margin.right, height - margin.top - margin.bottom);
  const cell = side / n;
  const x0 = margin.left;
  const y0 = margin.top;

  let maxAbs = 0;
  for (const d of devs.values()) maxAbs = Math.max(maxAbs, Math.abs(d));
  if (maxAbs === 0) maxAbs = 1;
  const fill = (dev: number) => interpolateRdBu(0.5 - dev / (2 * maxAbs));

  const data: string[] = [];
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      // row j counts upward from the bottom so both axes increase outward
      const dev = devs.get(`${coords[i]},${coords[j]}`);
      data.push(
        el("rect", {
          x: x0 + i * cell,
          y: y0 + (n - 1 - j) * cell,
          width: cell,
          height: cell,
          fill: dev === undefined ? "#ededed" : fill(dev),
          stroke: "#ffffff",
          "stroke-width": "1",
        }),
      );
    }
  }

  const labels: string[] = [title(width, heading ?? "covariance deviation (estimate - target)")];
  for (let i = 0; i < n; i++) {
    const c = x0 + (i + 0.5) * cell;
    labels.push(text(c, y0 + side + 16, fmtTick(coords[i]!)));
    const r = y0 + (n - 1 - i + 0.5) * cell;
    labels.push(text(x0 - 12, r + 4, fmtTick(coords[i]!), "end"));
  }
  labels.push(caption(x0 + side / 2, y0 + side + 40, "t1"));
  labels.push(caption(x0 - 45, y0 + side / 2, "t2", true));

  // color bar: a stack of constant swatches, labelled at the extremes
  const barX = x0 + side + 28;
  const barH = side * 0.7;
  const barY = y0 + (side - barH) / 2;
  const steps = 24;
  for (let s = 0; s < steps; s++) {
    const dev = maxAbs - (2 * maxAbs * (s + 0.5)) / steps;
    labels.push(
      el("rect", {
        x: barX,
        y: barY + (barH * s) / steps,
        width: 14,
        height: barH / steps + 0.5,
        fill: fill(dev),
      }),
    );
  }
  labels.push(text(barX + 20, barY + 4, `+${fmtTick(Number(maxAbs.toPrecision(3)))}`, "start"));
  labels.push(text(barX + 20, barY + barH / 2 + 4, "0", "start"));
  labels.push(
    text(barX + 20, barY + barH + 4, `-${fmtTick(Number(maxAbs.toPrecision(3)))}`, "start"),
  );

  return { width, height, data: data.join("\n"), labels: labels.join("\n") };
}
