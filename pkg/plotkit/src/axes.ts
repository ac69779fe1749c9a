/**
 * Axis decoration.  Ticks, captions and frame lines carry no data, so
 * everything produced here belongs in the label layer.
 */

import type { ScaleLinear } from "d3";
import { el, esc, px, text } from "./svg.js";

export function fmtTick(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

function tickLine(x1: number, y1: number, x2: number, y2: number): string {
  return el("line", { x1, y1, x2, y2, stroke: "#333", "stroke-width": "1" });
}

export function bottomAxis(
  scale: ScaleLinear<number, number>,
  y: number,
  ticks: number[],
  label: (v: number) => string = fmtTick,
): string {
  const [r0, r1] = scale.range() as [number, number];
  const parts = [tickLine(r0, y, r1, y)];
  for (const v of ticks) {
    const x = scale(v);
    parts.push(tickLine(x, y, x, y + 5));
    parts.push(text(x, y + 17, label(v)));
  }
  return parts.join("\n");
}

export function leftAxis(
  scale: ScaleLinear<number, number>,
  x: number,
  ticks: number[],
  label: (v: number) => string = fmtTick,
): string {
  const [r0, r1] = scale.range() as [number, number];
  const parts = [tickLine(x, r0, x, r1)];
  for (const v of ticks) {
    const y = scale(v);
    parts.push(tickLine(x - 5, y, x, y));
    parts.push(
      el(
        "text",
        {
          x: px(x - 8),
          y: px(y + 3.5),
          "text-anchor": "end",
          "font-family": "sans-serif",
          "font-size": "11",
          fill: "#333",
        },
        label(v),
      ),
    );
  }
  return parts.join("\n");
}

export function caption(x: number, y: number, s: string, vertical = false): string {
  const attrs: Record<string, string | number> = {
    x,
    y,
    "text-anchor": "middle",
    "font-family": "sans-serif",
    "font-size": "12",
    fill: "#333",
  };
  if (vertical) attrs.transform = `rotate(-90 ${px(x)} ${px(y)})`;
  return el("text", attrs, esc(s));
}

export function title(width: number, s: string): string {
  return el(
    "text",
    {
      x: px(width / 2),
      y: "22",
      "text-anchor": "middle",
      "font-family": "sans-serif",
      "font-size": "14",
      "font-weight": "bold",
      fill: "#111",
    },
    esc(s),
  );
}
