/**
 * String-built SVG with a strict two-layer structure.
 *
 * Geometry (everything whose shape encodes data) goes into
 * <g id="data-layer">; titles, axis text, legends and other decoration
 * go into <g id="label-layer">.  The data layer is what the checksum
 * contract covers: re-rendering the same CSV must reproduce it byte for
 * byte, while label overrides may change freely around it.
 */

import { createHash } from "node:crypto";

export const DATA_LAYER_OPEN = '<g id="data-layer">';
export const LABEL_LAYER_OPEN = '<g id="label-layer">';

/** Pixel coordinate formatting; two decimals keeps files small and stable. */
export function px(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  content = "",
): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? px(v) : v}"`)
    .join("");
  return content === "" ? `<${tag}${a}/>` : `<${tag}${a}>${content}</${tag}>`;
}

export function text(x: number, y: number, s: string, anchor = "middle", size = 11): string {
  return el(
    "text",
    {
      x,
      y,
      "text-anchor": anchor,
      "font-family": "sans-serif",
      "font-size": String(size),
      fill: "#333",
    },
    esc(s),
  );
}

export function svgDocument(
  width: number,
  height: number,
  dataLayer: string,
  labelLayer: string,
): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"` +
    ` viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
    `${DATA_LAYER_OPEN}\n${dataLayer}\n</g>\n` +
    `${LABEL_LAYER_OPEN}\n${labelLayer}\n</g>\n` +
    `</svg>\n`
  );
}

/** The slice of a rendered document the stability contract applies to. */
export function extractDataLayer(svg: string): string {
  const start = svg.indexOf(DATA_LAYER_OPEN);
  const end = svg.indexOf(LABEL_LAYER_OPEN);
  if (start < 0 || end < 0 || end <= start) {
    throw new Error("document has no data/label layer structure");
  }
  return svg.slice(start, end);
}

export function dataLayerChecksum(svg: string): string {
  return createHash("sha256").update(extractDataLayer(svg)).digest("hex");
}
