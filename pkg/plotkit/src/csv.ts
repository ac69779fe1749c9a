/**
 * Readers for the two CSV schemas plotkit consumes.  These schemas are
 * the whole contract with the simulation side; nothing else crosses the
 * boundary.
 *
 *   report:  name,estimate,std_error,target,tol,pass
 *   bracket: kind,i,j,t_lo,t_hi,x_lo,x_hi,shift,width_sq
 */

import Papa from "papaparse";

export const REPORT_HEADER = "name,estimate,std_error,target,tol,pass";
export const BRACKET_HEADER = "kind,i,j,t_lo,t_hi,x_lo,x_hi,shift,width_sq";

/** Bad input or bad invocation; the CLI maps this to exit code 2. */
export class UsageError extends Error {}

export interface ReportRow {
  name: string;
  estimate: number;
  stdError: number | null;
  target: number | null;
  tol: number | null;
  pass: boolean | null;
}

export interface BracketCell {
  kind: "inner" | "edge";
  i: number;
  j: number;
  tLo: number;
  tHi: number;
  xLo: number;
  xHi: number;
  shift: number;
  widthSq: number;
}

/**
 * Parse one numeric field.  Python's repr spells infinities "inf"/"-inf",
 * which Number() maps to NaN, so non-finite values are rejected here; the
 * bracket level bounds are the one place they are allowed (see field()).
 */
function num(field: string, where: string): number {
  const v = Number(field);
  if (field === "" || !Number.isFinite(v)) {
    throw new UsageError(`bad numeric field ${JSON.stringify(field)} in ${where}`);
  }
  return v;
}

function numOrNull(field: string, where: string): number | null {
  return field === "" ? null : num(field, where);
}

function parse(text: string, expectedHeader: string, label: string): string[][] {
  const out = Papa.parse<string[]>(text.replace(/\r\n/g, "\n").trimEnd(), {
    skipEmptyLines: true,
  });
  if (out.errors.length > 0) {
    throw new UsageError(`${label}: ${out.errors[0]!.message}`);
  }
  const rows = out.data;
  if (rows.length === 0 || rows[0]!.join(",") !== expectedHeader) {
    throw new UsageError(
      `${label}: expected header "${expectedHeader}", got "${rows[0]?.join(",") ?? ""}"`,
    );
  }
  if (rows.length === 1) {
    throw new UsageError(`${label}: no data rows`);
  }
  return rows.slice(1);
}

export function parseReport(text: string): ReportRow[] {
  return parse(text, REPORT_HEADER, "report CSV").map((r, idx) => {
    if (r.length !== 6) {
      throw new UsageError(`report CSV: row ${idx + 2} has ${r.length} fields, wanted 6`);
    }
    const where = `report row ${r[0]}`;
    return {
      name: r[0]!,
      estimate: num(r[1]!, where),
      stdError: numOrNull(r[2]!, where),
      target: numOrNull(r[3]!, where),
      tol: numOrNull(r[4]!, where),
      pass: r[5] === "" ? null : r[5] === "true",
    };
  });
}

export function parseBracketDump(text: string): BracketCell[] {
  return parse(text, BRACKET_HEADER, "bracket CSV").map((r, idx) => {
    if (r.length !== 9 || (r[0] !== "inner" && r[0] !== "edge")) {
      throw new UsageError(`bracket CSV: malformed row ${idx + 2}`);
    }
    const where = `bracket row ${idx + 2}`;
    return {
      kind: r[0],
      i: num(r[1]!, where),
      j: num(r[2]!, where),
      tLo: num(r[3]!, where),
      tHi: num(r[4]!, where),
      xLo: field(r[5]!, where),
      xHi: field(r[6]!, where),
      shift: num(r[7]!, where),
      widthSq: num(r[8]!, where),
    };
  });
}

// level bounds are the one place infinities are legitimate
function field(s: string, where: string): number {
  if (s === "inf") return Infinity;
  if (s === "-inf") return -Infinity;
  return num(s, where);
}
