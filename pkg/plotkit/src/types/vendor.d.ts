/**
 * Hand-written declarations for the two runtime dependencies, narrowed to
 * the surface plotkit uses.  Keeping these local avoids dragging in the
 * very large DefinitelyTyped bundles for a handful of functions.
 */

declare module "d3" {
  export interface ScaleLinear<Range, Output> {
    (value: number): Output;
    domain(): number[];
    domain(d: readonly number[]): this;
    range(): Range[];
    range(r: readonly number[]): this;
    ticks(count?: number): number[];
  }
  export function scaleLinear(): ScaleLinear<number, number>;
  /** Diverging red-white-blue ramp on [0, 1]. */
  export function interpolateRdBu(t: number): string;
  /** Sequential white-to-blue ramp on [0, 1]. */
  export function interpolateBlues(t: number): string;
}

declare module "papaparse" {
  interface ParseError {
    message: string;
    row?: number;
  }
  interface ParseResult<T> {
    data: T[];
    errors: ParseError[];
  }
  interface ParseConfig {
    skipEmptyLines?: boolean | "greedy";
    delimiter?: string;
  }
  const Papa: {
    parse<T>(input: string, config?: ParseConfig): ParseResult<T>;
  };
  export = Papa;
}
