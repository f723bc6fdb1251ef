/**
 * Color scales, one fixed ramp and domain convention per figure family so
 * the same value renders as the same color in every run and every figure.
 */

export const SCALE_FAMILIES = ["ratio", "alignment", "diverging"] as const;
export type ScaleFamily = (typeof SCALE_FAMILIES)[number];

/** Flat fill for pure-exploitation cells (ratio exactly 0), kept off the
 *  ramp so the regime reads as categorical rather than "small value". */
export const EXPLOIT_FILL = "#d9d9d9";

const RAMPS: Record<ScaleFamily, string[]> = {
  ratio: ["#fff7ec", "#fdbb84", "#ef6548", "#b30000", "#5c0000"],
  alignment: ["#f7fcf5", "#c7e9c0", "#74c476", "#238b45", "#00441b"],
  diverging: ["#2166ac", "#92c5de", "#f7f7f7", "#f4a582", "#b2182b"],
};

export interface Scale {
  domain: [number, number];
  stops: string[];
  /** Color for a (possibly infinite) value; clamps outside the domain. */
  color(v: number): string;
}

function hexChannel(hex: string, i: number): number {
  return parseInt(hex.slice(1 + 2 * i, 3 + 2 * i), 16);
}

function mixHex(a: string, b: string, t: number): string {
  let out = "#";
  for (let i = 0; i < 3; i++) {
    const v = Math.round(hexChannel(a, i) + t * (hexChannel(b, i) - hexChannel(a, i)));
    out += v.toString(16).padStart(2, "0");
  }
  return out;
}

/** Piecewise-linear RGB interpolation along the stops, t in [0, 1]. */
export function rampColor(stops: string[], t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(pos));
  return mixHex(stops[i], stops[i + 1], pos - i);
}

export function makeScale(spec: { family: ScaleFamily; max?: number; limit?: number }): Scale {
  let domain: [number, number];
  switch (spec.family) {
    case "ratio":
      domain = [0, spec.max ?? 4];
      break;
    case "alignment":
      domain = [0, 1];
      break;
    case "diverging": {
      const limit = spec.limit ?? 1;
      domain = [-limit, limit];
      break;
    }
  }
  const stops = RAMPS[spec.family];
  const span = domain[1] - domain[0];
  return {
    domain,
    stops,
    color(v: number): string {
      return rampColor(stops, (v - domain[0]) / span);
    },
  };
}
