/** Figure spec files: which CSV, which column, how to panel and color it. */

import { readFileSync } from "fs";
import { dirname, resolve } from "path";

import { SCALE_FAMILIES, ScaleFamily } from "./scales.js";

export class SpecError extends Error {}

export interface PanelLayout {
  /** Column whose distinct values produce one panel each (e.g. "objective",
   *  "gamma"); null renders everything into a single panel. */
  by: string | null;
  /** Explicit panel order; default is first appearance in the CSV. */
  order?: string[];
}

export interface ScaleSpec {
  family: ScaleFamily;
  /** Value mapped to the top of a ratio ramp (values above clamp). */
  max?: number;
  /** Half-range of a diverging ramp; the center is always 0. */
  limit?: number;
}

export interface FigureSpec {
  /** Heatmap source CSV, resolved relative to the spec file. */
  input: string;
  /** Output image path, resolved relative to the spec file. */
  output: string;
  /** Column rendered as cell color. */
  value: string;
  panels: PanelLayout;
  scale: ScaleSpec;
  /** Optional (q, epsilon) curve CSV drawn over every panel. */
  boundary?: string;
  /** Colorbar label; defaults to the value column name. */
  label?: string;
}

function fail(msg: string): never {
  throw new SpecError(msg);
}

function requireString(obj: Record<string, unknown>, key: string): string {
  const v = obj[key];
  if (typeof v !== "string" || v === "") fail(`spec.${key}: expected a non-empty string`);
  return v;
}

function optionalNumber(obj: Record<string, unknown>, key: string, where: string): number | undefined {
  const v = obj[key];
  if (v === undefined) return undefined;
  if (typeof v !== "number" || !Number.isFinite(v) || v <= 0) {
    fail(`${where}.${key}: expected a positive finite number`);
  }
  return v;
}

/** Validate a parsed JSON object into a FigureSpec. */
export function parseSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    fail("spec: expected a JSON object");
  }
  const obj = raw as Record<string, unknown>;

  const panelsRaw = obj.panels;
  if (typeof panelsRaw !== "object" || panelsRaw === null) fail("spec.panels: expected an object");
  const p = panelsRaw as Record<string, unknown>;
  if (p.by !== null && typeof p.by !== "string") fail("spec.panels.by: expected a column name or null");
  if (p.order !== undefined && (!Array.isArray(p.order) || p.order.some((x) => typeof x !== "string"))) {
    fail("spec.panels.order: expected an array of strings");
  }
  if (p.by === null && p.order !== undefined) {
    fail("spec.panels.order: meaningless without panels.by");
  }

  const scaleRaw = obj.scale;
  if (typeof scaleRaw !== "object" || scaleRaw === null) fail("spec.scale: expected an object");
  const s = scaleRaw as Record<string, unknown>;
  if (typeof s.family !== "string" || !(SCALE_FAMILIES as readonly string[]).includes(s.family)) {
    fail(`spec.scale.family: expected one of ${SCALE_FAMILIES.join(", ")}`);
  }

  const spec: FigureSpec = {
    input: requireString(obj, "input"),
    output: requireString(obj, "output"),
    value: requireString(obj, "value"),
    panels: { by: p.by as string | null, order: p.order as string[] | undefined },
    scale: {
      family: s.family as ScaleFamily,
      max: optionalNumber(s, "max", "spec.scale"),
      limit: optionalNumber(s, "limit", "spec.scale"),
    },
  };
  if (obj.boundary !== undefined) spec.boundary = requireString(obj, "boundary");
  if (obj.label !== undefined) spec.label = requireString(obj, "label");
  return spec;
}

/** Load a spec file and resolve its paths against the file's directory. */
export function loadSpec(path: string): FigureSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    if (err instanceof SyntaxError) fail(`${path}: not valid JSON (${err.message})`);
    throw err;
  }
  const spec = parseSpec(raw);
  const base = dirname(path);
  spec.input = resolve(base, spec.input);
  spec.output = resolve(base, spec.output);
  if (spec.boundary !== undefined) spec.boundary = resolve(base, spec.boundary);
  return spec;
}
