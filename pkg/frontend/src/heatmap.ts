/**
 * Deterministic SVG heatmap panels over an (epsilon, q) parameter grid.
 *
 * Output depends only on the spec and the CSV bytes: fixed layout, fixed
 * ramps, no timestamps, numbers formatted through one rounding helper.
 */

import { mkdirSync, writeFileSync } from "fs";
import { dirname } from "path";

import { Table, distinct, readTable, toNumber } from "./csv.js";
import { EXPLOIT_FILL, Scale, makeScale } from "./scales.js";
import { FigureSpec, SpecError } from "./spec.js";

const PANEL_W = 220;
const PANEL_H = 220;
const MARGIN_LEFT = 64;
const MARGIN_TOP = 30;
const MARGIN_BOTTOM = 52;
const PANEL_GAP = 18;
const BAR_GAP = 24;
const BAR_W = 14;
const BAR_TEXT = 58;

const X_COLUMN = "q";
const Y_COLUMN = "epsilon";
const X_TASK_RANGE: [number, number] = [0.5, 1];
const Y_TASK_RANGE: [number, number] = [0, 0.5];

/** Pixel coordinate rounded to 1/100 px, shortest decimal form. */
function px(v: number): string {
  return String(Math.round(v * 100) / 100);
}

/** Tick/colorbar value label, at most 3 decimals. */
function num(v: number): string {
  return String(Math.round(v * 1000) / 1000);
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function requireColumn(table: Table, name: string, what: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SpecError(`${what}: no column ${JSON.stringify(name)} in header [${table.header.join(", ")}]`);
  }
  return idx;
}

/** Cell edges: midpoints between sorted centers, extended half a step. */
function edges(centers: number[], fallback: [number, number]): number[] {
  if (centers.length === 0) return [fallback[0], fallback[1]];
  if (centers.length === 1) {
    const half = (fallback[1] - fallback[0]) / 40;
    return [centers[0] - half, centers[0] + half];
  }
  const out = [centers[0] - (centers[1] - centers[0]) / 2];
  for (let i = 0; i + 1 < centers.length; i++) out.push((centers[i] + centers[i + 1]) / 2);
  out.push(centers[centers.length - 1] + (centers[centers.length - 1] - centers[centers.length - 2]) / 2);
  return out;
}

function sortedDistinct(table: Table, col: number): number[] {
  const seen = new Set<number>();
  for (const row of table.rows) seen.add(toNumber(row[col]));
  return [...seen].sort((a, b) => a - b);
}

/** "0.6" tick positions every 0.1 inside [lo, hi]. */
function ticks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let k = Math.ceil(lo * 10 - 1e-9); k * 0.1 <= hi + 1e-9; k++) out.push(k / 10);
  return out;
}

/** CSV cells match a panel key textually or as equal numbers. */
function keyMatches(cell: string, key: string): boolean {
  if (cell === key) return true;
  const a = Number(cell);
  const b = Number(key);
  return Number.isFinite(a) && Number.isFinite(b) && a === b;
}

interface Geometry {
  xEdges: number[];
  yEdges: number[];
  sx(v: number): number;
  sy(v: number): number;
}

function geometry(xs: number[], ys: number[]): Geometry {
  const xEdges = edges(xs, X_TASK_RANGE);
  const yEdges = edges(ys, Y_TASK_RANGE);
  const [x0, x1] = [xEdges[0], xEdges[xEdges.length - 1]];
  const [y0, y1] = [yEdges[0], yEdges[yEdges.length - 1]];
  return {
    xEdges,
    yEdges,
    sx: (v) => ((v - x0) / (x1 - x0)) * PANEL_W,
    sy: (v) => PANEL_H - ((v - y0) / (y1 - y0)) * PANEL_H,
  };
}

function panelCells(
  rows: string[][],
  cols: { x: number; y: number; v: number },
  geo: Geometry,
  xs: number[],
  ys: number[],
  scale: Scale,
  markZeros: boolean,
): string[] {
  const out: string[] = [];
  for (const row of rows) {
    const xi = xs.indexOf(toNumber(row[cols.x]));
    const yi = ys.indexOf(toNumber(row[cols.y]));
    const v = toNumber(row[cols.v]);
    const x = geo.sx(geo.xEdges[xi]);
    const w = geo.sx(geo.xEdges[xi + 1]) - x;
    const y = geo.sy(geo.yEdges[yi + 1]);
    const h = geo.sy(geo.yEdges[yi]) - y;
    const rect = (fill: string) =>
      `<rect x="${px(x)}" y="${px(y)}" width="${px(w)}" height="${px(h)}" fill="${fill}"/>`;
    if (Number.isNaN(v)) {
      out.push(rect("#ffffff"));
      out.push(
        `<line x1="${px(x)}" y1="${px(y + h)}" x2="${px(x + w)}" y2="${px(y)}" stroke="#bbbbbb" stroke-width="1"/>`,
      );
    } else if (markZeros && v === 0) {
      out.push(rect(EXPLOIT_FILL));
    } else {
      out.push(rect(scale.color(v)));
    }
  }
  return out;
}

/** Dashed overlay curve, clipped to the panel's epsilon range. */
function boundaryPath(points: [number, number][], geo: Geometry): string {
  const lo = geo.yEdges[0];
  const hi = geo.yEdges[geo.yEdges.length - 1];
  const pts = [...points].sort((a, b) => a[0] - b[0]);
  const segments: string[][] = [];
  let current: string[] = [];
  const push = (q: number, e: number) => current.push(`${px(geo.sx(q))},${px(geo.sy(e))}`);
  for (let i = 0; i < pts.length; i++) {
    const [q, e] = pts[i];
    const inside = e >= lo && e <= hi;
    if (i > 0) {
      const [pq, pe] = pts[i - 1];
      const prevInside = pe >= lo && pe <= hi;
      if (inside !== prevInside) {
        const cut = pe < lo || e < lo ? lo : hi;
        const t = (cut - pe) / (e - pe);
        push(pq + t * (q - pq), cut);
        if (!inside) {
          segments.push(current);
          current = [];
        }
      }
    }
    if (inside) push(q, e);
  }
  if (current.length > 0) segments.push(current);
  return segments
    .filter((seg) => seg.length >= 2)
    .map((seg) => `<polyline points="${seg.join(" ")}" fill="none" stroke="#000000" stroke-width="1.5" stroke-dasharray="6,4"/>`)
    .join("");
}

function axes(geo: Geometry, xLabel: string, yLabel: string, leftmost: boolean): string[] {
  const out: string[] = [];
  out.push(`<rect x="0" y="0" width="${PANEL_W}" height="${PANEL_H}" fill="none" stroke="#000000" stroke-width="1"/>`);
  for (const t of ticks(geo.xEdges[0], geo.xEdges[geo.xEdges.length - 1])) {
    const x = px(geo.sx(t));
    out.push(`<line x1="${x}" y1="${PANEL_H}" x2="${x}" y2="${PANEL_H + 4}" stroke="#000000" stroke-width="1"/>`);
    out.push(`<text x="${x}" y="${PANEL_H + 16}" text-anchor="middle" font-size="10">${num(t)}</text>`);
  }
  for (const t of ticks(geo.yEdges[0], geo.yEdges[geo.yEdges.length - 1])) {
    const y = px(geo.sy(t));
    out.push(`<line x1="-4" y1="${y}" x2="0" y2="${y}" stroke="#000000" stroke-width="1"/>`);
    if (leftmost) {
      out.push(`<text x="-8" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="10">${num(t)}</text>`);
    }
  }
  out.push(
    `<text x="${px(PANEL_W / 2)}" y="${PANEL_H + 34}" text-anchor="middle" font-size="11">${esc(xLabel)}</text>`,
  );
  if (leftmost) {
    out.push(
      `<text transform="translate(${px(-40)},${px(PANEL_H / 2)}) rotate(-90)" text-anchor="middle" font-size="11">${esc(yLabel)}</text>`,
    );
  }
  return out;
}

function colorbar(scale: Scale, label: string, markZeros: boolean): string[] {
  const out: string[] = [];
  const n = scale.stops.length;
  const stops = scale.stops
    .map((c, i) => `<stop offset="${num(i / (n - 1))}" stop-color="${c}"/>`)
    .join("");
  out.push(`<defs><linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0">${stops}</linearGradient></defs>`);
  out.push(`<rect x="0" y="0" width="${BAR_W}" height="${PANEL_H}" fill="url(#ramp)" stroke="#000000" stroke-width="1"/>`);
  const [lo, hi] = scale.domain;
  for (let i = 0; i <= 4; i++) {
    const v = lo + ((hi - lo) * i) / 4;
    const y = px(PANEL_H - (PANEL_H * i) / 4);
    out.push(`<line x1="${BAR_W}" y1="${y}" x2="${BAR_W + 4}" y2="${y}" stroke="#000000" stroke-width="1"/>`);
    out.push(`<text x="${BAR_W + 7}" y="${y}" dominant-baseline="middle" font-size="10">${num(v)}</text>`);
  }
  out.push(
    `<text transform="translate(${px(BAR_W + 44)},${px(PANEL_H / 2)}) rotate(90)" text-anchor="middle" font-size="11">${esc(label)}</text>`,
  );
  if (markZeros) {
    out.push(`<rect x="0" y="${PANEL_H + 14}" width="${BAR_W}" height="10" fill="${EXPLOIT_FILL}" stroke="#000000" stroke-width="0.5"/>`);
    out.push(`<text x="${BAR_W + 7}" y="${PANEL_H + 22}" font-size="10">= 0</text>`);
  }
  return out;
}

/** Render the figure to SVG text; reads the CSVs named by the spec. */
export function renderHeatmap(spec: FigureSpec): string {
  const table = readTable(spec.input);
  const cols = {
    x: requireColumn(table, X_COLUMN, spec.input),
    y: requireColumn(table, Y_COLUMN, spec.input),
    v: requireColumn(table, spec.value, spec.input),
  };
  const by = spec.panels.by;
  const byCol = by === null ? -1 : requireColumn(table, by, spec.input);
  let keys = spec.panels.order ?? (by === null ? [] : distinct(table, by));
  if (by === null || keys.length === 0) keys = [""];

  const scale = makeScale(spec.scale);
  const markZeros = spec.scale.family === "ratio";
  const xs = sortedDistinct(table, cols.x);
  const ys = sortedDistinct(table, cols.y);
  const geo = geometry(xs, ys);

  let boundary = "";
  if (spec.boundary !== undefined) {
    const curve = readTable(spec.boundary);
    const qi = requireColumn(curve, X_COLUMN, spec.boundary);
    const ei = requireColumn(curve, Y_COLUMN, spec.boundary);
    boundary = boundaryPath(
      curve.rows.map((r) => [toNumber(r[qi]), toNumber(r[ei])] as [number, number]),
      geo,
    );
  }

  const width = MARGIN_LEFT + keys.length * (PANEL_W + PANEL_GAP) + BAR_GAP + BAR_W + BAR_TEXT;
  const height = MARGIN_TOP + PANEL_H + MARGIN_BOTTOM;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
  );
  parts.push(`<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`);

  keys.forEach((key, i) => {
    const x0 = MARGIN_LEFT + i * (PANEL_W + PANEL_GAP);
    parts.push(`<g transform="translate(${px(x0)},${MARGIN_TOP})">`);
    const rows = by === null ? table.rows : table.rows.filter((r) => keyMatches(r[byCol], key));
    parts.push(...panelCells(rows, cols, geo, xs, ys, scale, markZeros));
    if (boundary !== "") parts.push(boundary);
    parts.push(...axes(geo, X_COLUMN, Y_COLUMN, i === 0));
    if (key !== "") {
      const title = Number.isFinite(Number(key)) ? `${by} = ${key}` : key;
      parts.push(`<text x="${px(PANEL_W / 2)}" y="-9" text-anchor="middle" font-size="12">${esc(title)}</text>`);
    }
    parts.push(`</g>`);
  });

  const barX = MARGIN_LEFT + keys.length * (PANEL_W + PANEL_GAP) - PANEL_GAP + BAR_GAP;
  parts.push(`<g transform="translate(${px(barX)},${MARGIN_TOP})">`);
  parts.push(...colorbar(scale, spec.label ?? spec.value, markZeros));
  parts.push(`</g>`);
  parts.push(`</svg>`);
  return parts.join("\n") + "\n";
}

/** Render and write spec.output; returns the path written. */
export function writeFigure(spec: FigureSpec): string {
  const svg = renderHeatmap(spec);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg, "utf8");
  return spec.output;
}
