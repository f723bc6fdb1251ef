export { CsvError, Table, columnIndex, distinct, parseTable, readTable, toNumber } from "./csv.js";
export { renderHeatmap, writeFigure } from "./heatmap.js";
export { EXPLOIT_FILL, Scale, ScaleFamily, SCALE_FAMILIES, makeScale, rampColor } from "./scales.js";
export { FigureSpec, PanelLayout, ScaleSpec, SpecError, loadSpec, parseSpec } from "./spec.js";
