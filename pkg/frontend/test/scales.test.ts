import { describe, expect, it } from "vitest";

import { makeScale, rampColor } from "../src/scales.js";

describe("rampColor", () => {
  const stops = ["#000000", "#808080", "#ffffff"];

  it("hits the stops exactly at their positions", () => {
    expect(rampColor(stops, 0)).toBe("#000000");
    expect(rampColor(stops, 0.5)).toBe("#808080");
    expect(rampColor(stops, 1)).toBe("#ffffff");
  });

  it("interpolates channelwise between stops", () => {
    expect(rampColor(stops, 0.25)).toBe("#404040");
  });

  it("clamps outside [0, 1]", () => {
    expect(rampColor(stops, -3)).toBe("#000000");
    expect(rampColor(stops, 7)).toBe("#ffffff");
  });
});

describe("makeScale", () => {
  it("ratio spans [0, max] with a default cap of 4", () => {
    expect(makeScale({ family: "ratio" }).domain).toEqual([0, 4]);
    expect(makeScale({ family: "ratio", max: 2 }).domain).toEqual([0, 2]);
  });

  it("alignment is always [0, 1]", () => {
    expect(makeScale({ family: "alignment" }).domain).toEqual([0, 1]);
  });

  it("diverging is symmetric about 0", () => {
    expect(makeScale({ family: "diverging", limit: 0.4 }).domain).toEqual([-0.4, 0.4]);
  });

  it("diverging midpoint is the neutral center color", () => {
    expect(makeScale({ family: "diverging", limit: 2 }).color(0)).toBe("#f7f7f7");
  });

  it("clamps infinities to the ramp ends", () => {
    const s = makeScale({ family: "ratio", max: 4 });
    expect(s.color(Infinity)).toBe(s.stops[s.stops.length - 1]);
    expect(s.color(-Infinity)).toBe(s.stops[0]);
    expect(s.color(99)).toBe(s.stops[s.stops.length - 1]);
  });

  it("maps equal values to equal colors across instances", () => {
    const a = makeScale({ family: "diverging", limit: 0.4 });
    const b = makeScale({ family: "diverging", limit: 0.4 });
    for (const v of [-0.4, -0.1, 0, 0.123, 0.4]) expect(a.color(v)).toBe(b.color(v));
  });
});
