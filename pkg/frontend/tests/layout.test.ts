import { describe, expect, it } from "vitest";

import { layoutGraph } from "../src/layout.js";
import { GRAPH } from "./helpers.js";

const WIDTH = 520;
const HEIGHT = 420;

describe("force-directed layout", () => {
  it("is deterministic: the same graph lays out identically twice", () => {
    const first = layoutGraph(GRAPH.nodes, GRAPH.edges, WIDTH, HEIGHT);
    const second = layoutGraph(GRAPH.nodes, GRAPH.edges, WIDTH, HEIGHT);
    expect([...second.entries()]).toEqual([...first.entries()]);
  });

  it("places every node inside the viewport", () => {
    const positions = layoutGraph(GRAPH.nodes, GRAPH.edges, WIDTH, HEIGHT);
    expect(positions.size).toBe(GRAPH.nodes.length);
    for (const { x, y } of positions.values()) {
      expect(Number.isFinite(x)).toBe(true);
      expect(Number.isFinite(y)).toBe(true);
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThanOrEqual(WIDTH);
      expect(y).toBeGreaterThanOrEqual(0);
      expect(y).toBeLessThanOrEqual(HEIGHT);
    }
  });

  it("separates different seeds", () => {
    const defaultSeed = layoutGraph(GRAPH.nodes, GRAPH.edges, WIDTH, HEIGHT);
    const otherSeed = layoutGraph(GRAPH.nodes, GRAPH.edges, WIDTH, HEIGHT, "another-seed");
    const moved = GRAPH.nodes.some((id) => {
      const a = defaultSeed.get(id)!;
      const b = otherSeed.get(id)!;
      return a.x !== b.x || a.y !== b.y;
    });
    expect(moved).toBe(true);
  });

  it("handles empty and single-node graphs", () => {
    expect(layoutGraph([], [], WIDTH, HEIGHT).size).toBe(0);
    const single = layoutGraph(["only"], [], WIDTH, HEIGHT);
    expect(single.get("only")).toEqual({ x: WIDTH / 2, y: HEIGHT / 2 });
  });
});
