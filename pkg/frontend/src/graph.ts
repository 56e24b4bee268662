/**
 * Community graph view: nodes colored by community, edges filtered to the
 * threshold the server used, positions from the deterministic force layout.
 */

import { svgEl } from "./dom.js";
import { layoutGraph } from "./layout.js";

export interface GraphView {
  nodes: string[];
  /** [id_a, id_b, strength] */
  edges: [string, string, number][];
  /** blocks of document ids, as returned by the server */
  communities: string[][];
  /** edge-strength cutoff the communities were computed at; null keeps all */
  threshold: number | null;
}

/**
 * Golden-angle hue walk: distinct communities get visibly distinct colors
 * without a fixed-size palette.
 */
export function communityColor(index: number): string {
  if (index < 0) return "hsl(0 0% 62%)";
  const hue = (index * 137.50776405003785) % 360;
  return `hsl(${hue.toFixed(4)} 65% 52%)`;
}

export function renderCommunityGraph(view: GraphView, width = 520, height = 420): SVGSVGElement {
  const svg = svgEl("svg", {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    class: "community-graph",
    role: "img",
  });
  if (!view.nodes.length) {
    svg.appendChild(
      svgEl("text", { x: width / 2, y: height / 2, "text-anchor": "middle", class: "empty" }, "No graph loaded"),
    );
    return svg;
  }

  const communityOf = new Map<string, number>();
  view.communities.forEach((block, i) => {
    for (const id of block) communityOf.set(id, i);
  });

  const visible = view.edges.filter(([, , strength]) => view.threshold === null || strength >= view.threshold);
  const positions = layoutGraph(view.nodes, visible, width, height);

  for (const [a, b, strength] of visible) {
    const pa = positions.get(a);
    const pb = positions.get(b);
    if (!pa || !pb) continue;
    svg.appendChild(
      svgEl("line", {
        class: "edge",
        x1: pa.x,
        y1: pa.y,
        x2: pb.x,
        y2: pb.y,
        "data-strength": String(strength),
      }),
    );
  }

  for (const id of view.nodes) {
    const point = positions.get(id);
    if (!point) continue;
    const community = communityOf.get(id) ?? -1;
    const node = svgEl("circle", {
      class: "node",
      cx: point.x,
      cy: point.y,
      r: 6,
      fill: communityColor(community),
      "data-id": id,
      "data-community": String(community),
    });
    node.appendChild(svgEl("title", {}, id));
    svg.appendChild(node);
  }
  return svg;
}
