/** Force-directed rendering of a skill-graph neighborhood.
 *
 * Layout comes from d3-force run to rest synchronously; drawing is plain
 * SVG. Skill and job nodes get typed classes for color, and RELATED_TO
 * edges that carried a skill path in the current results are flagged
 * "contributed" so the viewer can see which relations drove retrieval.
 */

import {
  forceCenter,
  forceCollide,
  forceLink,
  forceManyBody,
  forceSimulation,
  type SimulationLinkDatum,
  type SimulationNodeDatum,
} from "d3-force";

import { edgeKey } from "./state.js";
import type { GraphEdge, NeighborhoodResponse } from "./types.js";

const WIDTH = 640;
const HEIGHT = 440;
const SVG_NS = "http://www.w3.org/2000/svg";

interface LayoutNode extends SimulationNodeDatum {
  id: string;
  type: "skill" | "job";
  distance: number;
}

type LayoutLink = SimulationLinkDatum<LayoutNode> & { edge: GraphEdge };

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function runLayout(nodes: LayoutNode[], links: LayoutLink[]): void {
  const sim = forceSimulation(nodes)
    .force(
      "link",
      forceLink<LayoutNode, LayoutLink>(links)
        .id((n) => n.id)
        .distance(70),
    )
    .force("charge", forceManyBody().strength(-160))
    .force("center", forceCenter(WIDTH / 2, HEIGHT / 2))
    .force("collide", forceCollide(22))
    .stop();
  sim.tick(150);
}

export function renderNeighborhood(
  host: HTMLElement,
  neighborhood: NeighborhoodResponse,
  contributedKeys: ReadonlySet<string>,
): SVGSVGElement {
  const nodes: LayoutNode[] = neighborhood.nodes.map((n) => ({ ...n }));
  const links: LayoutLink[] = neighborhood.edges.map((edge) => ({
    source: edge.source,
    target: edge.target,
    edge,
  }));
  runLayout(nodes, links);

  const svg = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "graph-canvas",
    role: "img",
  }) as SVGSVGElement;

  for (const link of links) {
    const s = link.source as LayoutNode;
    const t = link.target as LayoutNode;
    const classes = ["edge", `relation-${link.edge.relation}`];
    if (
      link.edge.relation === "RELATED_TO" &&
      contributedKeys.has(edgeKey(link.edge.source, link.edge.target))
    ) {
      classes.push("contributed");
    }
    if (link.edge.preferred) classes.push("preferred");
    const line = svgEl("line", {
      class: classes.join(" "),
      x1: String(s.x ?? 0),
      y1: String(s.y ?? 0),
      x2: String(t.x ?? 0),
      y2: String(t.y ?? 0),
    });
    line.dataset.source = link.edge.source;
    line.dataset.target = link.edge.target;
    svg.append(line);
  }

  for (const node of nodes) {
    const group = svgEl("g", {
      class: `node node-${node.type} distance-${node.distance}`,
      transform: `translate(${node.x ?? 0}, ${node.y ?? 0})`,
    });
    group.dataset.id = node.id;
    const shape =
      node.type === "skill"
        ? svgEl("circle", { r: node.distance === 0 ? "14" : "9" })
        : svgEl("rect", { x: "-8", y: "-8", width: "16", height: "16", rx: "3" });
    group.append(shape);
    const label = svgEl("text", { class: "node-label", dy: "-14" });
    label.textContent = node.id;
    group.append(label);
    svg.append(group);
  }

  host.replaceChildren(svg);
  return svg;
}
