import { beforeEach, describe, expect, it } from "vitest";

import { renderNeighborhood } from "../src/graphview.js";
import { edgeKey } from "../src/state.js";
import { makeNeighborhood } from "./fixtures.js";

let host: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  host = document.createElement("div");
  document.body.append(host);
});

describe("renderNeighborhood", () => {
  it("draws every node with a type class and its label", () => {
    renderNeighborhood(host, makeNeighborhood(), new Set());
    const groups = [...host.querySelectorAll<SVGGElement>("g.node")];
    expect(groups).toHaveLength(4);
    const byId = new Map(groups.map((g) => [g.dataset.id, g]));
    expect(byId.get("kubernetes")!.classList.contains("node-skill")).toBe(true);
    expect(byId.get("austin-k8s")!.classList.contains("node-job")).toBe(true);
    expect(byId.get("kubernetes")!.querySelector("circle")).not.toBeNull();
    expect(byId.get("austin-k8s")!.querySelector("rect")).not.toBeNull();
    expect(byId.get("docker")!.querySelector("text")!.textContent).toBe("docker");
  });

  it("marks the focus node by distance class", () => {
    renderNeighborhood(host, makeNeighborhood(), new Set());
    const focus = host.querySelector<SVGGElement>(`g.node[data-id="kubernetes"]`)!;
    expect(focus.classList.contains("distance-0")).toBe(true);
  });

  it("lays nodes out with finite coordinates", () => {
    renderNeighborhood(host, makeNeighborhood(), new Set());
    for (const line of host.querySelectorAll("line.edge")) {
      for (const attr of ["x1", "y1", "x2", "y2"]) {
        expect(Number.isFinite(Number(line.getAttribute(attr)))).toBe(true);
      }
    }
  });

  it("highlights RELATED_TO edges that carried a skill path", () => {
    const contributed = new Set([edgeKey("docker", "kubernetes")]);
    renderNeighborhood(host, makeNeighborhood(), contributed);
    const edges = [...host.querySelectorAll<SVGLineElement>("line.edge")];
    const related = edges.filter((e) => e.classList.contains("relation-RELATED_TO"));
    const flagged = related.filter((e) => e.classList.contains("contributed"));
    expect(flagged).toHaveLength(1);
    expect(flagged[0]!.dataset.source).toBe("docker");
  });

  it("never highlights REQUIRES_SKILL edges, even on key collision", () => {
    const contributed = new Set([edgeKey("austin-k8s", "kubernetes")]);
    renderNeighborhood(host, makeNeighborhood(), contributed);
    const requires = [...host.querySelectorAll("line.relation-REQUIRES_SKILL")];
    expect(requires).toHaveLength(1);
    expect(requires[0]!.classList.contains("contributed")).toBe(false);
  });

  it("replaces the previous drawing on redraw", () => {
    renderNeighborhood(host, makeNeighborhood(), new Set());
    renderNeighborhood(host, makeNeighborhood(), new Set());
    expect(host.querySelectorAll("svg")).toHaveLength(1);
  });
});
