/**
 * SVG rendering of an ontograph with a small force layout. Layout
 * coordinates are view-local scratch state: they are recomputed on load and
 * never persisted, so the exchange document stays layout-free.
 */

import type { GraphPayload, RelationEdge } from "./model.js";
import { edgeRef } from "./model.js";

export interface Point {
  x: number;
  y: number;
}

const EDGE_COLORS: Record<string, string> = {
  is_a: "#2563eb",
  part_of: "#059669",
  associated_with: "#9ca3af",
  synonym_of: "#d97706",
};

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/**
 * Deterministic spring layout: seeded circle start, then repulsion between
 * all pairs, springs along edges and a mild pull to the centre. Good enough
 * for the few hundred nodes a draft ontology carries.
 */
export function computeLayout(
  payload: GraphPayload,
  width: number,
  height: number,
  iterations = 150,
): Map<string, Point> {
  const ids = Object.keys(payload.nodes).sort();
  const random = mulberry32(ids.length * 2654435761 + 1);
  const positions = new Map<string, Point>();
  const radius = Math.min(width, height) * 0.38;
  ids.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / Math.max(ids.length, 1) + random() * 0.3;
    positions.set(id, {
      x: width / 2 + radius * Math.cos(angle),
      y: height / 2 + radius * Math.sin(angle),
    });
  });
  if (ids.length < 2) return positions;

  const springLength = Math.max(60, radius / Math.sqrt(ids.length));
  const edges = payload.edges.filter(
    (e) => positions.has(e.source) && positions.has(e.target) && e.source !== e.target,
  );
  const velocity = new Map<string, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));

  for (let round = 0; round < iterations; round++) {
    const cooling = 1 - round / iterations;
    for (let i = 0; i < ids.length; i++) {
      const a = positions.get(ids[i] as string)!;
      const va = velocity.get(ids[i] as string)!;
      for (let j = i + 1; j < ids.length; j++) {
        const b = positions.get(ids[j] as string)!;
        const vb = velocity.get(ids[j] as string)!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let dist2 = dx * dx + dy * dy;
        if (dist2 < 1e-4) {
          dx = random() - 0.5;
          dy = random() - 0.5;
          dist2 = dx * dx + dy * dy;
        }
        const push = (springLength * springLength) / dist2;
        va.x += dx * push * 0.02;
        va.y += dy * push * 0.02;
        vb.x -= dx * push * 0.02;
        vb.y -= dy * push * 0.02;
      }
    }
    for (const edge of edges) {
      const a = positions.get(edge.source)!;
      const b = positions.get(edge.target)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.sqrt(dx * dx + dy * dy) || 1;
      const pull = ((dist - springLength) / dist) * 0.01;
      const va = velocity.get(edge.source)!;
      const vb = velocity.get(edge.target)!;
      va.x += dx * pull;
      va.y += dy * pull;
      vb.x -= dx * pull;
      vb.y -= dy * pull;
    }
    for (const id of ids) {
      const p = positions.get(id)!;
      const v = velocity.get(id)!;
      v.x += (width / 2 - p.x) * 0.002;
      v.y += (height / 2 - p.y) * 0.002;
      p.x += v.x * cooling;
      p.y += v.y * cooling;
      v.x *= 0.85;
      v.y *= 0.85;
      p.x = Math.min(width - 20, Math.max(20, p.x));
      p.y = Math.min(height - 20, Math.max(20, p.y));
    }
  }
  return positions;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphViewOptions {
  width?: number;
  height?: number;
  onSelect?: (nodeId: string | null) => void;
}

/**
 * Renders a graph payload into an SVG element. Supports node selection
 * (click; click the background to clear) and a highlight set of edge refs
 * painted as conflicts.
 */
export class GraphView {
  selected: string | null = null;
  highlights = new Set<string>();
  private width: number;
  private height: number;
  private positions = new Map<string, Point>();
  private onSelect: (nodeId: string | null) => void;

  constructor(
    private svg: SVGSVGElement,
    options: GraphViewOptions = {},
  ) {
    this.width = options.width ?? 960;
    this.height = options.height ?? 640;
    this.onSelect = options.onSelect ?? (() => undefined);
    svg.setAttribute("viewBox", `0 0 ${this.width} ${this.height}`);
    svg.addEventListener("click", (event) => {
      if (event.target === svg) this.select(null);
    });
  }

  select(nodeId: string | null): void {
    this.selected = nodeId;
    this.onSelect(nodeId);
    this.paintSelection();
  }

  setHighlights(refs: Set<string>): void {
    this.highlights = refs;
    for (const line of this.svg.querySelectorAll("line[data-ref]")) {
      line.classList.toggle("conflict", refs.has(line.getAttribute("data-ref") ?? ""));
    }
  }

  render(payload: GraphPayload): void {
    this.positions = computeLayout(payload, this.width, this.height);
    this.svg.replaceChildren();

    const edgeLayer = document.createElementNS(SVG_NS, "g");
    for (const edge of payload.edges) {
      const a = this.positions.get(edge.source);
      const b = this.positions.get(edge.target);
      if (!a || !b) continue;
      edgeLayer.appendChild(this.edgeLine(edge, a, b));
    }
    this.svg.appendChild(edgeLayer);

    const nodeLayer = document.createElementNS(SVG_NS, "g");
    for (const [id, point] of this.positions) {
      const node = payload.nodes[id];
      if (node === undefined) continue;
      const group = document.createElementNS(SVG_NS, "g");
      group.setAttribute("data-node", id);
      group.classList.add("node");

      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(point.x));
      circle.setAttribute("cy", String(point.y));
      circle.setAttribute("r", node.kind === "process" ? "9" : "7");
      circle.setAttribute("fill", node.kind === "process" ? "#c084fc" : "#60a5fa");
      group.appendChild(circle);

      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(point.x + 11));
      label.setAttribute("y", String(point.y + 4));
      label.textContent = node.label;
      group.appendChild(label);

      group.addEventListener("click", (event) => {
        event.stopPropagation();
        this.select(id);
      });
      nodeLayer.appendChild(group);
    }
    this.svg.appendChild(nodeLayer);
    this.paintSelection();
    this.setHighlights(this.highlights);
  }

  private edgeLine(edge: RelationEdge, a: Point, b: Point): SVGLineElement {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("stroke", EDGE_COLORS[edge.rtype] ?? "#9ca3af");
    line.setAttribute("stroke-width", edge.rtype === "associated_with" ? "1" : "2");
    line.setAttribute("data-ref", edgeRef(edge));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${edgeRef(edge)} (${edge.confidence.toFixed(2)})`;
    line.appendChild(title);
    return line;
  }

  private paintSelection(): void {
    for (const group of this.svg.querySelectorAll("g[data-node]")) {
      group.classList.toggle("selected", group.getAttribute("data-node") === this.selected);
    }
  }
}
