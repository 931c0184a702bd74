/** SVG node-link rendering plus the transcript and story panels.
 *
 * Layout is incremental: the root sits at the center and every newly revealed
 * node is placed on a ring around the node it explains, so the picture grows
 * outward the same way the dialogue does. Positions are sticky; re-rendering
 * never moves a node the user has already seen.
 */

import type { GraphEdge, GraphNode, ViewState } from "./state.js";
import type { ModelPayload, PatternCondition } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const KIND_COLORS = ["#0b5fff", "#0f766e", "#9a3412", "#6d28d9", "#be123c", "#4d7c0f"];

export interface GraphCallbacks {
  onAskWhy(node: GraphNode, attribute: string): void;
  onAskHow(edge: GraphEdge): void;
  onReset(): void;
}

interface Point {
  x: number;
  y: number;
}

export class GraphView {
  private readonly positions = new Map<number, Point>();
  private readonly kindColor = new Map<string, string>();
  private selected: number | null = null;

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly sidebar: HTMLElement,
    private readonly transcriptList: HTMLElement,
    private readonly callbacks: GraphCallbacks,
  ) {}

  render(state: ViewState): void {
    this.layout(state);
    this.drawGraph(state);
    this.drawSidebar(state);
    this.drawTranscript(state);
  }

  private colorFor(kind: string): string {
    let color = this.kindColor.get(kind);
    if (color === undefined) {
      color = KIND_COLORS[this.kindColor.size % KIND_COLORS.length];
      this.kindColor.set(kind, color);
    }
    return color;
  }

  private layout(state: ViewState): void {
    const width = this.svg.viewBox.baseVal.width || 900;
    const height = this.svg.viewBox.baseVal.height || 600;
    if (state.rootId !== null && !this.positions.has(state.rootId)) {
      this.positions.set(state.rootId, { x: width / 2, y: height / 2 });
    }
    // place unseen nodes around the node their edge points at
    const pending = new Map<number, number[]>(); // anchor -> new node ids
    for (const edge of state.edges.values()) {
      const anchorId = this.positions.has(edge.target) ? edge.target : edge.source;
      for (const endpoint of [edge.source, edge.target]) {
        if (!this.positions.has(endpoint) && this.positions.has(anchorId)) {
          const list = pending.get(anchorId) ?? [];
          if (!list.includes(endpoint)) {
            list.push(endpoint);
          }
          pending.set(anchorId, list);
        }
      }
    }
    for (const [anchorId, newcomers] of pending) {
      const anchor = this.positions.get(anchorId)!;
      const radius = 120;
      newcomers.forEach((id, index) => {
        const angle = (2 * Math.PI * index) / newcomers.length + anchorId * 0.7;
        this.positions.set(id, {
          x: anchor.x + radius * Math.cos(angle),
          y: anchor.y + radius * Math.sin(angle),
        });
      });
    }
    // anything still unplaced (detached reveal): row along the bottom
    let spill = 0;
    for (const id of state.nodes.keys()) {
      if (!this.positions.has(id)) {
        this.positions.set(id, { x: 60 + 90 * spill, y: height - 40 });
        spill += 1;
      }
    }
  }

  private drawGraph(state: ViewState): void {
    this.svg.replaceChildren();
    for (const edge of state.edges.values()) {
      this.svg.appendChild(this.edgeElement(edge));
    }
    for (const node of state.nodes.values()) {
      this.svg.appendChild(this.nodeElement(node));
    }
  }

  private edgeElement(edge: GraphEdge): SVGElement {
    const group = document.createElementNS(SVG_NS, "g");
    group.classList.add("edge");
    const from = this.positions.get(edge.source)!;
    const to = this.positions.get(edge.target)!;
    let shape: SVGElement;
    if (edge.source === edge.target) {
      // self-relation: a small loop above the node
      const loop = document.createElementNS(SVG_NS, "path");
      loop.setAttribute(
        "d",
        `M ${from.x - 10} ${from.y - 14} C ${from.x - 32} ${from.y - 52}, ` +
          `${from.x + 32} ${from.y - 52}, ${from.x + 10} ${from.y - 14}`,
      );
      loop.setAttribute("fill", "none");
      shape = loop;
    } else {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(from.x));
      line.setAttribute("y1", String(from.y));
      line.setAttribute("x2", String(to.x));
      line.setAttribute("y2", String(to.y));
      shape = line;
    }
    shape.setAttribute("stroke", "#94a3b8");
    shape.setAttribute("stroke-width", "2");
    shape.classList.add("edge-shape");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${edge.label} [${edge.template}] ${edge.reason}`;
    shape.appendChild(title);
    shape.addEventListener("click", () => this.callbacks.onAskHow(edge));
    group.appendChild(shape);

    const mid: Point =
      edge.source === edge.target
        ? { x: from.x, y: from.y - 46 }
        : { x: (from.x + to.x) / 2, y: (from.y + to.y) / 2 - 6 };
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(mid.x));
    label.setAttribute("y", String(mid.y));
    label.setAttribute("class", "edge-label");
    label.textContent = edge.label;
    label.addEventListener("click", () => this.callbacks.onAskHow(edge));
    group.appendChild(label);
    return group;
  }

  private nodeElement(node: GraphNode): SVGElement {
    const group = document.createElementNS(SVG_NS, "g");
    group.classList.add("node");
    const at = this.positions.get(node.id)!;
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(at.x));
    circle.setAttribute("cy", String(at.y));
    circle.setAttribute("r", "14");
    circle.setAttribute("fill", this.colorFor(node.kind));
    if (this.selected === node.id) {
      circle.setAttribute("stroke", "#111827");
      circle.setAttribute("stroke-width", "3");
    }
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${node.name} (${node.kind})`;
    circle.appendChild(title);
    circle.addEventListener("click", () => {
      this.selected = node.id;
      this.rerenderSelection(node);
    });
    group.appendChild(circle);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(at.x));
    label.setAttribute("y", String(at.y + 28));
    label.setAttribute("class", "node-label");
    label.textContent = node.name;
    group.appendChild(label);
    return group;
  }

  private rerenderSelection(node: GraphNode): void {
    const panel = this.sidebar.querySelector(".selection");
    if (panel) {
      panel.replaceChildren(this.selectionPanel(node));
    }
  }

  private selectionPanel(node: GraphNode): HTMLElement {
    const box = document.createElement("div");
    const heading = document.createElement("h3");
    heading.textContent = `${node.name} (${node.kind})`;
    box.appendChild(heading);
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent = "Click an attribute to ask why it has this value.";
    box.appendChild(hint);
    for (const [attribute, value] of Object.entries(node.attributes)) {
      if (attribute === "name") {
        continue;
      }
      const button = document.createElement("button");
      button.className = "attribute";
      button.textContent = `why ${node.name}.${attribute} (= ${String(value)})`;
      button.addEventListener("click", () => this.callbacks.onAskWhy(node, attribute));
      box.appendChild(button);
    }
    return box;
  }

  private drawSidebar(state: ViewState): void {
    this.sidebar.replaceChildren();

    const selection = document.createElement("section");
    selection.className = "selection";
    const selectedNode = this.selected !== null ? state.nodes.get(this.selected) : undefined;
    if (selectedNode) {
      selection.appendChild(this.selectionPanel(selectedNode));
    } else {
      const hint = document.createElement("p");
      hint.className = "hint";
      hint.textContent = "Click a node to see its attributes; click an edge for its story.";
      selection.appendChild(hint);
    }
    this.sidebar.appendChild(selection);

    if (state.exhausted) {
      const badge = document.createElement("div");
      badge.className = "badge";
      badge.textContent = "Nothing new for that question.";
      const reset = document.createElement("button");
      reset.textContent = "reset presented relations";
      reset.addEventListener("click", () => this.callbacks.onReset());
      badge.appendChild(reset);
      this.sidebar.appendChild(badge);
    }
    if (state.notice) {
      const note = document.createElement("div");
      note.className = "badge";
      note.textContent = state.notice;
      this.sidebar.appendChild(note);
    }
    if (state.stories.length > 0) {
      const stories = document.createElement("section");
      stories.className = "stories";
      const heading = document.createElement("h3");
      heading.textContent = "model";
      stories.appendChild(heading);
      for (const model of state.stories) {
        stories.appendChild(this.storyCard(model));
      }
      this.sidebar.appendChild(stories);
    }
  }

  private storyCard(model: ModelPayload): HTMLElement {
    const card = document.createElement("article");
    card.className = "story";
    const name = document.createElement("h4");
    name.textContent = model.name;
    card.appendChild(name);
    const story = document.createElement("p");
    story.className = "story-text";
    story.textContent = model.story;
    card.appendChild(story);
    const meta = document.createElement("p");
    meta.className = "hint";
    meta.textContent =
      `modifies ${model.model_of.kind}.${model.model_of.attribute}; ` +
      `context: ${model.context.map(describePattern).join("; ")}; ` +
      `result: ${model.result.map(describePattern).join("; ")}`;
    card.appendChild(meta);
    return card;
  }

  private drawTranscript(state: ViewState): void {
    this.transcriptList.replaceChildren();
    for (const entry of state.transcript) {
      const item = document.createElement("li");
      item.textContent = entry.summary;
      this.transcriptList.appendChild(item);
    }
  }
}

function describeCondition(condition: PatternCondition): string {
  if (typeof condition === "object" && condition !== null && "marker" in condition) {
    return condition.marker.toUpperCase();
  }
  return String(condition);
}

export function describePattern(pattern: {
  kind: string;
  attribute_conditions: Record<string, PatternCondition>;
}): string {
  const parts = Object.entries(pattern.attribute_conditions).map(
    ([attribute, condition]) => `${attribute}=${describeCondition(condition)}`,
  );
  return `${pattern.kind}(${parts.join(", ")})`;
}
