/** Session view state: the progressively revealed subgraph and the transcript.
 *
 * The transcript is the source of truth; the visible graph is a projection of
 * it. The graph starts from the presented output entity and only grows when a
 * why-answer reveals relations, which mirrors the server's scoping rule: the
 * client can never ask about something it has not been shown, so a 422 from
 * the service indicates a client bug.
 *
 * Replaying an exported history through `ViewState.replay` reconstructs the
 * exact same subgraph as the live click sequence that produced it, which is
 * how a reloaded page restores its session.
 */

import type {
  AnswerKind,
  EntityPayload,
  ModelPayload,
  QuestionPayload,
  RelationPayload,
  Turn,
} from "./types.js";

export interface GraphNode {
  id: number;
  kind: string;
  name: string;
  attributes: Record<string, number | boolean | string>;
}

export interface GraphEdge {
  id: number;
  label: string;
  template: string;
  reason: string;
  /** explanan entity id */
  source: number;
  /** explanandum entity id */
  target: number;
}

export interface TranscriptEntry {
  n: number;
  question: QuestionPayload;
  answerKind: AnswerKind;
  summary: string;
}

export interface ExhaustedMark {
  entity: number;
  attribute: string;
}

function questionText(question: QuestionPayload): string {
  if (question.type === "why") {
    return `why ${question.entity_name ?? question.entity}.${question.attribute}`;
  }
  if (question.type === "how") {
    return `how ${question.label}`;
  }
  return "reset";
}

export class ViewState {
  sessionId = "";
  rootId: number | null = null;
  readonly nodes = new Map<number, GraphNode>();
  readonly edges = new Map<number, GraphEdge>();
  readonly transcript: TranscriptEntry[] = [];
  /** models shown in the story side panel after the latest how-question */
  stories: ModelPayload[] = [];
  /** set when the latest why-answer was exhausted; cleared by the next turn */
  exhausted: ExhaustedMark | null = null;
  notice: string | null = null;

  start(sessionId: string, presentation: Turn): void {
    if (presentation.answer_kind !== "presentation") {
      throw new Error(`expected a presentation turn, got ${presentation.answer_kind}`);
    }
    const entity = (presentation.payload as { entity: EntityPayload }).entity;
    this.sessionId = sessionId;
    this.rootId = entity.id;
    this.addNode(entity);
  }

  /** Fold one answered turn into the view. */
  apply(turn: Turn): void {
    if (turn.question === null) {
      return; // a replayed presentation turn; start() already covered it
    }
    this.exhausted = null;
    this.notice = null;
    let summary: string;
    switch (turn.answer_kind) {
      case "relation_tier": {
        const tier = turn.payload as RelationPayload[];
        for (const relation of tier) {
          this.addNode(relation.explanan);
          this.addNode(relation.explanandum);
          this.edges.set(relation.relation, {
            id: relation.relation,
            label: relation.label,
            template: relation.template,
            reason: relation.reason,
            source: relation.explanan.id,
            target: relation.explanandum.id,
          });
        }
        summary = `${tier.length} relation${tier.length === 1 ? "" : "s"}`;
        break;
      }
      case "model_list": {
        const models = turn.payload as ModelPayload[];
        this.stories = models;
        summary = models.map((m) => m.name).join(", ");
        break;
      }
      case "exhausted": {
        if (turn.question.type === "why") {
          this.exhausted = {
            entity: turn.question.entity,
            attribute: turn.question.attribute,
          };
        }
        summary = "exhausted";
        break;
      }
      case "no_matching_model": {
        this.notice = (turn.payload as { message: string }).message;
        summary = "no matching model";
        break;
      }
      case "reset_ack": {
        summary = "presented relations cleared";
        break;
      }
      default:
        throw new Error(`unexpected answer kind ${turn.answer_kind}`);
    }
    this.transcript.push({
      n: turn.n,
      question: turn.question,
      answerKind: turn.answer_kind,
      summary: `${questionText(turn.question)}: ${summary}`,
    });
  }

  /** Scoping guard: only visible entities are legal why-targets. */
  canAskWhy(entityId: number): boolean {
    return this.nodes.has(entityId);
  }

  /** Scoping guard: only revealed edges are legal how-targets. */
  canAskHow(relationId: number): boolean {
    return this.edges.has(relationId);
  }

  nodeByName(name: string): GraphNode | undefined {
    for (const node of this.nodes.values()) {
      if (node.name === name) {
        return node;
      }
    }
    return undefined;
  }

  /** Canonical content signature used to compare reconstructed views. */
  signature(): { nodes: number[]; edges: number[]; labels: Record<number, string> } {
    const labels: Record<number, string> = {};
    for (const edge of this.edges.values()) {
      labels[edge.id] = edge.label;
    }
    return {
      nodes: [...this.nodes.keys()].sort((a, b) => a - b),
      edges: [...this.edges.keys()].sort((a, b) => a - b),
      labels,
    };
  }

  /** Rebuild the view a reloaded page should show from an exported history. */
  static replay(sessionId: string, history: Turn[]): ViewState {
    if (history.length === 0 || history[0].answer_kind !== "presentation") {
      throw new Error("history must begin with the presentation turn");
    }
    const state = new ViewState();
    state.start(sessionId, history[0]);
    for (const turn of history.slice(1)) {
      state.apply(turn);
    }
    return state;
  }

  private addNode(entity: EntityPayload): void {
    if (!this.nodes.has(entity.id)) {
      this.nodes.set(entity.id, {
        id: entity.id,
        kind: entity.kind,
        name: entity.name,
        attributes: entity.attributes,
      });
    }
  }
}
