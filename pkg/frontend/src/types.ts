/** Wire types, mirroring the engine's JSON surface exactly. */

export type AttributeValue = number | boolean | string;

export interface EntityPayload {
  id: number;
  kind: string;
  name: string;
  attributes: Record<string, AttributeValue>;
}

export interface RelationPayload {
  label: string;
  relation: number;
  template: string;
  priority: number;
  reason: string;
  explanan: EntityPayload;
  explanandum: EntityPayload;
}

export type PatternCondition = AttributeValue | { marker: "unset" | "modified" | "free" };

export interface PatternPayload {
  kind: string;
  attribute_conditions: Record<string, PatternCondition>;
}

export interface ModelPayload {
  name: string;
  story: string;
  model_of: { kind: string; attribute: string };
  context: PatternPayload[];
  result: PatternPayload[];
}

export type WhyQuestion = {
  type: "why";
  entity: number;
  entity_name: string | null;
  attribute: string;
};
export type HowQuestion = { type: "how"; relation: number; label: string };
export type ResetQuestion = { type: "reset" };
export type QuestionPayload = WhyQuestion | HowQuestion | ResetQuestion;

export type AnswerKind =
  | "presentation"
  | "relation_tier"
  | "model_list"
  | "exhausted"
  | "no_matching_model"
  | "reset_ack";

export interface Turn {
  n: number;
  question: QuestionPayload | null;
  answer_kind: AnswerKind;
  payload: unknown;
}

export interface CreateSessionResponse {
  session_id: string;
  turn: Turn;
}

export interface ModelSummary {
  name: string;
  kinds: number;
  entities: number;
  relations: number;
  models: number;
  root_output: number;
}

export interface GraphNodePayload {
  id: number;
  kind: string;
  name: string;
  attributes: Record<string, AttributeValue>;
}

export interface GraphEdgePayload {
  id: number;
  template: string;
  reason: string;
  explanan: number;
  explanandum: number;
}

export interface GraphResponse {
  name: string;
  paged: boolean;
  total_nodes: number;
  nodes: GraphNodePayload[];
  edges: GraphEdgePayload[];
}

/** Structured ask body: target is an entity name for why, "rel:<n>" for how. */
export interface AskBody {
  type: "why" | "how" | "reset";
  target?: string;
  attribute?: string;
}
