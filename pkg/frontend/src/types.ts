// Wire and view-model types for the operator console.
//
// The wire types mirror the gateway's JSON exactly; the view types are the
// pure data the renderers draw from.  Keeping both as plain data (no classes,
// no DOM handles) is what makes event replay reproducible.

// ── Wire types (gateway contract) ───────────────────────────────────────────

/** One SSE frame's decoded payload: {seq, kind, payload, ts}. */
export type GatewayEvent = {
  seq: number;
  kind: string;
  payload: Record<string, unknown>;
  ts: number;
};

export type PlanSegment =
  | { kind: "SAY" | "THOUGHT"; text: string }
  | { kind: "ACTION"; action: string; argument: string; raw: string };

export type PlanPayload = {
  segments: PlanSegment[];
  anomalies: { raw: string; reasons: string[] }[];
  spoken: string;
};

export type Emotion =
  | "neutral"
  | "happiness"
  | "sadness"
  | "surprise"
  | "anger";

export const EMOTIONS: readonly Emotion[] = [
  "neutral",
  "happiness",
  "sadness",
  "surprise",
  "anger",
];

export type RobotPose = {
  expression: string;
  gaze_target: string | null;
  /** "idle", "pointing(<name>)", or "giving(<name>)". */
  arm: string;
};

export type StateSnapshot = {
  session_id: string;
  backend: string;
  turn_in_progress: boolean;
  objects: { name: string; position: [number, number] }[];
  robot: RobotPose;
  reported_objects: string[];
  pending_gestures: string[];
  last_seq: number;
};

/**
 * Everything the store consumes: gateway events verbatim, plus locally
 * sourced inputs (state snapshots fetched over HTTP, and UI intents such as
 * submitting the composer or toggling the thoughts reveal).  Local inputs
 * carry no seq/ts.  A recorded timeline is simply an array of these.
 */
export type UiEvent = {
  kind: string;
  payload: Record<string, unknown>;
  seq?: number;
  ts?: number;
};

// ── View model ──────────────────────────────────────────────────────────────

export type ChatEntry =
  | { kind: "user"; text: string }
  | { kind: "sentence"; text: string; done: boolean }
  | { kind: "thought"; text: string }
  | { kind: "status"; query: string; answer: string };

export type SceneObjectView = {
  name: string;
  x: number;
  y: number;
  /** True while a local drag preview has not been confirmed by the server. */
  preview: boolean;
};

export type ArmView =
  | { pose: "idle" }
  | { pose: "pointing" | "giving"; target: string };

export type TimelineRow = {
  seq: number | null;
  kind: string;
  summary: string;
};

export type UiSessionView = {
  chat: ChatEntry[];
  showThoughts: boolean;
  composer: { enabled: boolean; error: string | null };
  /** Sorted by name so identical state always renders identical markup. */
  objects: SceneObjectView[];
  face: Emotion;
  gazeTarget: string | null;
  arm: ArmView;
  pendingGestures: string[];
  timeline: TimelineRow[];
  turnInFlight: boolean;
  lastSeq: number;
};

// ── World geometry (mirrors the simulator's table bounds) ───────────────────

export const TABLE_X_MIN = -0.6;
export const TABLE_X_MAX = 0.6;
export const TABLE_Y_MIN = 0.0;
export const TABLE_Y_MAX = 0.8;
