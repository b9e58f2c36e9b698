// Pure event store: the entire console state is a fold over UiEvents.
//
// reduceEvent never mutates its input and performs no I/O (the one side
// effect is a console note for unrecognized event kinds), so replaying a
// recorded timeline always reconstructs the identical view.

import { spawnPosition } from "./palette.js";
import type {
  ArmView,
  ChatEntry,
  Emotion,
  PlanPayload,
  SceneObjectView,
  StateSnapshot,
  UiEvent,
  UiSessionView,
} from "./types.js";
import { EMOTIONS, TABLE_X_MAX, TABLE_X_MIN, TABLE_Y_MAX, TABLE_Y_MIN } from "./types.js";

const TIMELINE_LIMIT = 50;

export function initialView(): UiSessionView {
  return {
    chat: [],
    showThoughts: false,
    composer: { enabled: true, error: null },
    objects: [],
    face: "neutral",
    gazeTarget: null,
    arm: { pose: "idle" },
    pendingGestures: [],
    timeline: [],
    turnInFlight: false,
    lastSeq: 0,
  };
}

function sortObjects(objects: SceneObjectView[]): SceneObjectView[] {
  return [...objects].sort((a, b) => (a.name < b.name ? -1 : a.name > b.name ? 1 : 0));
}

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

function parseArm(arm: string): ArmView {
  const match = /^(pointing|giving)\((.*)\)$/.exec(arm);
  if (match) {
    return { pose: match[1] as "pointing" | "giving", target: match[2] ?? "" };
  }
  return { pose: "idle" };
}

function asEmotion(expression: unknown): Emotion {
  return EMOTIONS.includes(expression as Emotion) ? (expression as Emotion) : "neutral";
}

function pushTimeline(
  timeline: TimelineRowList,
  seq: number | null,
  kind: string,
  summary: string,
): TimelineRowList {
  const next = [...timeline, { seq, kind, summary }];
  return next.length > TIMELINE_LIMIT ? next.slice(next.length - TIMELINE_LIMIT) : next;
}

type TimelineRowList = UiSessionView["timeline"];

function markSentenceDone(chat: ChatEntry[], text: string): ChatEntry[] {
  const index = chat.findIndex(
    (e) => e.kind === "sentence" && !e.done && e.text === text,
  );
  if (index < 0) return chat;
  const next = [...chat];
  next[index] = { kind: "sentence", text, done: true };
  return next;
}

export function reduceEvent(view: UiSessionView, event: UiEvent): UiSessionView {
  const seq = event.seq ?? null;
  const payload = event.payload;
  const lastSeq = seq === null ? view.lastSeq : Math.max(view.lastSeq, seq);
  const next: UiSessionView = { ...view, lastSeq };

  switch (event.kind) {
    case "turn_start": {
      next.chat = [...view.chat, { kind: "user", text: String(payload.utterance ?? "") }];
      next.turnInFlight = true;
      next.composer = { enabled: false, error: null };
      next.timeline = pushTimeline(view.timeline, seq, event.kind, "turn started");
      return next;
    }
    case "status_update": {
      next.chat = [
        ...view.chat,
        {
          kind: "status",
          query: String(payload.query ?? ""),
          answer: String(payload.answer ?? ""),
        },
      ];
      next.pendingGestures = [];
      next.timeline = pushTimeline(view.timeline, seq, event.kind, "status update exchanged");
      return next;
    }
    case "plan": {
      const plan = payload as unknown as PlanPayload;
      const thoughts: ChatEntry[] = [];
      for (const segment of plan.segments ?? []) {
        if (segment.kind === "THOUGHT") {
          thoughts.push({ kind: "thought", text: segment.text });
        }
      }
      next.chat = thoughts.length ? [...view.chat, ...thoughts] : view.chat;
      let timeline = pushTimeline(
        view.timeline,
        seq,
        event.kind,
        `plan: ${plan.segments?.length ?? 0} segment(s)`,
      );
      for (const anomaly of plan.anomalies ?? []) {
        timeline = pushTimeline(
          timeline,
          seq,
          "anomaly",
          `filtered "${anomaly.raw}" (${anomaly.reasons.join(", ")})`,
        );
      }
      next.timeline = timeline;
      return next;
    }
    case "utterance_start": {
      const text = String(payload.sentence ?? "");
      next.chat = [...view.chat, { kind: "sentence", text, done: false }];
      next.timeline = pushTimeline(view.timeline, seq, event.kind, `speaking: ${text}`);
      return next;
    }
    case "utterance_end": {
      const text = String(payload.sentence ?? "");
      next.chat = markSentenceDone(view.chat, text);
      next.timeline = pushTimeline(view.timeline, seq, event.kind, `spoke: ${text}`);
      return next;
    }
    case "action_start":
    case "action_end": {
      const label = `${payload.action}(${payload.argument})`;
      const verb = event.kind === "action_start" ? "started" : "finished";
      next.timeline = pushTimeline(view.timeline, seq, event.kind, `${label} ${verb}`);
      return next;
    }
    case "action_error": {
      const label = `${payload.action}(${payload.argument})`;
      next.timeline = pushTimeline(
        view.timeline,
        seq,
        event.kind,
        `${label} failed: ${payload.message} [${payload.code}]`,
      );
      return next;
    }
    case "anomaly_filtered": {
      const reasons = Array.isArray(payload.reasons) ? payload.reasons.join(", ") : "";
      next.timeline = pushTimeline(
        view.timeline,
        seq,
        event.kind,
        `filtered "${payload.raw}" (${reasons})`,
      );
      return next;
    }
    case "robot_state": {
      next.face = asEmotion(payload.expression);
      next.gazeTarget = (payload.gaze_target as string | null) ?? null;
      next.arm = parseArm(String(payload.arm ?? "idle"));
      return next;
    }
    case "world_diff": {
      const added = (payload.added as string[] | undefined) ?? [];
      const removed = (payload.removed as string[] | undefined) ?? [];
      let objects = view.objects.filter((o) => !removed.includes(o.name));
      for (const name of added) {
        if (objects.some((o) => o.name === name)) continue;
        const [x, y] = spawnPosition(objects.length);
        objects = [...objects, { name, x, y, preview: true }];
      }
      next.objects = sortObjects(objects);
      const summary =
        `${added.length ? `added ${added.join(", ")}` : ""}` +
        `${added.length && removed.length ? "; " : ""}` +
        `${removed.length ? `removed ${removed.join(", ")}` : ""}`;
      next.timeline = pushTimeline(view.timeline, seq, event.kind, summary || "no change");
      return next;
    }
    case "gesture": {
      next.pendingGestures = [...view.pendingGestures, String(payload.gesture ?? "")];
      next.timeline = pushTimeline(
        view.timeline,
        seq,
        event.kind,
        `operator gesture: ${payload.gesture}`,
      );
      return next;
    }
    case "turn_end": {
      next.turnInFlight = false;
      next.composer = { enabled: true, error: view.composer.error };
      next.timeline = pushTimeline(view.timeline, seq, event.kind, "turn finished");
      return next;
    }
    case "snapshot": {
      const snap = payload as unknown as StateSnapshot;
      next.objects = sortObjects(
        snap.objects.map((o) => ({
          name: o.name,
          x: o.position[0],
          y: o.position[1],
          preview: false,
        })),
      );
      next.face = asEmotion(snap.robot.expression);
      next.gazeTarget = snap.robot.gaze_target;
      next.arm = parseArm(snap.robot.arm);
      next.pendingGestures = [...snap.pending_gestures];
      next.turnInFlight = snap.turn_in_progress;
      next.composer = {
        enabled: !snap.turn_in_progress,
        error: view.composer.error,
      };
      next.lastSeq = Math.max(lastSeq, snap.last_seq);
      return next;
    }
    // ── Local UI intents ────────────────────────────────────────────────
    case "ui_submit": {
      next.composer = { enabled: false, error: null };
      return next;
    }
    case "ui_error": {
      next.composer = { enabled: true, error: String(payload.message ?? "request failed") };
      return next;
    }
    case "ui_toggle_thoughts": {
      next.showThoughts = !view.showThoughts;
      return next;
    }
    case "ui_drag_preview": {
      const name = String(payload.name ?? "");
      next.objects = view.objects.map((o) =>
        o.name === name
          ? {
              ...o,
              x: clamp(Number(payload.x), TABLE_X_MIN, TABLE_X_MAX),
              y: clamp(Number(payload.y), TABLE_Y_MIN, TABLE_Y_MAX),
              preview: true,
            }
          : o,
      );
      return next;
    }
    default: {
      console.info(`ignoring unknown event kind ${JSON.stringify(event.kind)}`);
      return view;
    }
  }
}

/** Fold a recorded timeline into a fresh view (determinism entry point). */
export function replayTimeline(events: readonly UiEvent[]): UiSessionView {
  let view = initialView();
  for (const event of events) {
    view = reduceEvent(view, event);
  }
  return view;
}
