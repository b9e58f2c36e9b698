// DOM controller: binds the static shell to the store and the gateway client.
// All state lives in the store; this layer only forwards intents and repaints.

import { GatewayClient, GatewayError } from "./client.js";
import { GESTURES, OBJECT_PALETTE, spawnPosition } from "./palette.js";
import {
  renderChat,
  renderFace,
  renderGestureChips,
  renderScene,
  renderTimeline,
  SCENE_VIEWBOX,
  svgToWorld,
} from "./render.js";
import { initialView, reduceEvent } from "./store.js";
import type { GatewayEvent, StateSnapshot, UiEvent, UiSessionView } from "./types.js";

export type AppMounts = {
  chat: HTMLElement;
  composerForm: HTMLFormElement;
  composerInput: HTMLInputElement;
  composerSend: HTMLButtonElement;
  thoughtsToggle: HTMLInputElement;
  scene: HTMLElement;
  palette: HTMLElement;
  gestureButtons: HTMLElement;
  gestureChips: HTMLElement;
  face: HTMLElement;
  timeline: HTMLElement;
  sessionLabel: HTMLElement;
};

/** Scripted fixture used by the "demo session" button: three canned turns. */
export function demoSessionBody(): Record<string, unknown> {
  const responses = [
    "The banana is yellow and elongated. The lemon is yellow and oval. " +
      "The red bowl is red and round.",
    "Understood.",
    "Hello! <express(happiness)> I am NICOL, a humanoid robot. " +
      "I can see a banana, a lemon, and a red bowl on the table.",
    "Okay.",
    "<look(lemon)> The sour one is the lemon. <point(lemon)> Right here.",
    "Noted.",
    "Of course. <give(banana)> There you go. <express(happiness)> Enjoy!",
  ];
  return {
    backend: { kind: "scripted", fixture: responses.map((response) => ({ response })) },
    objects: [
      { name: "banana", position: [0.2, 0.3] },
      { name: "lemon", position: [-0.3, 0.35] },
      { name: "red bowl", position: [0.4, 0.5] },
    ],
    priming: false,
  };
}

function friendlyError(error: unknown): string {
  if (error instanceof GatewayError) {
    if (error.status === 409) return "A turn is already in flight — wait for it to finish.";
    return error.detail;
  }
  return error instanceof Error ? error.message : String(error);
}

export class AppController {
  view: UiSessionView = initialView();
  client: GatewayClient | null = null;
  sessionId: string | null = null;

  private streamAbort: AbortController | null = null;
  private pendingSnapshot: StateSnapshot | null = null;
  private drag: { name: string; moved: boolean } | null = null;

  constructor(private readonly mounts: AppMounts) {
    this.bindStaticControls();
    this.render();
  }

  // ── Store plumbing ─────────────────────────────────────────────────────

  dispatch(event: UiEvent): void {
    this.view = reduceEvent(this.view, event);
    this.render();
  }

  private onStreamEvent(event: GatewayEvent): void {
    this.dispatch(event);
    if (this.pendingSnapshot && event.seq >= this.pendingSnapshot.last_seq) {
      const snap = this.pendingSnapshot;
      this.pendingSnapshot = null;
      this.dispatch({ kind: "snapshot", payload: snap as unknown as Record<string, unknown> });
    }
  }

  private async refreshSnapshot(): Promise<void> {
    if (!this.client || !this.sessionId) return;
    try {
      const snap = await this.client.getState(this.sessionId);
      this.dispatch({ kind: "snapshot", payload: snap as unknown as Record<string, unknown> });
    } catch (error) {
      this.dispatch({ kind: "ui_error", payload: { message: friendlyError(error) } });
    }
  }

  // ── Session lifecycle ──────────────────────────────────────────────────

  async connect(baseUrl: string, sessionId: string): Promise<void> {
    this.streamAbort?.abort();
    this.client = new GatewayClient(baseUrl);
    this.sessionId = sessionId;
    this.view = initialView();
    this.pendingSnapshot = null;

    const snap = await this.client.getState(sessionId);
    if (snap.last_seq === 0) {
      this.dispatch({ kind: "snapshot", payload: snap as unknown as Record<string, unknown> });
    } else {
      // Replay history first, then reconcile positions once caught up.
      this.pendingSnapshot = snap;
      this.render();
    }
    this.mounts.sessionLabel.textContent = `${sessionId} (${snap.backend})`;

    this.streamAbort = new AbortController();
    void this.client
      .streamEvents(sessionId, {
        after: 0,
        signal: this.streamAbort.signal,
        onEvent: (event) => this.onStreamEvent(event),
        onRetry: () =>
          this.dispatch({
            kind: "ui_error",
            payload: { message: "event stream dropped; reconnecting…" },
          }),
      })
      .catch((error) =>
        this.dispatch({ kind: "ui_error", payload: { message: friendlyError(error) } }),
      );
  }

  async createAndConnect(baseUrl: string, body: Record<string, unknown>): Promise<void> {
    const client = new GatewayClient(baseUrl);
    const created = await client.createSession(body);
    await this.connect(baseUrl, created.session_id);
  }

  disconnect(): void {
    this.streamAbort?.abort();
    this.streamAbort = null;
    this.client = null;
    this.sessionId = null;
    this.mounts.sessionLabel.textContent = "not connected";
  }

  // ── Operator intents ───────────────────────────────────────────────────

  async submitUtterance(): Promise<void> {
    const text = this.mounts.composerInput.value.trim();
    if (!text || !this.client || !this.sessionId) return;
    this.dispatch({ kind: "ui_submit", payload: {} });
    try {
      await this.client.postUtterance(this.sessionId, text);
      this.mounts.composerInput.value = "";
      await this.refreshSnapshot();
    } catch (error) {
      this.dispatch({ kind: "ui_error", payload: { message: friendlyError(error) } });
    }
  }

  async addObject(name: string): Promise<void> {
    if (!this.client || !this.sessionId) return;
    try {
      const position = spawnPosition(this.view.objects.length);
      await this.client.mutateWorld(this.sessionId, "add", name, position);
      await this.refreshSnapshot();
    } catch (error) {
      this.dispatch({ kind: "ui_error", payload: { message: friendlyError(error) } });
    }
  }

  async removeObject(name: string): Promise<void> {
    if (!this.client || !this.sessionId) return;
    try {
      await this.client.mutateWorld(this.sessionId, "remove", name);
      await this.refreshSnapshot();
    } catch (error) {
      this.dispatch({ kind: "ui_error", payload: { message: friendlyError(error) } });
    }
  }

  async sendGesture(gesture: string): Promise<void> {
    if (!this.client || !this.sessionId) return;
    try {
      await this.client.postGesture(this.sessionId, gesture);
    } catch (error) {
      this.dispatch({ kind: "ui_error", payload: { message: friendlyError(error) } });
    }
  }

  // ── DOM wiring ─────────────────────────────────────────────────────────

  private bindStaticControls(): void {
    const m = this.mounts;

    m.composerForm.addEventListener("submit", (e) => {
      e.preventDefault();
      void this.submitUtterance();
    });

    m.thoughtsToggle.addEventListener("change", () => {
      this.dispatch({ kind: "ui_toggle_thoughts", payload: {} });
    });

    m.palette.innerHTML = OBJECT_PALETTE.map(
      (p) =>
        `<button type="button" class="palette-chip" data-add="${p.name}">` +
        `<span class="swatch" style="background:${p.fill}"></span>${p.name}</button>`,
    ).join("");
    m.palette.addEventListener("click", (e) => {
      const button = (e.target as HTMLElement).closest<HTMLElement>("[data-add]");
      if (button?.dataset.add) void this.addObject(button.dataset.add);
    });

    m.gestureButtons.innerHTML = GESTURES.map(
      (g) => `<button type="button" class="gesture-btn" data-gesture="${g}">${g}</button>`,
    ).join("");
    m.gestureButtons.addEventListener("click", (e) => {
      const button = (e.target as HTMLElement).closest<HTMLElement>("[data-gesture]");
      if (button?.dataset.gesture) void this.sendGesture(button.dataset.gesture);
    });

    this.bindSceneDrag();
  }

  private scenePointToWorld(e: PointerEvent): [number, number] {
    const svg = this.mounts.scene.querySelector("svg");
    if (!svg) return [0, 0];
    const rect = svg.getBoundingClientRect();
    const px = ((e.clientX - rect.left) / rect.width) * SCENE_VIEWBOX.width;
    const py = ((e.clientY - rect.top) / rect.height) * SCENE_VIEWBOX.height;
    return svgToWorld(px, py);
  }

  private bindSceneDrag(): void {
    const scene = this.mounts.scene;

    scene.addEventListener("pointerdown", (e) => {
      const marker = (e.target as HTMLElement).closest<HTMLElement>("[data-name]");
      if (!marker?.dataset.name) return;
      this.drag = { name: marker.dataset.name, moved: false };
      scene.setPointerCapture?.(e.pointerId);
    });

    scene.addEventListener("pointermove", (e) => {
      if (!this.drag) return;
      this.drag.moved = true;
      const [x, y] = this.scenePointToWorld(e);
      this.dispatch({ kind: "ui_drag_preview", payload: { name: this.drag.name, x, y } });
    });

    const finish = (e: PointerEvent) => {
      if (!this.drag) return;
      const { name, moved } = this.drag;
      this.drag = null;
      if (!moved || !this.client || !this.sessionId) return;
      const object = this.view.objects.find((o) => o.name === name);
      if (!object) return;
      void this.client
        .mutateWorld(this.sessionId, "move", name, [object.x, object.y])
        .then(() => this.refreshSnapshot())
        .catch((error) =>
          this.dispatch({ kind: "ui_error", payload: { message: friendlyError(error) } }),
        );
      e.preventDefault();
    };
    scene.addEventListener("pointerup", finish);
    scene.addEventListener("pointercancel", () => (this.drag = null));

    scene.addEventListener("dblclick", (e) => {
      const marker = (e.target as HTMLElement).closest<HTMLElement>("[data-name]");
      if (marker?.dataset.name) void this.removeObject(marker.dataset.name);
    });
  }

  // ── Painting ───────────────────────────────────────────────────────────

  private render(): void {
    const m = this.mounts;
    m.chat.innerHTML = renderChat(this.view);
    m.scene.innerHTML = renderScene(this.view);
    m.face.innerHTML = renderFace(this.view);
    m.timeline.innerHTML = renderTimeline(this.view);
    m.gestureChips.innerHTML = renderGestureChips(this.view);

    const canSend =
      this.view.composer.enabled && this.client !== null && this.sessionId !== null;
    m.composerInput.disabled = !canSend;
    m.composerSend.disabled = !canSend;
    m.thoughtsToggle.checked = this.view.showThoughts;

    // Keep the latest chat entry and timeline row in view.
    m.chat.scrollTop = m.chat.scrollHeight;
    m.timeline.scrollTop = m.timeline.scrollHeight;
  }
}
