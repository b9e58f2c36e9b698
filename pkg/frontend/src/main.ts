// Entry point: grab the static shell, build the controller, wire the header.

import { AppController, demoSessionBody } from "./app.js";
import type { AppMounts } from "./app.js";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

const mounts: AppMounts = {
  chat: byId("chat"),
  composerForm: byId<HTMLFormElement>("composer"),
  composerInput: byId<HTMLInputElement>("composer-input"),
  composerSend: byId<HTMLButtonElement>("composer-send"),
  thoughtsToggle: byId<HTMLInputElement>("thoughts-toggle"),
  scene: byId("scene"),
  palette: byId("palette"),
  gestureButtons: byId("gesture-buttons"),
  gestureChips: byId("gesture-chips"),
  face: byId("face"),
  timeline: byId("timeline"),
  sessionLabel: byId("session-label"),
};

const app = new AppController(mounts);

const gatewayUrl = byId<HTMLInputElement>("gateway-url");
const sessionInput = byId<HTMLInputElement>("session-id");
const headerError = byId("header-error");

function reportHeaderError(error: unknown): void {
  headerError.textContent = error instanceof Error ? error.message : String(error);
}

byId("connect-btn").addEventListener("click", () => {
  headerError.textContent = "";
  const sessionId = sessionInput.value.trim();
  if (!sessionId) {
    reportHeaderError(new Error("enter a session id to connect"));
    return;
  }
  app.connect(gatewayUrl.value.trim(), sessionId).catch(reportHeaderError);
});

byId("demo-btn").addEventListener("click", () => {
  headerError.textContent = "";
  app
    .createAndConnect(gatewayUrl.value.trim(), demoSessionBody())
    .then(() => {
      if (app.sessionId) sessionInput.value = app.sessionId;
    })
    .catch(reportHeaderError);
});

byId("live-btn").addEventListener("click", () => {
  headerError.textContent = "";
  app
    .createAndConnect(gatewayUrl.value.trim(), { backend: { kind: "live" } })
    .then(() => {
      if (app.sessionId) sessionInput.value = app.sessionId;
    })
    .catch(reportHeaderError);
});

// Expose for exploratory poking from the browser console.
declare global {
  interface Window {
    groundedchatApp: AppController;
  }
}
window.groundedchatApp = app;
