// Pure string renderers: every panel is a function of the view alone, so
// identical views always produce byte-identical markup.

import { fillFor } from "./palette.js";
import type { Emotion, SceneObjectView, UiSessionView } from "./types.js";
import { TABLE_X_MAX, TABLE_X_MIN, TABLE_Y_MAX, TABLE_Y_MIN } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

// ── Chat panel ───────────────────────────────────────────────────────────────

export function renderChat(view: UiSessionView): string {
  const parts: string[] = [];
  if (view.composer.error) {
    parts.push(
      `<div class="banner error" role="alert">${escapeHtml(view.composer.error)}</div>`,
    );
  }
  parts.push('<ul class="chat-log">');
  for (const entry of view.chat) {
    switch (entry.kind) {
      case "user":
        parts.push(`<li class="msg user">${escapeHtml(entry.text)}</li>`);
        break;
      case "sentence": {
        const cls = entry.done ? "msg robot done" : "msg robot playing";
        parts.push(`<li class="${cls}">${escapeHtml(entry.text)}</li>`);
        break;
      }
      case "thought":
        if (view.showThoughts) {
          parts.push(`<li class="msg thought">${escapeHtml(entry.text)}</li>`);
        }
        break;
      case "status":
        if (view.showThoughts) {
          parts.push(
            `<li class="msg status"><span class="q">${escapeHtml(entry.query)}</span>` +
              `<span class="a">${escapeHtml(entry.answer)}</span></li>`,
          );
        }
        break;
    }
  }
  parts.push("</ul>");
  return parts.join("");
}

// ── Table scene (top-down) ───────────────────────────────────────────────────

const SCENE_W = 640;
const SCENE_H = 480;
const TABLE_LEFT = 20;
const TABLE_RIGHT = 620;
const TABLE_TOP = 60;
const TABLE_BOTTOM = 420;

/** World coordinates → SVG pixels (robot edge at the bottom, user at the top). */
export function worldToSvg(x: number, y: number): [number, number] {
  const sx =
    TABLE_LEFT +
    ((x - TABLE_X_MIN) / (TABLE_X_MAX - TABLE_X_MIN)) * (TABLE_RIGHT - TABLE_LEFT);
  const sy =
    TABLE_BOTTOM -
    ((y - TABLE_Y_MIN) / (TABLE_Y_MAX - TABLE_Y_MIN)) * (TABLE_BOTTOM - TABLE_TOP);
  return [Math.round(sx * 100) / 100, Math.round(sy * 100) / 100];
}

/** SVG pixels → world coordinates (inverse of worldToSvg, unclamped). */
export function svgToWorld(px: number, py: number): [number, number] {
  const x =
    TABLE_X_MIN +
    ((px - TABLE_LEFT) / (TABLE_RIGHT - TABLE_LEFT)) * (TABLE_X_MAX - TABLE_X_MIN);
  const y =
    TABLE_Y_MIN +
    ((TABLE_BOTTOM - py) / (TABLE_BOTTOM - TABLE_TOP)) * (TABLE_Y_MAX - TABLE_Y_MIN);
  return [x, y];
}

export const SCENE_VIEWBOX = { width: SCENE_W, height: SCENE_H };

const ROBOT_ANCHOR = worldToSvg(0, 0);

function findObject(view: UiSessionView, name: string): SceneObjectView | undefined {
  return view.objects.find((o) => o.name === name);
}

function ray(
  view: UiSessionView,
  target: string,
  cls: string,
  dash: boolean,
): string {
  const object = findObject(view, target);
  if (!object) return "";
  const [tx, ty] = worldToSvg(object.x, object.y);
  const dashAttr = dash ? ' stroke-dasharray="6 5"' : "";
  return (
    `<line class="${cls}" x1="${ROBOT_ANCHOR[0]}" y1="${ROBOT_ANCHOR[1]}" ` +
    `x2="${tx}" y2="${ty}"${dashAttr} />`
  );
}

export function renderScene(view: UiSessionView): string {
  const parts: string[] = [];
  parts.push(
    `<svg class="scene" viewBox="0 0 ${SCENE_W} ${SCENE_H}" ` +
      'xmlns="http://www.w3.org/2000/svg" role="img" aria-label="table scene">',
  );
  // Table surface, user zone, robot marker.
  parts.push(
    `<rect class="table" x="${TABLE_LEFT}" y="${TABLE_TOP}" ` +
      `width="${TABLE_RIGHT - TABLE_LEFT}" height="${TABLE_BOTTOM - TABLE_TOP}" rx="14" />`,
  );
  parts.push(
    `<text class="zone-label" x="${SCENE_W / 2}" y="34" text-anchor="middle">user side</text>`,
  );
  parts.push(
    `<circle class="robot-origin" cx="${ROBOT_ANCHOR[0]}" cy="${ROBOT_ANCHOR[1] + 26}" r="16" />` +
      `<text class="zone-label" x="${SCENE_W / 2}" y="${SCENE_H - 8}" ` +
      'text-anchor="middle">robot</text>',
  );

  // Rays first so markers draw on top of them.
  if (view.gazeTarget) parts.push(ray(view, view.gazeTarget, "gaze-ray", true));
  if (view.arm.pose !== "idle") {
    parts.push(ray(view, view.arm.target, `arm-ray ${view.arm.pose}`, false));
  }

  for (const object of view.objects) {
    const [cx, cy] = worldToSvg(object.x, object.y);
    const cls = object.preview ? "marker preview" : "marker";
    parts.push(
      `<g class="${cls}" data-name="${escapeHtml(object.name)}">` +
        `<circle cx="${cx}" cy="${cy}" r="18" fill="${fillFor(object.name)}" />` +
        `<text x="${cx}" y="${cy + 32}" text-anchor="middle">${escapeHtml(object.name)}</text>` +
        "</g>",
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

// ── Robot face ───────────────────────────────────────────────────────────────

type FaceParts = { brows: string; eyes: string; mouth: string };

function faceParts(emotion: Emotion): FaceParts {
  const eyes = (ry: number) =>
    `<ellipse class="eye" cx="70" cy="85" rx="9" ry="${ry}" />` +
    `<ellipse class="eye" cx="130" cy="85" rx="9" ry="${ry}" />`;
  switch (emotion) {
    case "happiness":
      return {
        brows:
          '<path class="brow" d="M55 66 Q70 58 85 66" />' +
          '<path class="brow" d="M115 66 Q130 58 145 66" />',
        eyes: eyes(9),
        mouth: '<path class="mouth" d="M62 125 Q100 160 138 125" />',
      };
    case "sadness":
      return {
        brows:
          '<path class="brow" d="M55 62 Q70 70 85 66" />' +
          '<path class="brow" d="M115 66 Q130 70 145 62" />',
        eyes: eyes(8),
        mouth: '<path class="mouth" d="M66 142 Q100 116 134 142" />',
      };
    case "surprise":
      return {
        brows:
          '<path class="brow" d="M55 54 Q70 46 85 54" />' +
          '<path class="brow" d="M115 54 Q130 46 145 54" />',
        eyes: eyes(12),
        mouth: '<ellipse class="mouth open" cx="100" cy="137" rx="14" ry="19" />',
      };
    case "anger":
      return {
        brows:
          '<path class="brow" d="M55 58 L85 70" />' +
          '<path class="brow" d="M145 58 L115 70" />',
        eyes: eyes(6),
        mouth: '<path class="mouth" d="M72 138 L128 138" />',
      };
    case "neutral":
    default:
      return {
        brows:
          '<path class="brow" d="M55 64 L85 64" />' +
          '<path class="brow" d="M115 64 L145 64" />',
        eyes: eyes(9),
        mouth: '<path class="mouth" d="M70 132 L130 132" />',
      };
  }
}

export function renderFace(view: UiSessionView): string {
  const { brows, eyes, mouth } = faceParts(view.face);
  const gaze = view.gazeTarget
    ? `<text class="gaze-label" x="100" y="192" text-anchor="middle">` +
      `looking at ${escapeHtml(view.gazeTarget)}</text>`
    : "";
  return (
    `<svg class="face ${view.face}" viewBox="0 0 200 200" ` +
    'xmlns="http://www.w3.org/2000/svg" role="img" aria-label="robot face">' +
    '<circle class="head" cx="100" cy="100" r="78" />' +
    brows +
    eyes +
    mouth +
    gaze +
    `</svg><div class="face-caption">${escapeHtml(view.face)}</div>`
  );
}

// ── Execution timeline ───────────────────────────────────────────────────────

export function renderTimeline(view: UiSessionView): string {
  const parts: string[] = ['<ol class="timeline">'];
  for (const row of view.timeline) {
    const seq = row.seq === null ? "" : `<span class="seq">#${row.seq}</span>`;
    parts.push(
      `<li class="row ${escapeHtml(row.kind)}">${seq}` +
        `<span class="kind">${escapeHtml(row.kind)}</span>` +
        `<span class="summary">${escapeHtml(row.summary)}</span></li>`,
    );
  }
  parts.push("</ol>");
  return parts.join("");
}

// ── Gesture chips ────────────────────────────────────────────────────────────

export function renderGestureChips(view: UiSessionView): string {
  if (view.pendingGestures.length === 0) {
    return '<span class="chip none">no pending gestures</span>';
  }
  return view.pendingGestures
    .map((g) => `<span class="chip">${escapeHtml(g)}</span>`)
    .join("");
}
