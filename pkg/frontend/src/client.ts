// Thin HTTP + SSE client for the gateway.  All interpretation of events
// happens in the store; this module only moves JSON.

import { parseSseText, sseFrames } from "./sse.js";
import type { GatewayEvent, StateSnapshot } from "./types.js";

export class GatewayError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "GatewayError";
  }
}

export type CreateSessionResult = {
  session_id: string;
  created_at: number;
  backend: string;
};

export type StreamOptions = {
  after?: number;
  signal?: AbortSignal;
  onEvent: (event: GatewayEvent) => void;
  /** Called before each reconnect attempt after a dropped stream. */
  onRetry?: (error: unknown) => void;
  retryDelayMs?: number;
};

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (body && body.detail !== undefined) return String(body.detail);
  } catch {
    // fall through to status text
  }
  return response.statusText || "request failed";
}

export class GatewayClient {
  constructor(public readonly baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      throw new GatewayError(response.status, await errorDetail(response));
    }
    return (await response.json()) as T;
  }

  healthz(): Promise<{ status: string; sessions: number }> {
    return this.request("GET", "/healthz");
  }

  createSession(body: Record<string, unknown>): Promise<CreateSessionResult> {
    return this.request("POST", "/sessions", body);
  }

  postUtterance(sessionId: string, text: string): Promise<Record<string, unknown>> {
    return this.request("POST", `/sessions/${sessionId}/utterance`, { text });
  }

  mutateWorld(
    sessionId: string,
    op: "add" | "remove" | "move",
    name: string,
    position?: [number, number],
  ): Promise<{ objects: string[]; diff: { added: string[]; removed: string[] } }> {
    const body: Record<string, unknown> = { op, name };
    if (position) body.position = position;
    return this.request("POST", `/sessions/${sessionId}/world`, body);
  }

  postGesture(sessionId: string, gesture: string): Promise<{ pending_gestures: string[] }> {
    return this.request("POST", `/sessions/${sessionId}/gesture`, { gesture });
  }

  getState(sessionId: string): Promise<StateSnapshot> {
    return this.request("GET", `/sessions/${sessionId}/state`);
  }

  getTranscript(sessionId: string): Promise<{ messages: Record<string, unknown>[] }> {
    return this.request("GET", `/sessions/${sessionId}/transcript`);
  }

  /** Fetch everything after `after` in one shot (?follow=false). */
  async drainEvents(sessionId: string, after = 0): Promise<GatewayEvent[]> {
    const response = await fetch(
      `${this.baseUrl}/sessions/${sessionId}/events?follow=false&last_event_id=${after}`,
    );
    if (!response.ok) {
      throw new GatewayError(response.status, await errorDetail(response));
    }
    return parseSseText(await response.text()).map(
      (frame) => JSON.parse(frame.data) as GatewayEvent,
    );
  }

  /**
   * Follow the live stream, resuming from the last delivered seq whenever the
   * connection drops.  Resolves when `signal` aborts.
   */
  async streamEvents(sessionId: string, options: StreamOptions): Promise<void> {
    let cursor = options.after ?? 0;
    const retryDelay = options.retryDelayMs ?? 1000;
    while (!options.signal?.aborted) {
      try {
        const response = await fetch(
          `${this.baseUrl}/sessions/${sessionId}/events?follow=true&last_event_id=${cursor}`,
          { signal: options.signal },
        );
        if (!response.ok) {
          throw new GatewayError(response.status, await errorDetail(response));
        }
        if (!response.body) throw new Error("response has no body");
        for await (const frame of sseFrames(response.body)) {
          const event = JSON.parse(frame.data) as GatewayEvent;
          cursor = event.seq;
          options.onEvent(event);
        }
      } catch (error) {
        if (options.signal?.aborted) return;
        // Unknown sessions never come back; surface instead of spinning.
        if (error instanceof GatewayError && error.status === 404) throw error;
        options.onRetry?.(error);
        await new Promise((resolve) => setTimeout(resolve, retryDelay));
      }
    }
  }
}
