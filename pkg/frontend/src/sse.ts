// Minimal server-sent-events decoding over fetch streaming.
//
// The gateway emits frames of the form:
//
//   id: 7
//   event: action_start
//   data: {"seq": 7, "kind": "action_start", ...}
//
// separated by blank lines, with ": keep-alive" comment frames while idle.

export type SseFrame = {
  id: number | null;
  event: string;
  data: string;
};

/** Parse one blank-line-delimited block; returns null for comments/empties. */
export function parseFrameBlock(block: string): SseFrame | null {
  let id: number | null = null;
  let event = "message";
  const dataLines: string[] = [];

  for (const rawLine of block.split(/\r?\n/)) {
    const line = rawLine.replace(/\r$/, "");
    if (!line || line.startsWith(":")) continue;
    if (line.startsWith("id:")) {
      const value = Number(line.slice(3).trim());
      id = Number.isFinite(value) ? value : null;
    } else if (line.startsWith("event:")) {
      event = line.slice(6).trim();
    } else if (line.startsWith("data:")) {
      dataLines.push(line.slice(5).replace(/^ /, ""));
    }
  }

  if (dataLines.length === 0) return null;
  return { id, event, data: dataLines.join("\n") };
}

/** Parse a complete SSE document (e.g. a drained ?follow=false response). */
export function parseSseText(text: string): SseFrame[] {
  const frames: SseFrame[] = [];
  for (const block of text.split(/\r?\n\r?\n/)) {
    const frame = parseFrameBlock(block);
    if (frame) frames.push(frame);
  }
  return frames;
}

/**
 * Decode frames incrementally from a streaming body.  Handles frames split
 * across arbitrary chunk boundaries.
 */
export async function* sseFrames(
  stream: ReadableStream<Uint8Array>,
): AsyncGenerator<SseFrame> {
  const reader = stream.getReader();
  const decoder = new TextDecoder("utf-8");
  let buffer = "";
  try {
    while (true) {
      const { value, done } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      const blocks = buffer.split(/\r?\n\r?\n/);
      buffer = blocks.pop() ?? "";
      for (const block of blocks) {
        const frame = parseFrameBlock(block);
        if (frame) yield frame;
      }
    }
    const tail = parseFrameBlock(buffer);
    if (tail) yield tail;
  } finally {
    reader.releaseLock();
  }
}
