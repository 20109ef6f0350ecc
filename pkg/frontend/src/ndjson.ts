import type { Frame } from "./types.js";

// Incremental NDJSON decoder. Chunks arrive at arbitrary boundaries, so we
// keep the unterminated tail in a buffer between pushes.
export class NdjsonParser {
  private buffer = "";

  push(chunk: string): Frame[] {
    this.buffer += chunk;
    const lines = this.buffer.split("\n");
    this.buffer = lines.pop() ?? "";
    return lines
      .map((line) => line.trim())
      .filter((line) => line.length > 0)
      .map(parseFrame);
  }

  // End of stream: a server that closed cleanly terminates every line, but
  // a final unterminated frame is still valid JSON and must not be lost.
  flush(): Frame[] {
    const tail = this.buffer.trim();
    this.buffer = "";
    return tail.length > 0 ? [parseFrame(tail)] : [];
  }
}

export function parseFrame(line: string): Frame {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new Error(`undecodable frame: ${line.slice(0, 120)}`);
  }
  if (typeof raw !== "object" || raw === null) {
    throw new Error(`frame is not an object: ${line.slice(0, 120)}`);
  }
  const frame = raw as Record<string, unknown>;
  if (typeof frame.seq !== "number" || typeof frame.kind !== "string") {
    throw new Error(`frame missing seq/kind: ${line.slice(0, 120)}`);
  }
  return frame as unknown as Frame;
}

export function parseNdjson(text: string): Frame[] {
  const parser = new NdjsonParser();
  return [...parser.push(text), ...parser.flush()];
}
