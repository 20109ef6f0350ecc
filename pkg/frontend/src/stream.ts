import { NdjsonParser } from "./ndjson.js";
import { isComplete } from "./turn.js";
import type { Frame } from "./types.js";

// A connection attempt: yields raw text chunks for frames with
// seq >= fromSeq. Sources that can only replay from the start (a POST
// response, a recorded trace) may yield earlier frames too; the stream
// drops those as duplicates.
export type StreamConnector = (fromSeq: number) => AsyncIterable<string>;

export class SequenceGapError extends Error {
  constructor(expected: number, got: number) {
    super(`sequence gap: expected ${expected}, got ${got}`);
    this.name = "SequenceGapError";
  }
}

export interface ConsumeOptions {
  maxReconnects?: number;
  onFrame?: (frame: Frame) => void;
  // Reconnect status surfaces in the UI ("errors: connection loss shows
  // reconnect state" is a rendering concern, hence a callback).
  onReconnect?: (attempt: number, lastSeq: number) => void;
}

// Consumes one turn's event stream with reconnect support. Every accepted
// frame has seq exactly lastSeq + 1: replayed frames are dropped, a skipped
// seq raises SequenceGapError rather than handing the UI a turn with holes.
export async function consumeTurnStream(
  connect: StreamConnector,
  options: ConsumeOptions = {},
): Promise<Frame[]> {
  const maxReconnects = options.maxReconnects ?? 3;
  const frames: Frame[] = [];
  let lastSeq = -1;
  let attempt = 0;

  const accept = (frame: Frame): void => {
    if (frame.seq <= lastSeq) {
      return; // duplicate from a replaying source
    }
    if (frame.seq !== lastSeq + 1) {
      throw new SequenceGapError(lastSeq + 1, frame.seq);
    }
    lastSeq = frame.seq;
    frames.push(frame);
    options.onFrame?.(frame);
  };

  for (;;) {
    const parser = new NdjsonParser();
    try {
      for await (const chunk of connect(lastSeq + 1)) {
        for (const frame of parser.push(chunk)) accept(frame);
      }
      for (const frame of parser.flush()) accept(frame);
    } catch (err) {
      if (err instanceof SequenceGapError) throw err;
      // Connection-level failure: fall through to the reconnect check with
      // whatever frames already arrived intact.
    }
    if (isComplete(frames)) {
      return frames;
    }
    attempt += 1;
    if (attempt > maxReconnects) {
      throw new Error(
        `stream incomplete after ${maxReconnects} reconnects (last seq ${lastSeq})`,
      );
    }
    options.onReconnect?.(attempt, lastSeq);
  }
}

export function seqNumbers(frames: Frame[]): number[] {
  return frames.map((f) => f.seq);
}
