import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import {
  SequenceGapError,
  consumeTurnStream,
  seqNumbers,
  type StreamConnector,
} from "../src/stream.js";
import { turnFromEvents } from "../src/turn.js";
import type { TurnRecord } from "../src/types.js";

const recording = readFileSync(
  join(__dirname, "fixtures", "stream_turn.ndjson"),
  "utf8",
);
const persisted = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "persisted_turn.json"), "utf8"),
) as TurnRecord;
const lines = recording.split("\n").filter((l) => l.trim().length > 0);

// Connection that delivers whole-recording replays but dies after
// `dropAfter` lines on its first attempt. Chunks are cut mid-line to
// exercise the parser's buffering.
function flakyConnector(dropAfter: number): {
  connect: StreamConnector;
  attempts: () => number;
} {
  let attempts = 0;
  const connect: StreamConnector = async function* () {
    attempts += 1;
    const drop = attempts === 1;
    const body = lines.slice(0, drop ? dropAfter : lines.length);
    for (const line of body) {
      const cut = Math.floor(line.length / 3);
      yield line.slice(0, cut);
      yield line.slice(cut) + "\n";
    }
    if (drop) throw new Error("connection reset");
  };
  return { connect, attempts: () => attempts };
}

describe("consumeTurnStream", () => {
  it("consumes an unbroken stream in order", async () => {
    const frames = await consumeTurnStream(async function* () {
      yield recording;
    });
    expect(seqNumbers(frames)).toEqual(lines.map((_, i) => i));
    expect(turnFromEvents(frames)).toEqual(persisted);
  });

  it("survives a forced reconnect with no missing or duplicated seq", async () => {
    const { connect, attempts } = flakyConnector(Math.floor(lines.length / 2));
    const reconnects: number[] = [];
    const frames = await consumeTurnStream(connect, {
      onReconnect: (attempt, lastSeq) => reconnects.push(lastSeq),
    });

    expect(attempts()).toBe(2);
    expect(reconnects).toHaveLength(1);

    // the acceptance check: every seq exactly once, 0..N-1
    const seqs = seqNumbers(frames);
    expect(seqs).toEqual(lines.map((_, i) => i));
    expect(new Set(seqs).size).toBe(seqs.length);

    // and the reassembled turn matches what the server persisted
    expect(turnFromEvents(frames)).toEqual(persisted);
  });

  it("drops mid-turn drops at every cut point without corruption", async () => {
    for (let cut = 1; cut < lines.length; cut++) {
      const { connect } = flakyConnector(cut);
      const frames = await consumeTurnStream(connect);
      expect(turnFromEvents(frames)).toEqual(persisted);
    }
  });

  it("raises on a sequence gap instead of rendering a holed turn", async () => {
    const gappy: StreamConnector = async function* () {
      yield lines[0] + "\n";
      yield lines[2] + "\n"; // seq 1 missing
    };
    await expect(consumeTurnStream(gappy)).rejects.toThrow(SequenceGapError);
  });

  it("gives up after maxReconnects incomplete attempts", async () => {
    const neverFinishes: StreamConnector = async function* () {
      yield lines[0] + "\n";
    };
    await expect(
      consumeTurnStream(neverFinishes, { maxReconnects: 2 }),
    ).rejects.toThrow(/incomplete after 2 reconnects/);
  });

  it("streams frames to the onFrame callback as they arrive", async () => {
    const seen: number[] = [];
    await consumeTurnStream(
      async function* () {
        yield recording;
      },
      { onFrame: (f) => seen.push(f.seq) },
    );
    expect(seen).toEqual(lines.map((_, i) => i));
  });
});
