import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { writeFileSync } from "node:fs";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { GatewayClient } from "../src/client.js";
import { kpiHeader, rawField, renderEvalView } from "../src/evalview.js";
import { buildSnapshot, renderTopology } from "../src/topology.js";
import type { TurnRecord } from "../src/types.js";

// End-to-end against a real server. Skipped where the airan CLI is not
// installed (the recorded-fixture tests still cover the wire format).
const serverAvailable = spawnSync("airan", ["--help"]).status === 0;

const PORT = 8473;
const BASE = `http://127.0.0.1:${PORT}`;

describe.runIf(serverAvailable)("live gateway", () => {
  let child: ChildProcess;
  let cwd: string;
  const client = new GatewayClient(BASE);

  beforeAll(async () => {
    cwd = mkdtempSync(join(tmpdir(), "airan-live-"));
    const config = join(cwd, "serve.json");
    writeFileSync(
      config,
      JSON.stringify({ port: PORT, sim: { seed: 7, warmup_ticks: 5 } }),
    );
    child = spawn("airan", ["serve", "--config", config], {
      cwd,
      stdio: "ignore",
    });
    for (let i = 0; i < 40; i++) {
      try {
        await client.healthz();
        return;
      } catch {
        await new Promise((resolve) => setTimeout(resolve, 250));
      }
    }
    throw new Error("server never became healthy");
  }, 15_000);

  afterAll(() => {
    child?.kill("SIGTERM");
  });

  it("streamed turn equals the turn the server persisted", async () => {
    const session = await client.createSession("engineer");
    const { frames, turn } = await client.sendMessage(
      session.id,
      "diagnose faults on cell 2",
    );

    expect(frames.map((f) => f.seq)).toEqual(frames.map((_, i) => i));

    const trace = readFileSync(
      join(cwd, "traces", `${session.id}.jsonl`),
      "utf8",
    );
    const persisted = JSON.parse(trace.split("\n")[0]!) as TurnRecord;
    expect(turn).toEqual(persisted);
  }, 10_000);

  it("both persona panes hold independent sessions", async () => {
    const engineer = await client.createSession("engineer");
    const user = await client.createSession("user");
    expect(engineer.id).not.toBe(user.id);
    expect(engineer.persona).toBe("engineer");
    expect(user.persona).toBe("user");
  });

  it("topology renders straight from live state", async () => {
    await client.tick(5);
    const [snapshot, health] = await Promise.all([
      buildSnapshot(client),
      client.healthz(),
    ]);
    expect(snapshot.cells.length).toBeGreaterThan(0);
    expect(snapshot.ues.length).toBeGreaterThan(0);
    const svg = renderTopology(snapshot, health.tick);
    expect(svg).toContain('class="topology"');
    expect(svg).not.toContain("stale-banner");
  }, 10_000);

  it("scripted eval job renders with byte-equal KPIs", async () => {
    const job = await client.submitEvalJob({ backend: "scripted" });
    let status = job.status as string;
    for (let i = 0; i < 120 && status !== "done"; i++) {
      await new Promise((resolve) => setTimeout(resolve, 250));
      status = (await client.jobStatus(job.id)).status;
      if (status === "failed") throw new Error("job failed");
    }
    expect(status).toBe("done");

    const raw = await client.jobReportRaw(job.id);
    expect(rawField(raw, "overall_mean")).toBe("1.0");
    expect(kpiHeader(raw)).toContain(">1.0</span>");

    const html = renderEvalView(raw);
    expect(html.match(/class="mark"/g)).toHaveLength(50);
  }, 60_000);
});
