import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { GatewayClient } from "../src/client.js";
import {
  buildSnapshot,
  entityQueryPath,
  inspectEntity,
  isStale,
  loadBucket,
  renderPayloadInspector,
  renderTopology,
  type TopologySnapshot,
} from "../src/topology.js";
import type { Health, StateResponse } from "../src/types.js";

type StateFixture = Record<string, StateResponse> & { healthz: Health };
const states = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "states.json"), "utf8"),
) as StateFixture;

// client whose fetch serves the recorded gateway responses
function fixtureClient(): GatewayClient {
  return new GatewayClient("http://fixture", async (input) => {
    const url = new URL(input);
    if (url.pathname === "/healthz") {
      return new Response(JSON.stringify(states.healthz));
    }
    const path = url.pathname.replace(/^\/state\//, "");
    const hit = states[path];
    if (hit === undefined) {
      return new Response(
        JSON.stringify({ error: { type: "NotRouted", message: path } }),
        { status: 404 },
      );
    }
    return new Response(JSON.stringify(hit));
  });
}

describe("loadBucket", () => {
  it("buckets at the documented boundaries", () => {
    expect(loadBucket(0.0)).toBe("low");
    expect(loadBucket(0.49)).toBe("low");
    expect(loadBucket(0.5)).toBe("mid");
    expect(loadBucket(0.8)).toBe("mid");
    expect(loadBucket(0.81)).toBe("high");
    expect(loadBucket(0.9)).toBe("high");
    expect(loadBucket(1.0)).toBe("high");
  });
});

describe("isStale", () => {
  it("flags snapshots older than three ticks", () => {
    expect(isStale(10, 13)).toBe(false);
    expect(isStale(10, 14)).toBe(true);
    expect(isStale(10, 10)).toBe(false);
  });
});

describe("buildSnapshot", () => {
  it("assembles the view purely from recorded state responses", async () => {
    const snapshot = await buildSnapshot(fixtureClient());

    const cellIds = states["cell/_all"]!.payload.cell_ids as number[];
    expect(snapshot.cells.map((c) => c.id)).toEqual(cellIds);
    expect(snapshot.ues.map((u) => u.id)).toEqual(
      states["ue/_all"]!.payload.ue_ids as number[],
    );
    expect(snapshot.tick).toBe(states.healthz.tick);

    // every rendered value traces back to a server payload
    for (const cell of snapshot.cells) {
      const payload = states[`cell/${cell.id}/load`]!.payload;
      expect(cell.load).toBe(payload.load);
      const summary = states[`bs/${cell.id}/summary`]!.payload;
      expect(cell.position).toEqual(summary.position);
    }
    for (const ue of snapshot.ues) {
      const payload = states[`ue/${ue.id}/status`]!.payload;
      expect(ue.position).toEqual(payload.position);
      expect(ue.serving).toBe(payload.serving_cell);
    }
  });
});

describe("renderTopology", () => {
  const snapshot: TopologySnapshot = {
    tick: 20,
    state_version: 21,
    arena: [600, 600],
    cells: [
      { id: 1, load: 0.2, position: [150, 150] },
      { id: 2, load: 0.65, position: [450, 150] },
      { id: 3, load: 0.9, position: [300, 450] },
    ],
    ues: [
      { id: 0, position: [140, 160], serving: 1 },
      { id: 1, position: [310, 440], serving: 3 },
    ],
  };

  it("colors cells by load bucket, 0.9 in the top bucket", () => {
    const svg = renderTopology(snapshot, 20);
    expect(svg).toContain('class="cell bucket-low" data-cell="1"');
    expect(svg).toContain('class="cell bucket-mid" data-cell="2"');
    expect(svg).toContain('class="cell bucket-high" data-cell="3"');
  });

  it("draws a serving link per ue", () => {
    const svg = renderTopology(snapshot, 20);
    expect(svg.match(/class="serving-link"/g)).toHaveLength(2);
    expect(svg.match(/class="ue"/g)).toHaveLength(2);
  });

  it("shows the stale banner only when the world ran ahead", () => {
    expect(renderTopology(snapshot, 23)).not.toContain("stale-banner");
    expect(renderTopology(snapshot, 24)).toContain("stale-banner");
  });

  it("renders the recorded world without drift from the payloads", async () => {
    const snap = await buildSnapshot(fixtureClient());
    const svg = renderTopology(snap, states.healthz.tick);
    for (const ue of snap.ues) {
      const [x] = (states[`ue/${ue.id}/status`]!.payload.position as [
        number,
        number,
      ]);
      expect(svg).toContain(`data-ue="${ue.id}" cx="${x.toFixed(1)}"`);
    }
  });
});

describe("entity inspection", () => {
  it("clicking maps to the matching knowledge query", () => {
    expect(entityQueryPath("ue", 7)).toBe("ue/7/status");
    expect(entityQueryPath("cell", 2)).toBe("cell/2/load");
  });

  it("shows the ue payload verbatim", async () => {
    const { path, payload } = await inspectEntity(fixtureClient(), "ue", 7);
    expect(path).toBe("ue/7/status");
    expect(payload).toEqual(states["ue/7/status"]!.payload);

    const html = renderPayloadInspector(path, payload);
    expect(html).toContain("ue/7/status");
    expect(html).toContain(JSON.stringify(payload, null, 2).replace(/"/g, "&quot;"));
  });
});
