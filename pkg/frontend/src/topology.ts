import { esc } from "./evalview.js";
import type { GatewayClient } from "./client.js";

export type LoadBucket = "low" | "mid" | "high";

export interface CellView {
  id: number;
  load: number;
  position: [number, number];
}

export interface UeView {
  id: number;
  position: [number, number];
  serving: number;
}

export interface TopologySnapshot {
  tick: number;
  state_version: number;
  arena: [number, number];
  cells: CellView[];
  ues: UeView[];
}

const BUCKET_COLORS: Record<LoadBucket, string> = {
  low: "#43a047",
  mid: "#fb8c00",
  high: "#e53935",
};

// Load color buckets: below 0.5, 0.5 through 0.8, above 0.8.
export function loadBucket(load: number): LoadBucket {
  if (load < 0.5) return "low";
  if (load <= 0.8) return "mid";
  return "high";
}

// A snapshot is stale once the world has moved more than 3 ticks past it.
export function isStale(snapshotTick: number, currentTick: number): boolean {
  return currentTick - snapshotTick > 3;
}

// The knowledge path a click on an entity resolves to.
export function entityQueryPath(kind: "cell" | "ue", id: number): string {
  return kind === "ue" ? `ue/${id}/status` : `cell/${id}/load`;
}

// Assemble a consistent view from the state API alone. Cell positions come
// from base-station summaries: there is no bs index endpoint, so we probe
// bs ids matching cell ids and take positions from each summary's cell
// list (covers both one-bs-per-cell and shared-bs layouts).
export async function buildSnapshot(
  client: GatewayClient,
): Promise<TopologySnapshot> {
  const cellsIndex = await client.state("cell/_all");
  const cellIds = cellsIndex.payload.cell_ids as number[];

  const positions = new Map<number, [number, number]>();
  for (const cid of cellIds) {
    if (positions.has(cid)) continue;
    try {
      const summary = await client.state(`bs/${cid}/summary`);
      const pos = summary.payload.position as [number, number];
      for (const member of summary.payload.cells as number[]) {
        positions.set(member, pos);
      }
    } catch {
      // not a bs id in this layout; another summary will cover the cell
    }
  }

  const cells: CellView[] = [];
  let tick = 0;
  let version = cellsIndex.state_version;
  for (const cid of cellIds) {
    const res = await client.state(`cell/${cid}/load`);
    tick = res.payload.tick as number;
    version = res.state_version;
    cells.push({
      id: cid,
      load: res.payload.load as number,
      position: positions.get(cid) ?? [0, 0],
    });
  }

  const ueIndex = await client.state("ue/_all");
  const ues: UeView[] = [];
  for (const uid of ueIndex.payload.ue_ids as number[]) {
    const res = await client.state(`ue/${uid}/status`);
    ues.push({
      id: uid,
      position: res.payload.position as [number, number],
      serving: res.payload.serving_cell as number,
    });
  }

  const maxX = Math.max(600, ...cells.map((c) => c.position[0]), ...ues.map((u) => u.position[0]));
  const maxY = Math.max(600, ...cells.map((c) => c.position[1]), ...ues.map((u) => u.position[1]));
  return { tick, state_version: version, arena: [maxX, maxY], cells, ues };
}

// Click handling: issue the matching knowledge query, hand back the
// payload verbatim for display.
export async function inspectEntity(
  client: GatewayClient,
  kind: "cell" | "ue",
  id: number,
): Promise<{ path: string; payload: Record<string, unknown> }> {
  const path = entityQueryPath(kind, id);
  const res = await client.state(path);
  return { path, payload: res.payload };
}

export function renderTopology(
  snapshot: TopologySnapshot,
  currentTick: number,
): string {
  const [aw, ah] = snapshot.arena;
  const cellById = new Map(snapshot.cells.map((c) => [c.id, c]));

  const links = snapshot.ues.map((ue) => {
    const cell = cellById.get(ue.serving);
    if (cell === undefined) return "";
    return (
      `<line class="serving-link" x1="${ue.position[0].toFixed(1)}" ` +
      `y1="${ue.position[1].toFixed(1)}" x2="${cell.position[0]}" ` +
      `y2="${cell.position[1]}" stroke="#bbb" stroke-width="0.8"></line>`
    );
  });

  const cells = snapshot.cells.map((cell) => {
    const bucket = loadBucket(cell.load);
    return (
      `<g class="cell bucket-${bucket}" data-cell="${cell.id}" ` +
      `data-load="${cell.load}">` +
      `<circle cx="${cell.position[0]}" cy="${cell.position[1]}" r="18" ` +
      `fill="${BUCKET_COLORS[bucket]}" fill-opacity="0.85"></circle>` +
      `<text x="${cell.position[0]}" y="${cell.position[1] + 4}" ` +
      `text-anchor="middle" class="cell-label">${cell.id}</text></g>`
    );
  });

  const ues = snapshot.ues.map(
    (ue) =>
      `<circle class="ue" data-ue="${ue.id}" cx="${ue.position[0].toFixed(1)}" ` +
      `cy="${ue.position[1].toFixed(1)}" r="4" fill="#1e88e5"><title>` +
      `ue ${ue.id} -&gt; cell ${ue.serving}</title></circle>`,
  );

  const banner = isStale(snapshot.tick, currentTick)
    ? `<div class="stale-banner">stale data: snapshot from tick ` +
      `${snapshot.tick}, world at ${currentTick}</div>`
    : "";

  return (
    banner +
    `<svg class="topology" viewBox="0 0 ${aw} ${ah}" role="img" ` +
    `aria-label="network topology at tick ${snapshot.tick}">` +
    links.join("") +
    cells.join("") +
    ues.join("") +
    `</svg>`
  );
}

export function renderPayloadInspector(
  path: string,
  payload: Record<string, unknown>,
): string {
  return (
    `<div class="inspector"><div class="inspector-path">${esc(path)}</div>` +
    `<pre class="inspector-payload">${esc(JSON.stringify(payload, null, 2))}</pre></div>`
  );
}
