import { GatewayClient } from "./client.js";
import { renderEvalView } from "./evalview.js";
import { renderTurn } from "./chatview.js";
import {
  buildSnapshot,
  inspectEntity,
  renderPayloadInspector,
  renderTopology,
} from "./topology.js";
import type { TurnRecord } from "./types.js";

// Browser entry point. Pure wiring: every number and payload on screen
// came from the gateway.

interface Pane {
  sessionId: string;
  turns: TurnRecord[];
  log: HTMLElement;
  input: HTMLInputElement;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node as T;
}

async function setupPane(
  client: GatewayClient,
  persona: "engineer" | "user",
): Promise<Pane> {
  const meta = await client.createSession(persona);
  const pane: Pane = {
    sessionId: meta.id,
    turns: [],
    log: el(`${persona}-log`),
    input: el<HTMLInputElement>(`${persona}-input`),
  };

  pane.input.addEventListener("keydown", (ev) => {
    if (ev.key !== "Enter" || pane.input.value.trim() === "") return;
    const text = pane.input.value;
    pane.input.value = "";
    pane.input.disabled = true;
    client
      .sendMessage(pane.sessionId, text)
      .then(({ turn }) => {
        pane.turns.push(turn);
        pane.log.insertAdjacentHTML(
          "beforeend",
          renderTurn(turn, pane.turns.length - 1, pane.sessionId),
        );
      })
      .catch((err) => {
        pane.log.insertAdjacentHTML(
          "beforeend",
          `<div class="send-error">${String(err)}</div>`,
        );
      })
      .finally(() => {
        pane.input.disabled = false;
      });
  });
  return pane;
}

async function refreshTopology(client: GatewayClient): Promise<void> {
  const [snapshot, health] = await Promise.all([
    buildSnapshot(client),
    client.healthz(),
  ]);
  const host = el("topology-host");
  host.innerHTML = renderTopology(snapshot, health.tick);
  host.querySelectorAll<SVGElement>(".cell").forEach((node) => {
    node.addEventListener("click", async () => {
      const id = Number(node.dataset.cell);
      const { path, payload } = await inspectEntity(client, "cell", id);
      el("inspector-host").innerHTML = renderPayloadInspector(path, payload);
    });
  });
  host.querySelectorAll<SVGElement>(".ue").forEach((node) => {
    node.addEventListener("click", async () => {
      const id = Number(node.dataset.ue);
      const { path, payload } = await inspectEntity(client, "ue", id);
      el("inspector-host").innerHTML = renderPayloadInspector(path, payload);
    });
  });
}

async function runEval(client: GatewayClient): Promise<void> {
  const host = el("eval-host");
  host.textContent = "running scripted evaluation";
  const job = await client.submitEvalJob({ backend: "scripted" });
  for (;;) {
    const status = await client.jobStatus(job.id);
    if (status.status === "done") break;
    if (status.status === "failed") {
      host.textContent = `evaluation failed: ${status.error}`;
      return;
    }
    await new Promise((resolve) => setTimeout(resolve, 500));
  }
  host.innerHTML = renderEvalView(await client.jobReportRaw(job.id));
}

export async function main(): Promise<void> {
  const base =
    new URLSearchParams(location.search).get("gateway") ??
    "http://127.0.0.1:8420";
  const client = new GatewayClient(base);

  await Promise.all([
    setupPane(client, "engineer"),
    setupPane(client, "user"),
  ]);

  el("tick-button").addEventListener("click", async () => {
    await client.tick(1);
    await refreshTopology(client);
  });
  el("eval-button").addEventListener("click", () => {
    void runEval(client);
  });

  await refreshTopology(client);
  setInterval(() => void refreshTopology(client), 2000);
}

if (typeof document !== "undefined" && document.getElementById("topology-host")) {
  void main();
}
