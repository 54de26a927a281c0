/**
 * Browser bootstrap: wires the session model and markup builders to the DOM.
 *
 * The session id lives in the URL fragment so reloading resumes the same
 * session; the gateway base URL comes from ?gateway=... or defaults to the
 * local service. Left/right arrow keys answer the pending query.
 */

import { GatewayClient } from "./api.js";
import { SessionModel } from "./model.js";
import { estimatePanel, queryScreen } from "./render.js";
import type { Choice } from "./types.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("gateway") ?? "http://127.0.0.1:8000";
const client = new GatewayClient(baseUrl);
const model = new SessionModel(client);

const queryRoot = document.getElementById("query-root") as HTMLElement;
const estimateRoot = document.getElementById("estimate-root") as HTMLElement;
const statusLine = document.getElementById("status") as HTMLElement;

function redraw(): void {
  const view = model.view;
  if (!view) {
    return;
  }
  queryRoot.innerHTML = queryScreen(view, baseUrl, model.inFlight);
  estimateRoot.innerHTML = estimatePanel(view, model, baseUrl);
  document.getElementById("answer-first")?.addEventListener("click", () => submit("first"));
  document.getElementById("answer-second")?.addEventListener("click", () => submit("second"));
}

async function submit(choice: Choice): Promise<void> {
  if (!model.canAnswer) {
    return;
  }
  statusLine.textContent = "submitting...";
  redraw();
  try {
    await model.answer(choice);
    statusLine.textContent = "";
  } catch (error) {
    statusLine.textContent = `${error} — press R to retry`;
  }
  redraw();
}

let lastChoice: Choice = "first";

document.addEventListener("keydown", (event) => {
  if (event.key === "ArrowLeft") {
    lastChoice = "first";
    void submit("first");
  } else if (event.key === "ArrowRight") {
    lastChoice = "second";
    void submit("second");
  } else if (event.key === "r" || event.key === "R") {
    void submit(lastChoice);
  }
});

async function boot(): Promise<void> {
  const fragment = window.location.hash.replace(/^#/, "");
  try {
    if (fragment) {
      await model.resume(fragment);
    } else {
      const view = await model.start({ dimension: 2, strategy: "closed_form", family: "color_shape" });
      window.location.hash = view.id;
    }
    statusLine.textContent = "";
  } catch (error) {
    statusLine.textContent = `failed to reach gateway at ${baseUrl}: ${error}`;
  }
  redraw();
}

void boot();
