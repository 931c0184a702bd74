/** Page controller: wires the API client, the view state, and the renderer.
 *
 * Query parameters: `?model=<name>` picks the served model (default: the
 * first one listed) and `?api=<base-url>` points at a service running
 * elsewhere (default: same origin). The session id is kept in
 * sessionStorage, so reloading the page replays the history export and
 * reconstructs the identical visible subgraph.
 */

import { ApiClient, ApiError } from "./api.js";
import { GraphView } from "./render.js";
import { ViewState } from "./state.js";
import type { GraphEdge, GraphNode } from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

function svgEl(id: string): SVGSVGElement {
  const node = document.getElementById(id);
  if (!(node instanceof SVGSVGElement)) {
    throw new Error(`missing <svg id="${id}">`);
  }
  return node;
}

function showBanner(message: string): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = message;
  banner.hidden = false;
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get("api") ?? "");

  let modelName = params.get("model");
  try {
    if (!modelName) {
      const models = await api.listModels();
      if (models.length === 0) {
        showBanner("The service has no models loaded.");
        return;
      }
      modelName = models[0].name;
    }

    const state = new ViewState();
    const storageKey = `mentalmodel-session-${modelName}`;
    const existing = window.sessionStorage.getItem(storageKey);
    if (existing) {
      // reload path: replay the exported history into an identical view
      try {
        const history = await api.history(existing);
        const replayed = ViewState.replay(existing, history);
        run(api, replayed, storageKey);
        return;
      } catch {
        window.sessionStorage.removeItem(storageKey); // stale session; start anew
      }
    }
    const created = await api.createSession(modelName);
    state.start(created.session_id, created.turn);
    window.sessionStorage.setItem(storageKey, created.session_id);
    run(api, state, storageKey);
  } catch (err) {
    if (err instanceof ApiError && err.unreachable) {
      showBanner("Cannot reach the explanation service. Is `mentalmodel serve` running?");
    } else {
      showBanner(`Failed to start: ${err instanceof Error ? err.message : String(err)}`);
    }
  }
}

function run(api: ApiClient, state: ViewState, storageKey: string): void {
  const view = new GraphView(
    svgEl("graph"),
    el<HTMLElement>("sidebar"),
    el<HTMLElement>("transcript"),
    {
      onAskWhy: (node: GraphNode, attribute: string) => {
        void askWhy(node, attribute);
      },
      onAskHow: (edge: GraphEdge) => {
        void askHow(edge);
      },
      onReset: () => {
        void reset();
      },
    },
  );

  async function askWhy(node: GraphNode, attribute: string): Promise<void> {
    if (!state.canAskWhy(node.id)) {
      return; // never ask about an entity outside the visible subgraph
    }
    await submit({ type: "why", target: node.name, attribute });
  }

  async function askHow(edge: GraphEdge): Promise<void> {
    if (!state.canAskHow(edge.id)) {
      return;
    }
    await submit({ type: "how", target: edge.label });
  }

  async function reset(): Promise<void> {
    await submit({ type: "reset" });
  }

  async function submit(body: Parameters<ApiClient["ask"]>[1]): Promise<void> {
    try {
      const turn = await api.ask(state.sessionId, body);
      state.apply(turn);
      view.render(state);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        window.sessionStorage.removeItem(storageKey);
        showBanner("The session expired (the service restarted). Reload the page.");
      } else {
        showBanner(err instanceof Error ? err.message : String(err));
      }
    }
  }

  el<HTMLDivElement>("banner").hidden = true;
  view.render(state);
}

void boot();
