/**
 * Application shell: owns the state, serializes service calls (one
 * request in flight per session) and re-renders on every transition.
 */

import { ApiClient, ApiError } from "./api.js";
import type { Handlers } from "./render.js";
import { renderApp } from "./render.js";
import {
  AppEvent,
  AppState,
  initialState,
  reduce,
  sessionConfig,
} from "./state.js";

export class App {
  state: AppState = initialState();
  private assistantsCache: import("./api.js").AssistantInfo[] = [];
  private inFlight = false;
  private queue: Promise<void> = Promise.resolve();

  constructor(
    readonly api: ApiClient,
    readonly mount: HTMLElement,
    readonly triggerDownload: (url: string) => void = (url) => {
      window.location.href = url;
    },
  ) {}

  dispatch(event: AppEvent): void {
    this.state = reduce(this.state, event);
    this.render();
  }

  render(): void {
    this.mount.replaceChildren(renderApp(this.state, this.handlers()));
  }

  /** Resolves once every queued service call has settled. */
  whenIdle(): Promise<void> {
    return this.queue;
  }

  private run(task: () => Promise<void>): void {
    if (this.inFlight) return; // no double submission on rapid clicks
    this.inFlight = true;
    this.dispatch({ kind: "request-started" });
    this.queue = this.queue
      .then(task)
      .catch((error: unknown) => {
        if (error instanceof ApiError && error.status === 409) {
          this.dispatch({ kind: "stale-choice" });
          return this.refresh();
        }
        const message = error instanceof Error ? error.message : String(error);
        this.dispatch({ kind: "request-failed", message });
      })
      .finally(() => {
        this.inFlight = false;
      });
  }

  private async refresh(): Promise<void> {
    if (this.state.screen !== "session") return;
    const resource = await this.api.getSession(this.state.resource.session_id);
    const notice = this.state.notice;
    this.dispatch({ kind: "session-updated", resource });
    if (notice && this.state.screen === "session") {
      this.state = { ...this.state, notice };
      this.render();
    }
  }

  async start(): Promise<void> {
    try {
      this.assistantsCache = await this.api.listAssistants();
      this.dispatch({ kind: "assistants-loaded", assistants: this.assistantsCache });
    } catch (error) {
      this.dispatch({
        kind: "load-failed",
        message: error instanceof Error ? error.message : String(error),
      });
    }
  }

  private handlers(): Handlers {
    return {
      pickAssistant: (id) => {
        const assistant = this.assistantsCache.find((a) => a.id === id);
        if (assistant) this.dispatch({ kind: "assistant-picked", assistant });
      },
      bindFile: (slot, file) => {
        this.dispatch({
          kind: "slot-bound",
          slot,
          binding: file ? { kind: "file", file } : null,
        });
      },
      bindPath: (slot, path) => {
        this.dispatch({
          kind: "slot-bound",
          slot,
          binding: path.trim() ? { kind: "path", path: path.trim() } : null,
        });
      },
      setGazetteer: (path) => this.dispatch({ kind: "gazetteer-set", path }),
      setColumn: (column) => this.dispatch({ kind: "column-set", column }),
      createSession: () => {
        if (this.state.screen !== "binding") return;
        const binding = this.state.binding;
        this.run(async () => {
          const bindings: Record<string, File | string> = {};
          for (const [slot, bound] of Object.entries(binding.slots)) {
            if (!bound) continue;
            bindings[slot] = bound.kind === "file" ? bound.file : bound.path;
          }
          const resource = await this.api.createSession(
            binding.assistant.id,
            bindings,
            sessionConfig(binding),
          );
          this.dispatch({ kind: "session-updated", resource });
        });
      },
      selectChoice: (index) => {
        if (this.state.screen !== "session") return;
        const sessionId = this.state.resource.session_id;
        this.run(async () => {
          const resource = await this.api.postChoice(sessionId, index);
          this.dispatch({ kind: "session-updated", resource });
        });
      },
      accept: () => {
        if (this.state.screen !== "session") return;
        const sessionId = this.state.resource.session_id;
        this.run(async () => {
          const resource = await this.api.accept(sessionId);
          this.dispatch({ kind: "session-updated", resource });
          const csv = await this.api.fetchResult(sessionId);
          this.dispatch({ kind: "result-loaded", csv });
        });
      },
      downloadResult: () => {
        if (this.state.screen !== "session") return;
        this.triggerDownload(this.api.resultUrl(this.state.resource.session_id));
      },
      restart: () => {
        this.dispatch({ kind: "restart", assistants: this.assistantsCache });
      },
    };
  }
}

export function boot(baseUrl = ""): App {
  const mount = document.getElementById("app");
  if (!mount) throw new Error("missing #app mount point");
  const app = new App(new ApiClient(baseUrl), mount);
  void app.start();
  return app;
}

declare global {
  interface Window {
    wrangleApp?: App;
  }
}

if (typeof window !== "undefined" && document.getElementById("app")) {
  window.wrangleApp = boot(
    new URLSearchParams(window.location.search).get("service") ?? "",
  );
}
