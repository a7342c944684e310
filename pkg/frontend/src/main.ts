// Application wiring: create-session form, click-to-guess, posterior chart,
// history panel. After every server interaction the client re-fetches the
// full session and re-renders from that single payload, so the view is
// always reconstructible (and a reload with #session=<id> restores it).

import { ApiClient, type CreateParams } from "./api.js";
import { renderView, showToast, type RenderTargets } from "./render.js";
import { canGuess, viewFromSession, type ViewState } from "./state.js";

interface AppElements extends RenderTargets {
  form: HTMLFormElement;
  setup: HTMLElement;
  game: HTMLElement;
  toasts: HTMLElement;
}

export class App {
  private view: ViewState | null = null;
  private pending = false;
  private lastGuess: string | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly el: AppElements,
  ) {
    el.form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.createFromForm();
    });
    el.board.addEventListener("click", (ev) => {
      const target = ev.target as HTMLElement | null;
      const word = target?.dataset?.word;
      if (word) void this.guess(word);
    });
  }

  get state(): ViewState | null {
    return this.view;
  }

  get isPending(): boolean {
    return this.pending;
  }

  async createFromForm(): Promise<void> {
    const data = new FormData(this.el.form);
    const params: CreateParams = {
      cultures: String(data.get("cultures") ?? "")
        .split(",")
        .map((s) => s.trim())
        .filter(Boolean),
      alpha: Number(data.get("alpha") ?? 0.5),
      delta: Number(data.get("delta") ?? 0.1),
      beta: Number(data.get("beta") ?? 0.5),
      seed: Number(data.get("seed") ?? 0),
    };
    await this.withPending(async () => {
      const created = await this.api.createSession(params);
      window.location.hash = `session=${created.id}`;
      await this.refresh(created.id);
    });
  }

  /** Load an existing session (used on page load when the hash has an id). */
  async resume(sessionId: string): Promise<void> {
    await this.withPending(() => this.refresh(sessionId));
  }

  async guess(word: string): Promise<void> {
    if (this.pending || !this.view) return;
    if (!canGuess(this.view, word)) return; // revealed or terminal: no request
    await this.withPending(async () => {
      if (!this.view) return;
      this.lastGuess = word;
      await this.api.guess(this.view.sessionId, word);
      await this.refresh(this.view.sessionId);
    });
  }

  private async refresh(sessionId: string): Promise<void> {
    const payload = await this.api.getSession(sessionId);
    this.view = viewFromSession(payload);
  }

  private async withPending(fn: () => Promise<void>): Promise<void> {
    if (this.pending) return;
    this.pending = true;
    this.render();
    try {
      await fn();
    } catch (err) {
      showToast(this.el.toasts, err instanceof Error ? err.message : String(err));
    } finally {
      this.pending = false;
      this.render();
    }
  }

  render(): void {
    if (!this.view) {
      this.el.setup.hidden = false;
      this.el.game.hidden = true;
      return;
    }
    this.el.setup.hidden = true;
    this.el.game.hidden = false;
    renderView(this.el, this.view, this.pending, this.lastGuess);
  }
}

export function defaultBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? `${window.location.protocol}//${window.location.host}`;
}

export function sessionIdFromHash(): string | null {
  const match = window.location.hash.match(/session=([A-Za-z0-9]+)/);
  return match?.[1] ?? null;
}

export function mount(document: Document, baseUrl?: string): App {
  const byId = (id: string): HTMLElement => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el;
  };
  const app = new App(new ApiClient(baseUrl ?? defaultBaseUrl()), {
    form: byId("setup-form") as HTMLFormElement,
    setup: byId("setup"),
    game: byId("game"),
    board: byId("board"),
    clue: byId("clue"),
    banner: byId("banner"),
    posterior: byId("posterior"),
    history: byId("history"),
    toasts: byId("toasts"),
  });
  app.render();
  const existing = sessionIdFromHash();
  if (existing) void app.resume(existing);
  return app;
}

declare global {
  interface Window {
    duetbenchApp?: App;
  }
}

if (typeof window !== "undefined" && !("__DUETBENCH_TEST__" in globalThis)) {
  window.addEventListener("DOMContentLoaded", () => {
    window.duetbenchApp = mount(document);
  });
}
