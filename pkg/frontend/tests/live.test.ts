// Scripted browser run against the real session service: create a game
// through the form, click words to guess, verify the rendered posterior
// equals GET /posterior after every turn, and check that a page reload
// (fresh mount from the session id) reconstructs the identical view.

import { beforeEach, describe, expect, it } from "vitest";

(globalThis as Record<string, unknown>).__DUETBENCH_TEST__ = true;

import { mount, type App } from "../src/main.js";
import {
  avoidWord,
  boardSnapshot,
  installPage,
  renderedPosterior,
  safeWords,
  waitFor,
  waitForIdle,
} from "./helpers.js";

const SERVICE_URL = "http://127.0.0.1:8642";

function startApp(): App {
  installPage();
  return mount(document, SERVICE_URL);
}

async function createGame(app: App, seed: number): Promise<void> {
  const form = document.querySelector<HTMLFormElement>("#setup-form")!;
  form.querySelector<HTMLInputElement>("[name=cultures]")!.value = "a,b";
  form.querySelector<HTMLInputElement>("[name=seed]")!.value = String(seed);
  form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
  await waitForIdle(app);
}

function clickCell(word: string): void {
  const cell = document.querySelector<HTMLButtonElement>(
    `#board .cell[data-word="${word}"]`,
  );
  if (!cell) throw new Error(`no cell for ${word}`);
  cell.click();
}

beforeEach(() => {
  window.location.hash = "";
});

describe("live session", () => {
  it("plays five guesses with the rendered posterior tracking the service", async () => {
    const app = startApp();
    await createGame(app, 11);
    const id = app.state!.sessionId;
    expect(document.querySelector("#clue")!.textContent).toContain("Clue:");

    // five known non-avoid words: the game is still running afterwards
    const words = safeWords(11, 5);
    expect(words).toHaveLength(5);

    for (const word of words) {
      clickCell(word);
      await waitForIdle(app);
      const fromService = (await (
        await fetch(`${SERVICE_URL}/sessions/${id}/posterior`)
      ).json()) as { posterior: { culture: string; weight: number }[] };
      const rendered = renderedPosterior();
      expect(rendered.map((p) => p.culture)).toEqual(
        fromService.posterior.map((p) => p.culture),
      );
      for (let i = 0; i < rendered.length; i++) {
        expect(rendered[i]!.weight).toBe(fromService.posterior[i]!.weight);
      }
      const sum = rendered.reduce((acc, p) => acc + p.weight, 0);
      expect(sum).toBeCloseTo(1.0, 9);
    }

    expect(app.state!.history).toHaveLength(5);
    expect(document.querySelectorAll("#history .history-row")).toHaveLength(5);
    expect(app.state!.status).toBe("ongoing");
  });

  it("reconstructs the identical view after a reload", async () => {
    const app = startApp();
    await createGame(app, 12);
    const id = app.state!.sessionId;
    for (const word of safeWords(12, 5)) {
      clickCell(word);
      await waitForIdle(app);
    }
    const before = {
      board: boardSnapshot(),
      posterior: document.querySelector("#posterior")!.innerHTML,
      history: document.querySelector("#history")!.innerHTML,
      banner: document.querySelector("#banner")!.textContent,
      clue: document.querySelector("#clue")!.textContent,
    };

    // simulate a reload: fresh DOM, mount from the session id in the hash
    window.location.hash = `session=${id}`;
    const reborn = startApp();
    await waitForIdle(reborn);
    expect(boardSnapshot()).toBe(before.board);
    expect(document.querySelector("#posterior")!.innerHTML).toBe(before.posterior);
    expect(document.querySelector("#history")!.innerHTML).toBe(before.history);
    expect(document.querySelector("#banner")!.textContent).toBe(before.banner);
    expect(document.querySelector("#clue")!.textContent).toBe(before.clue);
  });

  it("sends no request when a revealed cell is clicked", async () => {
    const app = startApp();
    await createGame(app, 13);
    const word = safeWords(13, 1)[0]!;
    clickCell(word);
    await waitForIdle(app);
    expect(app.state!.cells.find((c) => c.word === word)!.revealed).toBe(true);

    const realFetch = globalThis.fetch;
    let calls = 0;
    globalThis.fetch = ((...args: Parameters<typeof fetch>) => {
      calls += 1;
      return realFetch(...args);
    }) as typeof fetch;
    try {
      clickCell(word);
      await new Promise((resolve) => setTimeout(resolve, 100));
      expect(calls).toBe(0);
    } finally {
      globalThis.fetch = realFetch;
    }
  });

  it("reveals all roles and disables input after a loss", async () => {
    const app = startApp();
    await createGame(app, 14);
    clickCell(avoidWord(14));
    await waitForIdle(app);
    expect(app.state!.status).toBe("lost");
    const cells = Array.from(
      document.querySelectorAll<HTMLButtonElement>("#board .cell"),
    );
    expect(cells.every((c) => c.disabled)).toBe(true);
    expect(cells.every((c) => c.dataset.role)).toBe(true);
    expect(document.querySelector("#banner")!.textContent).toMatch(/lost/);
    expect(document.querySelector("#clue")!.textContent).toBe("");
  });

  it("shows a toast instead of breaking on a service error", async () => {
    const app = startApp();
    window.location.hash = "session=doesnotexist1234";
    const ghost = mount(document, SERVICE_URL);
    await waitFor(() => document.querySelectorAll("#toasts .toast").length > 0);
    expect(document.querySelector("#toasts .toast")!.textContent).toMatch(
      /unknown session/,
    );
    void app;
    void ghost;
  });
});
