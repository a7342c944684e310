import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { App } from "../src/main.js";

const here = dirname(fileURLToPath(import.meta.url));

/** Install the page markup from the real index.html into the test DOM. */
export function installPage(): void {
  const html = readFileSync(join(here, "..", "index.html"), "utf-8");
  const body = html.match(/<body>([\s\S]*)<\/body>/);
  if (!body) throw new Error("index.html has no body");
  document.body.innerHTML = body[1]!;
}

export async function waitFor(
  predicate: () => boolean,
  timeoutMs = 10000,
): Promise<void> {
  const start = Date.now();
  while (!predicate()) {
    if (Date.now() - start > timeoutMs) throw new Error("waitFor timed out");
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

export async function waitForIdle(app: App): Promise<void> {
  await waitFor(() => !app.isPending && app.state !== null);
}

/** Stable serialization of the board for reload-equivalence comparison
 * (ignores the transient last-guess flash animation class). */
export function boardSnapshot(): string {
  return Array.from(document.querySelectorAll<HTMLButtonElement>("#board .cell"))
    .map((el) => {
      const classes = Array.from(el.classList)
        .filter((c) => c !== "flash")
        .sort()
        .join(".");
      return `${el.dataset.word}|${classes}|${el.disabled ? 1 : 0}|${el.dataset.role ?? ""}`;
    })
    .join("\n");
}

export function renderedPosterior(): { culture: string; weight: number }[] {
  return Array.from(
    document.querySelectorAll<HTMLElement>("#posterior .belief-bar"),
  ).map((el) => ({
    culture: el.dataset.culture ?? "",
    weight: Number(el.dataset.weight),
  }));
}

interface BoardDump {
  words: string[];
  roles: Record<string, string>;
}

/** Ground-truth boards for the seeds the tests play, produced during global
 * setup by the same deterministic generator the service uses. */
export function boardForSeed(seed: number): BoardDump {
  const dump = JSON.parse(
    readFileSync(join(here, ".boards.json"), "utf-8"),
  ) as Record<string, BoardDump>;
  const board = dump[String(seed)];
  if (!board) throw new Error(`no dumped board for seed ${seed}`);
  return board;
}

export function safeWords(seed: number, count: number): string[] {
  const board = boardForSeed(seed);
  return board.words.filter((w) => board.roles[w] !== "avoid").slice(0, count);
}

export function avoidWord(seed: number): string {
  const board = boardForSeed(seed);
  const word = board.words.find((w) => board.roles[w] === "avoid");
  if (!word) throw new Error("board has no avoid word");
  return word;
}
