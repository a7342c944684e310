// DOM rendering: replaces the contents of fixed containers from a ViewState.
// No incremental bookkeeping; the whole view re-renders from scratch so the
// display cannot drift from the state.

import type { PosteriorEntry } from "./api.js";
import { statusBanner, type ViewState } from "./state.js";

export interface RenderTargets {
  board: HTMLElement;
  clue: HTMLElement;
  banner: HTMLElement;
  posterior: HTMLElement;
  history: HTMLElement;
}

export function renderView(
  t: RenderTargets,
  view: ViewState,
  pending: boolean,
  lastGuess: string | null,
): void {
  renderBoard(t.board, view, pending, lastGuess);
  t.clue.textContent = view.clue
    ? `Clue: ${view.clue} (${view.guessesRemaining} target)`
    : "";
  t.banner.textContent = statusBanner(view);
  t.banner.dataset.status = view.status;
  renderPosterior(t.posterior, view.posterior);
  renderHistory(t.history, view);
}

function renderBoard(
  root: HTMLElement,
  view: ViewState,
  pending: boolean,
  lastGuess: string | null,
): void {
  root.textContent = "";
  for (const cell of view.cells) {
    const el = document.createElement("button");
    el.className = "cell";
    el.dataset.word = cell.word;
    el.textContent = cell.word;
    if (cell.revealed) {
      el.classList.add("revealed");
      el.disabled = true;
    }
    if (cell.role) {
      el.classList.add(`role-${cell.role}`);
      el.dataset.role = cell.role;
    }
    if (view.gameOver || pending) el.disabled = true;
    if (cell.word === lastGuess) el.classList.add("flash");
    root.appendChild(el);
  }
}

export function renderPosterior(root: HTMLElement, posterior: PosteriorEntry[]): void {
  root.textContent = "";
  for (const entry of posterior) {
    const row = document.createElement("div");
    row.className = "belief-row";

    const label = document.createElement("span");
    label.className = "belief-label";
    label.textContent = entry.culture;

    const track = document.createElement("div");
    track.className = "belief-track";
    const bar = document.createElement("div");
    bar.className = "belief-bar";
    bar.dataset.culture = entry.culture;
    bar.dataset.weight = String(entry.weight);
    bar.style.width = `${(entry.weight * 100).toFixed(2)}%`;
    track.appendChild(bar);

    const value = document.createElement("span");
    value.className = "belief-value";
    value.textContent = `${(entry.weight * 100).toFixed(1)}%`;

    row.append(label, track, value);
    root.appendChild(row);
  }
}

function renderHistory(root: HTMLElement, view: ViewState): void {
  root.textContent = "";
  view.history.forEach((entry, i) => {
    const row = document.createElement("li");
    row.className = `history-row outcome-${entry.outcome}`;
    const belief = entry.posterior
      .map((p) => `${p.culture} ${(p.weight * 100).toFixed(0)}%`)
      .join(" / ");
    row.textContent = `${i + 1}. clue "${entry.clue}" -> ${entry.guess} (${entry.outcome}) · belief ${belief}`;
    root.appendChild(row);
  });
}

export function showToast(container: HTMLElement, message: string): void {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.textContent = message;
  container.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}
