// View state derivation. The rendered view is a pure function of the last
// full session payload plus transient client flags (pending request, last
// outcome for the flash animation, toast queue). Reloading a page and
// re-deriving from GET /sessions/{id} therefore reconstructs the same view.

import type { HistoryEntry, PosteriorEntry, SessionPayload } from "./api.js";

export interface CellView {
  word: string;
  revealed: boolean;
  role: string | null; // only known for revealed cells while the game runs
}

export interface ViewState {
  sessionId: string;
  cells: CellView[];
  clue: string | null;
  status: string;
  turn: number;
  maxTurns: number;
  guessesRemaining: number;
  posterior: PosteriorEntry[];
  history: HistoryEntry[];
  gameOver: boolean;
}

export function viewFromSession(payload: SessionPayload): ViewState {
  const over = payload.status !== "ongoing";
  const cells: CellView[] = payload.board.words.map((word) => {
    const revealed = word in payload.board.revealed;
    let role: string | null = revealed ? (payload.board.revealed[word] ?? null) : null;
    if (over && payload.board.roles) {
      role = payload.board.roles[word] ?? null; // game over: everything shows
    }
    return { word, revealed, role };
  });
  return {
    sessionId: payload.id,
    cells,
    clue: over ? null : (payload.clue ?? null),
    status: payload.status,
    turn: payload.turn,
    maxTurns: payload.max_turns,
    guessesRemaining: over ? 0 : payload.target_count,
    posterior: payload.posterior,
    history: payload.history,
    gameOver: over,
  };
}

export function canGuess(view: ViewState, word: string): boolean {
  if (view.gameOver) return false;
  const cell = view.cells.find((c) => c.word === word);
  return cell !== undefined && !cell.revealed;
}

// Invariant guard used by tests and render: a live view must never know the
// role of an unrevealed cell.
export function leaksUnrevealedRoles(view: ViewState): boolean {
  if (view.gameOver) return false;
  return view.cells.some((c) => !c.revealed && c.role !== null);
}

export function statusBanner(view: ViewState): string {
  if (view.status === "won") return "You won! All goal words found.";
  if (view.status === "lost") return "Game over - you lost.";
  return `Turn ${view.turn + 1} of ${view.maxTurns}`;
}
