// Typed client for the duetbench session service. The UI talks to the
// service exclusively through these calls and renders whatever comes back;
// no game logic lives in the browser.

export interface PosteriorEntry {
  culture: string;
  weight: number; // normalized share, sums to 1 across cultures
  raw: number; // smoothed likelihood as maintained by the giver
}

export interface BoardPayload {
  words: string[];
  revealed: Record<string, string>;
  roles?: Record<string, string>; // present only once the game is over
}

export interface HistoryEntry {
  clue: string;
  guess: string;
  outcome: string;
  posterior: PosteriorEntry[];
}

export interface SessionPayload {
  id: string;
  board: BoardPayload;
  status: string;
  turn: number;
  max_turns: number;
  target_count: number;
  posterior: PosteriorEntry[];
  history: HistoryEntry[];
  clue?: string;
}

export interface CreateResponse {
  id: string;
  board: BoardPayload;
  clue: string;
  target_count: number;
  status: string;
  posterior: PosteriorEntry[];
}

export interface GuessResponse {
  outcome: string;
  status: string;
  next_clue?: string;
  posterior: PosteriorEntry[];
  board?: BoardPayload;
}

export interface CreateParams {
  cultures: string[];
  alpha: number;
  delta: number;
  beta: number;
  seed: number;
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(detail, resp.status);
  }
  if (resp.status === 204) return undefined as T;
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  createSession(params: CreateParams): Promise<CreateResponse> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        cultures: params.cultures,
        rsa: { alpha: params.alpha, delta: params.delta },
        beta: params.beta,
        seed: params.seed,
      }),
    });
  }

  getSession(id: string): Promise<SessionPayload> {
    return request(`${this.baseUrl}/sessions/${id}`);
  }

  guess(id: string, word: string): Promise<GuessResponse> {
    return request(`${this.baseUrl}/sessions/${id}/guess`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ word }),
    });
  }

  getPosterior(id: string): Promise<{ posterior: PosteriorEntry[] }> {
    return request(`${this.baseUrl}/sessions/${id}/posterior`);
  }

  deleteSession(id: string): Promise<void> {
    return request(`${this.baseUrl}/sessions/${id}`, { method: "DELETE" });
  }
}
