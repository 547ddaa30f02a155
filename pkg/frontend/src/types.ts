/** Shared types for the chat client. */

export const STRATEGIES = ["lev", "bow-l1", "bow-l2"] as const;

export type Strategy = (typeof STRATEGIES)[number];

export function isStrategy(value: string): value is Strategy {
  return (STRATEGIES as readonly string[]).includes(value);
}

/**
 * One rendered chat bubble. Bot messages always carry `provenance`; the
 * remaining optional fields are present whenever the server reported them.
 */
export interface MessageView {
  kind: "message";
  speaker: "user" | "bot";
  text: string;
  provenance?: string;
  matched_line?: string;
  score?: number;
  strategy?: string;
  /** Client-side timestamp (milliseconds since epoch). */
  ts: number;
}

/** An inline failure notice; not a bot message, so no provenance badge. */
export interface ErrorNote {
  kind: "error";
  text: string;
  ts: number;
}

export type TranscriptEntry = MessageView | ErrorNote;

/** Body of a successful POST /api/chat response. */
export interface ChatResponse {
  reply: string;
  provenance: string;
  matched_line: string | null;
  score: number | null;
  strategy: string;
  latency_ms: number;
}

/** Body of GET /api/stats. */
export interface StatsResponse {
  corpus_lines: number;
  learned_pairs: number;
  episodes: number;
  strategy: string;
  threshold: number;
}

/** Build the bot-side MessageView for a chat response. */
export function botMessage(response: ChatResponse, ts: number): MessageView {
  const view: MessageView = {
    kind: "message",
    speaker: "bot",
    text: response.reply,
    provenance: response.provenance,
    strategy: response.strategy,
    ts,
  };
  if (response.matched_line !== null) {
    view.matched_line = response.matched_line;
  }
  if (response.score !== null) {
    view.score = response.score;
  }
  return view;
}

export function userMessage(text: string, ts: number): MessageView {
  return { kind: "message", speaker: "user", text, ts };
}

export function errorNote(text: string, ts: number): ErrorNote {
  return { kind: "error", text, ts };
}
