/** Append-only transcript state with change notification. */

import type { TranscriptEntry } from "./types.js";

export type Listener = () => void;

/**
 * The transcript only ever grows: entries are frozen on append and there is
 * no way to remove or reorder them, so views rendered from it keep strict
 * arrival order.
 */
export class TranscriptState {
  private readonly items: TranscriptEntry[] = [];
  private readonly listeners = new Set<Listener>();

  get entries(): readonly TranscriptEntry[] {
    return this.items;
  }

  append(entry: TranscriptEntry): void {
    this.items.push(Object.freeze(entry));
    for (const listener of this.listeners) {
      listener();
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }
}
