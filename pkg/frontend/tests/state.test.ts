import { describe, expect, it } from "vitest";

import { TranscriptState } from "../src/state.js";
import { errorNote, userMessage } from "../src/types.js";

describe("TranscriptState", () => {
  it("keeps entries in strict arrival order", () => {
    const state = new TranscriptState();
    state.append(userMessage("one", 1));
    state.append(errorNote("boom", 2));
    state.append(userMessage("two", 3));
    expect(state.entries.map((e) => e.text)).toEqual(["one", "boom", "two"]);
  });

  it("freezes appended entries", () => {
    const state = new TranscriptState();
    state.append(userMessage("hello", 1));
    const entry = state.entries[0];
    expect(entry).toBeDefined();
    expect(() => {
      (entry as { text: string }).text = "mutated";
    }).toThrow(TypeError);
  });

  it("exposes no way to remove or reorder", () => {
    const state = new TranscriptState();
    const names = [
      ...Object.getOwnPropertyNames(TranscriptState.prototype),
    ].filter((n) => n !== "constructor");
    expect(names.sort()).toEqual(["append", "entries", "subscribe"].sort());
    expect(state.entries).toHaveLength(0);
  });

  it("notifies subscribers on every append until unsubscribed", () => {
    const state = new TranscriptState();
    let calls = 0;
    const stop = state.subscribe(() => {
      calls += 1;
    });
    state.append(userMessage("a", 1));
    state.append(userMessage("b", 2));
    expect(calls).toBe(2);
    stop();
    state.append(userMessage("c", 3));
    expect(calls).toBe(2);
  });
});
