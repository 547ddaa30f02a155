import { JSDOM } from "jsdom";
import { describe, expect, it } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";
import { SettingsState } from "../src/settings.js";
import { botMessage, errorNote, userMessage } from "../src/types.js";
import { createApp, renderEntry, type App } from "../src/ui.js";

const CHAT_BODY = {
  reply: "hi how are you",
  provenance: "corpus",
  matched_line: "hello there",
  score: 0.0,
  strategy: "lev",
  latency_ms: 1.5,
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

interface Harness {
  app: App;
  dom: JSDOM;
  urls: string[];
  submit(text?: string): void;
}

function makeHarness(fetchFn: FetchLike): Harness {
  const dom = new JSDOM('<!doctype html><html><body><div id="app"></div></body></html>');
  const root = dom.window.document.getElementById("app");
  if (!root) {
    throw new Error("missing root");
  }
  const urls: string[] = [];
  const recording: FetchLike = (url, init) => {
    urls.push(url);
    return fetchFn(url, init);
  };
  const app = createApp(root, {
    api: new ApiClient("http://svc.test", recording),
    sessionId: "test-session",
    settings: new SettingsState({ strategy: "lev", threshold: 0.5 }),
    now: () => 1234,
  });
  const submit = (text?: string): void => {
    if (text !== undefined) {
      app.elements.input.value = text;
    }
    app.elements.form.dispatchEvent(
      new dom.window.Event("submit", { cancelable: true }),
    );
  };
  return { app, dom, urls, submit };
}

function bubbles(app: App): HTMLElement[] {
  return Array.from(app.elements.transcriptEl.children) as HTMLElement[];
}

describe("renderEntry", () => {
  const doc = new JSDOM("<!doctype html><body></body>").window.document;

  it("shows the provenance badge verbatim on bot messages", () => {
    const el = renderEntry(
      doc,
      botMessage(CHAT_BODY, 1),
    );
    expect(el.className).toBe("bubble bot");
    expect(el.querySelector(".text")?.textContent).toBe("hi how are you");
    expect(el.querySelector(".badge.provenance")?.textContent).toBe("corpus");
    expect(el.querySelector(".badge.strategy")?.textContent).toBe("lev");
    expect(el.querySelector(".match")?.textContent).toBe(
      "matched “hello there” (d=0.000)",
    );
  });

  it("omits match details the server did not send", () => {
    const el = renderEntry(
      doc,
      botMessage({ ...CHAT_BODY, matched_line: null, score: null }, 1),
    );
    expect(el.querySelector(".badge.provenance")).not.toBeNull();
    expect(el.querySelector(".match")).toBeNull();
  });

  it("renders user messages without badges", () => {
    const el = renderEntry(doc, userMessage("hello", 1));
    expect(el.className).toBe("bubble user");
    expect(el.querySelector(".meta")).toBeNull();
  });

  it("renders error notes as a distinct bubble", () => {
    const el = renderEntry(doc, errorNote("boom", 1));
    expect(el.className).toBe("bubble error");
    expect(el.textContent).toBe("boom");
  });
});

describe("send flow", () => {
  it("appends a user and a bot bubble and clears the input", async () => {
    const h = makeHarness(() => Promise.resolve(jsonResponse(CHAT_BODY)));
    h.submit("hello there");
    await h.app.whenIdle();
    const rendered = bubbles(h.app);
    expect(rendered).toHaveLength(2);
    expect(rendered[0]?.className).toBe("bubble user");
    expect(rendered[1]?.className).toBe("bubble bot");
    expect(rendered[1]?.querySelector(".text")?.textContent).toBe(
      "hi how are you",
    );
    expect(h.app.elements.input.value).toBe("");
    expect(h.app.elements.sendButton.disabled).toBe(false);
  });

  it("sends nothing for blank input", async () => {
    const h = makeHarness(() => Promise.resolve(jsonResponse(CHAT_BODY)));
    h.submit("   ");
    await h.app.whenIdle();
    expect(h.urls).toHaveLength(0);
    expect(bubbles(h.app)).toHaveLength(0);
  });

  it("allows one in-flight request at a time", async () => {
    let release: (() => void) | undefined;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const h = makeHarness(async () => {
      await gate;
      return jsonResponse(CHAT_BODY);
    });
    h.submit("first");
    expect(h.app.elements.sendButton.disabled).toBe(true);
    h.submit("second");
    expect(h.urls).toHaveLength(1);
    expect(bubbles(h.app)).toHaveLength(1);
    release?.();
    await h.app.whenIdle();
    expect(h.app.elements.sendButton.disabled).toBe(false);
    expect(bubbles(h.app)).toHaveLength(2);
  });

  it("shows an inline error bubble and preserves the input on failure", async () => {
    let failing = true;
    const h = makeHarness(() =>
      Promise.resolve(
        failing ? jsonResponse({ error: "internal" }, 500) : jsonResponse(CHAT_BODY),
      ),
    );
    h.submit("hello there");
    await h.app.whenIdle();
    let rendered = bubbles(h.app);
    expect(rendered).toHaveLength(2);
    expect(rendered[1]?.className).toBe("bubble error");
    expect(rendered[1]?.textContent).toContain("500");
    expect(h.app.elements.input.value).toBe("hello there");
    expect(h.app.elements.sendButton.disabled).toBe(false);

    failing = false;
    h.submit();
    await h.app.whenIdle();
    rendered = bubbles(h.app);
    expect(rendered).toHaveLength(4);
    expect(rendered[3]?.className).toBe("bubble bot");
  });

  it("reports an unreachable server and preserves the input", async () => {
    const h = makeHarness(() => Promise.reject(new TypeError("refused")));
    h.submit("are you there");
    await h.app.whenIdle();
    const rendered = bubbles(h.app);
    expect(rendered[1]?.className).toBe("bubble error");
    expect(rendered[1]?.textContent).toContain("unreachable");
    expect(h.app.elements.input.value).toBe("are you there");
  });
});

describe("settings panel", () => {
  it("starts from the provided defaults", () => {
    const h = makeHarness(() => Promise.resolve(jsonResponse(CHAT_BODY)));
    expect(h.app.elements.strategySelect.value).toBe("lev");
    expect(h.app.elements.thresholdInput.value).toBe("0.5");
  });

  it("sends no overrides until a control is touched", async () => {
    const h = makeHarness(() => Promise.resolve(jsonResponse(CHAT_BODY)));
    h.submit("hello");
    await h.app.whenIdle();
    expect(h.urls[0]).toBe("http://svc.test/api/chat");
  });

  it("applies a strategy change from the next turn", async () => {
    const h = makeHarness(() => Promise.resolve(jsonResponse(CHAT_BODY)));
    h.submit("hello");
    await h.app.whenIdle();
    h.app.elements.strategySelect.value = "bow-l1";
    h.app.elements.strategySelect.dispatchEvent(new h.dom.window.Event("change"));
    h.submit("hello again");
    await h.app.whenIdle();
    expect(h.urls[0]).not.toContain("strategy=");
    const second = new URL(String(h.urls[1]));
    expect(second.searchParams.get("strategy")).toBe("bow-l1");
  });

  it("applies a threshold change and rejects junk input", async () => {
    const h = makeHarness(() => Promise.resolve(jsonResponse(CHAT_BODY)));
    h.app.elements.thresholdInput.value = "0.2";
    h.app.elements.thresholdInput.dispatchEvent(new h.dom.window.Event("change"));
    h.app.elements.thresholdInput.value = "";
    h.app.elements.thresholdInput.dispatchEvent(new h.dom.window.Event("change"));
    expect(h.app.elements.thresholdInput.value).toBe("0.2");
    h.submit("hello");
    await h.app.whenIdle();
    const url = new URL(String(h.urls[0]));
    expect(url.searchParams.get("threshold")).toBe("0.2");
  });
});
