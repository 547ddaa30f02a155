/** DOM layer: builds the page, renders transcript entries, wires events. */

import { ApiClient, ApiError } from "./api.js";
import { SettingsState } from "./settings.js";
import { TranscriptState } from "./state.js";
import {
  STRATEGIES,
  botMessage,
  errorNote,
  isStrategy,
  userMessage,
  type TranscriptEntry,
} from "./types.js";

export interface AppDeps {
  api: ApiClient;
  sessionId: string;
  settings: SettingsState;
  /** Summary line for the header, e.g. "500 lines · 2 learned". */
  statsLine?: string;
  /** Clock override for tests. */
  now?: () => number;
}

export interface AppElements {
  transcriptEl: HTMLElement;
  form: HTMLFormElement;
  input: HTMLInputElement;
  sendButton: HTMLButtonElement;
  strategySelect: HTMLSelectElement;
  thresholdInput: HTMLInputElement;
}

export interface App {
  transcript: TranscriptState;
  elements: AppElements;
  /** Resolves once the in-flight request (if any) has settled. */
  whenIdle(): Promise<void>;
}

/** Render one transcript entry as a chat bubble. */
export function renderEntry(doc: Document, entry: TranscriptEntry): HTMLElement {
  const bubble = doc.createElement("div");
  if (entry.kind === "error") {
    bubble.className = "bubble error";
    const text = doc.createElement("p");
    text.className = "text";
    text.textContent = entry.text;
    bubble.appendChild(text);
    return bubble;
  }

  bubble.className = `bubble ${entry.speaker}`;
  const text = doc.createElement("p");
  text.className = "text";
  text.textContent = entry.text;
  bubble.appendChild(text);

  if (entry.speaker === "bot") {
    const meta = doc.createElement("div");
    meta.className = "meta";
    const provenance = doc.createElement("span");
    provenance.className = "badge provenance";
    provenance.textContent = entry.provenance ?? "";
    meta.appendChild(provenance);
    if (entry.strategy !== undefined) {
      const strategy = doc.createElement("span");
      strategy.className = "badge strategy";
      strategy.textContent = entry.strategy;
      meta.appendChild(strategy);
    }
    if (entry.matched_line !== undefined) {
      const match = doc.createElement("span");
      match.className = "match";
      const score =
        entry.score !== undefined ? ` (d=${entry.score.toFixed(3)})` : "";
      match.textContent = `matched “${entry.matched_line}”${score}`;
      meta.appendChild(match);
    }
    bubble.appendChild(meta);
  }
  return bubble;
}

/** Build the full interface under `root` and return handles for driving it. */
export function createApp(root: HTMLElement, deps: AppDeps): App {
  const doc = root.ownerDocument;
  const now = deps.now ?? (() => Date.now());
  const transcript = new TranscriptState();

  root.innerHTML = "";
  const shell = doc.createElement("div");
  shell.className = "chat-app";
  root.appendChild(shell);

  const header = doc.createElement("header");
  const title = doc.createElement("h1");
  title.textContent = "nextline";
  header.appendChild(title);
  const headerInfo = doc.createElement("p");
  headerInfo.className = "header-info";
  const sessionLabel = `session ${deps.sessionId.slice(0, 8)}`;
  headerInfo.textContent = deps.statsLine
    ? `${deps.statsLine} · ${sessionLabel}`
    : sessionLabel;
  header.appendChild(headerInfo);
  shell.appendChild(header);

  const settingsRow = doc.createElement("section");
  settingsRow.className = "settings";

  const strategyLabel = doc.createElement("label");
  strategyLabel.textContent = "strategy ";
  const strategySelect = doc.createElement("select");
  strategySelect.className = "strategy-select";
  for (const name of STRATEGIES) {
    const option = doc.createElement("option");
    option.value = name;
    option.textContent = name;
    strategySelect.appendChild(option);
  }
  strategySelect.value = deps.settings.strategy;
  strategyLabel.appendChild(strategySelect);
  settingsRow.appendChild(strategyLabel);

  const thresholdLabel = doc.createElement("label");
  thresholdLabel.textContent = "threshold ";
  const thresholdInput = doc.createElement("input");
  thresholdInput.className = "threshold-input";
  thresholdInput.type = "number";
  thresholdInput.min = "0";
  thresholdInput.max = "2";
  thresholdInput.step = "0.05";
  thresholdInput.value = String(deps.settings.threshold);
  thresholdLabel.appendChild(thresholdInput);
  settingsRow.appendChild(thresholdLabel);
  shell.appendChild(settingsRow);

  const transcriptEl = doc.createElement("main");
  transcriptEl.className = "transcript";
  transcriptEl.setAttribute("aria-live", "polite");
  shell.appendChild(transcriptEl);

  const form = doc.createElement("form");
  form.className = "composer";
  const input = doc.createElement("input");
  input.className = "message-input";
  input.type = "text";
  input.placeholder = "Say something…";
  input.autocomplete = "off";
  form.appendChild(input);
  const sendButton = doc.createElement("button");
  sendButton.className = "send-button";
  sendButton.type = "submit";
  sendButton.textContent = "Send";
  form.appendChild(sendButton);
  shell.appendChild(form);

  // Render incrementally: each notification appends only the new entries,
  // so the DOM mirrors the transcript's append-only contract.
  let renderedCount = 0;
  transcript.subscribe(() => {
    const entries = transcript.entries;
    while (renderedCount < entries.length) {
      const entry = entries[renderedCount];
      if (entry !== undefined) {
        transcriptEl.appendChild(renderEntry(doc, entry));
      }
      renderedCount += 1;
    }
    transcriptEl.scrollTop = transcriptEl.scrollHeight;
  });

  strategySelect.addEventListener("change", () => {
    const value = strategySelect.value;
    if (isStrategy(value)) {
      deps.settings.setStrategy(value);
    }
  });

  thresholdInput.addEventListener("change", () => {
    const raw = thresholdInput.value.trim();
    deps.settings.setThreshold(raw === "" ? Number.NaN : Number(raw));
    // Echo the accepted value back so the box never shows a rejected one.
    thresholdInput.value = String(deps.settings.threshold);
  });

  let pending: Promise<void> | null = null;

  async function send(text: string): Promise<void> {
    transcript.append(userMessage(text, now()));
    try {
      const response = await deps.api.chat(
        deps.sessionId,
        text,
        deps.settings.overrides(),
      );
      transcript.append(botMessage(response, now()));
    } catch (err) {
      const message =
        err instanceof ApiError ? err.message : "unexpected client error";
      transcript.append(errorNote(message, now()));
      // Leave the text available for retry, unless the user typed on.
      if (input.value === "") {
        input.value = text;
      }
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (text === "" || pending !== null) {
      return; // Blank input sends nothing; one request in flight at a time.
    }
    input.value = "";
    sendButton.disabled = true;
    pending = send(text).finally(() => {
      pending = null;
      sendButton.disabled = false;
    });
  });

  return {
    transcript,
    elements: {
      transcriptEl,
      form,
      input,
      sendButton,
      strategySelect,
      thresholdInput,
    },
    whenIdle: () => pending ?? Promise.resolve(),
  };
}
