/** Browser entry point: bootstrap session, load defaults, mount the app. */

import { ApiClient } from "./api.js";
import { bootstrapSession, type StorageLike } from "./session.js";
import { SettingsState, type SettingsDefaults } from "./settings.js";
import { isStrategy } from "./types.js";
import { createApp } from "./ui.js";

function safeLocalStorage(): StorageLike | null {
  try {
    // Accessing window.localStorage itself can throw when storage is
    // disabled; treat that the same as it being absent.
    return window.localStorage;
  } catch {
    return null;
  }
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app mount point");
  }
  const api = new ApiClient("", (input, init) => window.fetch(input, init));
  const sessionId = bootstrapSession(safeLocalStorage());

  // The panel starts from the server's own configuration; if stats are not
  // reachable yet (engine still loading), fall back to the documented
  // engine defaults and let the server correct any override it rejects.
  let defaults: SettingsDefaults = { strategy: "lev", threshold: 0.5 };
  let statsLine: string | undefined;
  try {
    const stats = await api.stats();
    if (isStrategy(stats.strategy)) {
      defaults = { strategy: stats.strategy, threshold: stats.threshold };
    }
    statsLine = `${stats.corpus_lines} lines · ${stats.learned_pairs} learned`;
  } catch {
    // Keep fallbacks.
  }

  const settings = new SettingsState(defaults);
  const app = createApp(root, { api, sessionId, settings, statsLine });
  app.elements.input.focus();
}

void boot();
