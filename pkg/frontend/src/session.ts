/** Session identity: one random id per browser, persisted across reloads. */

export const SESSION_KEY = "nextline.session";

/** The subset of the Web Storage API the bootstrap needs. */
export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export function randomSessionId(): string {
  const cryptoObj = globalThis.crypto;
  if (cryptoObj && typeof cryptoObj.randomUUID === "function") {
    return cryptoObj.randomUUID();
  }
  // Fallback for environments without Web Crypto: 32 random hex digits.
  let id = "";
  for (let i = 0; i < 4; i += 1) {
    id += Math.floor(Math.random() * 0x10000_0000)
      .toString(16)
      .padStart(8, "0");
  }
  return id;
}

/**
 * Return the persisted session id, creating one on first visit. A missing
 * or broken storage (private browsing, quota, disabled cookies) degrades to
 * a fresh ephemeral id rather than an error.
 */
export function bootstrapSession(storage: StorageLike | null | undefined): string {
  if (!storage) {
    return randomSessionId();
  }
  try {
    const existing = storage.getItem(SESSION_KEY);
    if (existing) {
      return existing;
    }
    const id = randomSessionId();
    storage.setItem(SESSION_KEY, id);
    return id;
  } catch {
    return randomSessionId();
  }
}
