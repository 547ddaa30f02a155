/** Strategy/threshold panel state and its query-parameter overrides. */

import type { ChatOverrides } from "./api.js";
import type { Strategy } from "./types.js";

export interface SettingsDefaults {
  strategy: Strategy;
  threshold: number;
}

/**
 * Until the user touches a control, requests carry no override for it and
 * the server applies its own configuration. Once touched, that parameter is
 * sent on every subsequent request — the server remembers overrides per
 * session, so resending is what keeps the panel and the session in step
 * (including when the user sets a control back to the server's default).
 */
export class SettingsState {
  private strategyValue: Strategy;
  private thresholdValue: number;
  private strategyTouched = false;
  private thresholdTouched = false;

  constructor(defaults: SettingsDefaults) {
    this.strategyValue = defaults.strategy;
    this.thresholdValue = defaults.threshold;
  }

  get strategy(): Strategy {
    return this.strategyValue;
  }

  get threshold(): number {
    return this.thresholdValue;
  }

  setStrategy(strategy: Strategy): void {
    this.strategyValue = strategy;
    this.strategyTouched = true;
  }

  /** Ignores NaN/infinite input and clamps negatives to 0. */
  setThreshold(threshold: number): void {
    if (!Number.isFinite(threshold)) {
      return;
    }
    this.thresholdValue = Math.max(0, threshold);
    this.thresholdTouched = true;
  }

  /** Query parameters for the next request: only touched controls. */
  overrides(): ChatOverrides {
    const result: ChatOverrides = {};
    if (this.strategyTouched) {
      result.strategy = this.strategyValue;
    }
    if (this.thresholdTouched) {
      result.threshold = this.thresholdValue;
    }
    return result;
  }
}
