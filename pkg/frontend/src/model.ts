/**
 * Client-side session state.
 *
 * Holds the latest server view plus the per-step history of estimates and
 * posterior log-determinants (one entry per answer, plus the prior). All
 * numbers come from gateway payloads; this model never computes preference
 * math of its own, it only accumulates and exposes what the server said.
 */

import { GatewayClient } from "./api.js";
import type { Choice, CreateSessionRequest, SessionView } from "./types.js";

export interface EstimateSnapshot {
  nAnswered: number;
  estimate: number[];
  logDetCov: number;
}

export class SessionModel {
  private view_: SessionView | null = null;
  private history_: EstimateSnapshot[] = [];
  private inFlight_ = false;
  private attemptToken_: string | null = null;
  private tokenCounter_ = 0;

  constructor(private readonly client: GatewayClient) {}

  get view(): SessionView | null {
    return this.view_;
  }

  get history(): readonly EstimateSnapshot[] {
    return this.history_;
  }

  get inFlight(): boolean {
    return this.inFlight_;
  }

  /** True when the UI should accept a left/right answer. */
  get canAnswer(): boolean {
    return !this.inFlight_ && this.view_?.pending != null;
  }

  async start(request: CreateSessionRequest): Promise<SessionView> {
    const view = await this.client.createSession(request);
    this.adopt(view, true);
    return view;
  }

  async resume(sessionId: string): Promise<SessionView> {
    const view = await this.client.getSession(sessionId);
    this.adopt(view, true);
    return view;
  }

  /**
   * Submit an answer for the pending query. Rejects while another answer
   * is in flight. On network failure the attempt token survives, so the
   * retry replays the same answer instead of double-submitting.
   */
  async answer(choice: Choice): Promise<SessionView> {
    if (!this.view_?.pending) {
      throw new Error("no pending query to answer");
    }
    if (this.inFlight_) {
      throw new Error("an answer is already in flight");
    }
    if (this.attemptToken_ === null) {
      this.tokenCounter_ += 1;
      this.attemptToken_ = `${this.view_.id}-${this.view_.n_answered}-${this.tokenCounter_}`;
    }
    this.inFlight_ = true;
    try {
      const view = await this.client.answer(this.view_.id, choice, this.attemptToken_);
      this.attemptToken_ = null;
      this.adopt(view, false);
      return view;
    } finally {
      this.inFlight_ = false;
    }
  }

  private adopt(view: SessionView, reset: boolean): void {
    this.view_ = view;
    const snapshot: EstimateSnapshot = {
      nAnswered: view.n_answered,
      estimate: view.estimate,
      logDetCov: view.log_det_cov,
    };
    if (reset) {
      // Resuming mid-session: earlier estimates were not observed by this
      // client, so the history restarts at the current state.
      this.history_ = [snapshot];
    } else {
      this.history_.push(snapshot);
    }
  }
}
