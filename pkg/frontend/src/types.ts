/** Wire types mirroring the gateway's session views. */

export interface PendingQueryView {
  first: number[];
  second: number[];
  first_stimulus_url: string;
  second_stimulus_url: string;
}

export interface SessionView {
  id: string;
  dimension: number;
  n_answered: number;
  pending: PendingQueryView | null;
  estimate: number[];
  estimate_stimulus_url: string;
  posterior_preview: number[][];
  log_det_cov: number;
}

export type Choice = "first" | "second";

export interface CreateSessionRequest {
  dimension: number;
  strategy?: "random" | "best_of_n" | "closed_form";
  k_q?: number;
  family?: "color_shape" | "face_glyph";
  seed?: number;
}
