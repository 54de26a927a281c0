import type { SessionView } from "../src/types.js";

export function makeView(overrides: Partial<SessionView> = {}): SessionView {
  return {
    id: "abc123",
    dimension: 2,
    n_answered: 0,
    pending: {
      first: [0.2, 0.3],
      second: [0.8, 0.7],
      first_stimulus_url: "/stimuli?family=color_shape&a=0.200000,0.300000",
      second_stimulus_url: "/stimuli?family=color_shape&a=0.800000,0.700000",
    },
    estimate: [0.5, 0.5],
    estimate_stimulus_url: "/stimuli?family=color_shape&a=0.500000,0.500000",
    posterior_preview: [
      [0.1, 0.2],
      [0.6, 0.7],
    ],
    log_det_cov: -5.0,
    ...overrides,
  };
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
