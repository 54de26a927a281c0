/**
 * Pure markup builders.
 *
 * Every function maps server payload fields to HTML/SVG strings without any
 * client-side preference math, which keeps the thin-client rule testable:
 * the numbers on screen are exactly the numbers in the payload.
 */

import type { EstimateSnapshot, SessionModel } from "./model.js";
import type { SessionView } from "./types.js";

export function formatCoords(values: number[]): string {
  return values.map((v) => v.toFixed(4)).join(", ");
}

export function queryScreen(view: SessionView, baseUrl: string, disabled: boolean): string {
  if (!view.pending) {
    return '<p class="done">No pending query.</p>';
  }
  const cls = disabled ? "stimulus disabled" : "stimulus";
  return `
    <div class="query-pair" data-disabled="${disabled}">
      <button id="answer-first" class="${cls}" ${disabled ? "disabled" : ""}>
        <img src="${baseUrl}${view.pending.first_stimulus_url}" alt="option A"/>
        <span>prefer left (&larr;)</span>
      </button>
      <button id="answer-second" class="${cls}" ${disabled ? "disabled" : ""}>
        <img src="${baseUrl}${view.pending.second_stimulus_url}" alt="option B"/>
        <span>prefer right (&rarr;)</span>
      </button>
    </div>
    <p class="progress">answers so far: <span id="n-answered">${view.n_answered}</span></p>`;
}

/** 2-D scatter of the posterior preview on fixed [0,1] axes. */
export function posteriorScatter(view: SessionView, size = 260): string {
  const points = view.posterior_preview
    .map((p) => `<circle cx="${(p[0] * size).toFixed(1)}" cy="${((1 - p[1]) * size).toFixed(1)}" r="1.5" class="draw"/>`)
    .join("");
  const mean = view.estimate;
  const marker =
    `<circle cx="${(mean[0] * size).toFixed(1)}" cy="${((1 - mean[1]) * size).toFixed(1)}" r="5" class="mean"/>`;
  return `<svg class="scatter" viewBox="0 0 ${size} ${size}" width="${size}" height="${size}">` +
    `<rect width="${size}" height="${size}" class="frame"/>${points}${marker}</svg>`;
}

/** Per-coordinate estimate bars for dimensions above two. */
export function coordinateBars(view: SessionView, width = 260): string {
  const rows = view.estimate
    .map((value, i) => {
      const x = (value * width).toFixed(1);
      return `<div class="bar-row"><span class="bar-label">a${i}</span>` +
        `<svg width="${width}" height="14"><rect width="${width}" height="14" class="frame"/>` +
        `<line x1="${x}" y1="0" x2="${x}" y2="14" class="mean"/></svg>` +
        `<span class="bar-value">${value.toFixed(4)}</span></div>`;
    })
    .join("");
  return `<div class="bars">${rows}</div>`;
}

/** Sparkline of the posterior log-determinant over answered queries. */
export function convergenceSparkline(history: readonly EstimateSnapshot[], width = 260, height = 48): string {
  if (history.length < 2) {
    return `<svg class="sparkline" width="${width}" height="${height}"></svg>`;
  }
  const values = history.map((h) => h.logDetCov);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  const step = width / (values.length - 1);
  const points = values
    .map((v, i) => `${(i * step).toFixed(1)},${((1 - (v - lo) / span) * height).toFixed(1)}`)
    .join(" ");
  return `<svg class="sparkline" width="${width}" height="${height}">` +
    `<polyline fill="none" points="${points}"/></svg>`;
}

export function estimatePanel(view: SessionView, model: SessionModel, baseUrl: string): string {
  const plot = view.dimension === 2 ? posteriorScatter(view) : coordinateBars(view);
  return `
    <div class="estimate">
      <img class="estimate-thumb" src="${baseUrl}${view.estimate_stimulus_url}" alt="estimate"/>
      <p>estimate: <span id="estimate-coords">${formatCoords(view.estimate)}</span></p>
      <p>log det covariance: <span id="log-det">${view.log_det_cov.toFixed(3)}</span></p>
      ${plot}
      ${convergenceSparkline(model.history)}
    </div>`;
}
