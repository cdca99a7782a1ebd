// Local rendering of solved frames: geometry documents in, SVG markup out.
// Rendering client-side keeps playback smooth at display resolution with
// one network round trip per state instead of one per view.

import type { ContourDoc, FrameDoc } from "./api.js";
import type { ControlDoc } from "./model.js";

const VIEW = { x: -0.15, y: -0.05, w: 1.25, h: 1.12 };

// Display mirror of the service's tongue widening profile and contact
// threshold; used only to draw the palatal grid from frame geometry.
const CONTACT_TAU = 0.01;
const HALF_WIDTH_STATIONS = [0.10, 0.18, 0.26, 0.36, 0.48, 0.58, 0.68, 0.74];
const HALF_WIDTH_VALUES = [0.35, 0.60, 0.72, 0.80, 0.80, 0.76, 0.70, 0.64];
const GROOVE_HALF_SPAN = 0.22;
const LATERAL_MARGIN_SPAN = 0.84;
const PLACE_BAND_HALF = 0.05;

function px(x: number, size: number): string {
  return (((x - VIEW.x) / VIEW.w) * size).toFixed(2);
}

function py(y: number, size: number): string {
  return (((VIEW.y + VIEW.h - y) / VIEW.h) * size).toFixed(2);
}

function contourPath(contour: ContourDoc, size: number): string {
  const parts = contour.points.map(
    ([x, y], i) => `${i === 0 ? "M" : "L"} ${px(x, size)} ${py(y, size)}`,
  );
  if (contour.closed) {
    parts.push("Z");
  }
  return parts.join(" ");
}

export function renderSagittalSvg(frame: FrameDoc, size = 420): string {
  const paths: string[] = [];
  for (const name of Object.keys(frame.contours.fixed).sort()) {
    const d = contourPath(frame.contours.fixed[name], size);
    paths.push(`<path class="fixed" data-name="${name}" d="${d}"/>`);
  }
  for (const name of Object.keys(frame.contours.movable).sort()) {
    const d = contourPath(frame.contours.movable[name], size);
    paths.push(`<path class="articulator" data-name="${name}" d="${d}"/>`);
  }
  if (frame.annotations.lungPressure > 0) {
    paths.push(
      `<circle class="subglottal" cx="${px(0.87, size)}" cy="${py(0.025, size)}" r="${size * 0.012}"/>`,
    );
  }
  return `<svg viewBox="0 0 ${size} ${size}" xmlns="http://www.w3.org/2000/svg">${paths.join("")}</svg>`;
}

export function renderGlottalSvg(controls: ControlDoc, size = 220): string {
  const aperture = Math.max(controls.glottalAperture, 0);
  const sep = aperture * 0.34;
  const s = (v: number) => (v * size).toFixed(2);
  const folds: string[] = [];
  for (const side of [-1, 1]) {
    const endX = 0.5 + (side * sep) / 2;
    const ctrlX = 0.5 + side * (0.02 + sep * 0.3);
    folds.push(
      `<path class="fold" d="M ${s(0.5)} ${s(0.2)} Q ${s(ctrlX)} ${s(0.44)} ${s(endX)} ${s(0.72)}"/>`,
    );
  }
  const badge = `<text x="${s(0.08)}" y="${s(0.94)}">tension ${controls.vocalFoldTension.toFixed(2)}</text>`;
  return (
    `<svg viewBox="0 0 ${size} ${size}" xmlns="http://www.w3.org/2000/svg">` +
    `<ellipse class="ring" cx="${s(0.5)}" cy="${s(0.48)}" rx="${s(0.3)}" ry="${s(0.4)}"/>` +
    folds.join("") +
    badge +
    `</svg>`
  );
}

// --- palatal grid from frame geometry ---------------------------------------

function crossings(contour: ContourDoc, x: number): number[] {
  const ys: number[] = [];
  const pts = contour.points;
  for (let i = 0; i + 1 < pts.length; i++) {
    const [x0, y0] = pts[i];
    const [x1, y1] = pts[i + 1];
    if ((x0 <= x && x <= x1) || (x1 <= x && x <= x0)) {
      if (x === x0) {
        ys.push(y0);
      } else if (x === x1) {
        ys.push(y1);
      } else if (x0 !== x1) {
        ys.push(y0 + ((x - x0) / (x1 - x0)) * (y1 - y0));
      }
    }
  }
  return ys;
}

function interpolateHalfWidth(x: number): number {
  const xs = HALF_WIDTH_STATIONS;
  const ws = HALF_WIDTH_VALUES;
  if (x <= xs[0]) return ws[0];
  if (x >= xs[xs.length - 1]) return ws[ws.length - 1];
  for (let i = 0; i + 1 < xs.length; i++) {
    if (x >= xs[i] && x <= xs[i + 1]) {
      const t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return ws[i] + t * (ws[i + 1] - ws[i]);
    }
  }
  return ws[ws.length - 1];
}

export type CellLabel = "no-contact" | "contact" | "groove-channel" | "lateral-channel";

export function contactGrid(frame: FrameDoc, nRows = 16, nCols = 32): CellLabel[][] {
  const palate = frame.contours.fixed["hardPalate"];
  const xsAll = palate.points.map((p) => p[0]);
  const x0 = Math.min(...xsAll);
  const x1 = Math.max(...xsAll);
  return buildGrid(frame, palate, x0, x1, nRows, nCols);
}

function buildGrid(
  frame: FrameDoc,
  palate: ContourDoc,
  x0: number,
  x1: number,
  nRows: number,
  nCols: number,
): CellLabel[][] {
  const tongueParts = ["tongueBody", "tongueTip", "tongueDorsumMark"].map(
    (name) => frame.contours.movable[name],
  );
  const grid: CellLabel[][] = Array.from({ length: nRows }, () =>
    Array.from({ length: nCols }, () => "no-contact" as CellLabel),
  );
  const gaps: (number | null)[] = [];
  const stationXs: number[] = [];
  for (let j = 0; j < nCols; j++) {
    const x = x0 + ((j + 0.5) / nCols) * (x1 - x0);
    stationXs.push(x);
    const roof = crossings(palate, x);
    const tongueYs = tongueParts.flatMap((part) => crossings(part, x));
    if (roof.length === 0 || tongueYs.length === 0) {
      gaps.push(null);
      continue;
    }
    gaps.push(Math.max(0, Math.min(...roof) - Math.max(...tongueYs)));
  }
  const position = (r: number) => ((r + 0.5) / nRows) * 2 - 1;
  for (let j = 0; j < nCols; j++) {
    const gap = gaps[j];
    if (gap === null || gap > CONTACT_TAU) continue;
    const width = interpolateHalfWidth(stationXs[j]);
    for (let r = 0; r < nRows; r++) {
      if (Math.abs(position(r)) <= width) {
        grid[r][j] = "contact";
      }
    }
  }
  for (const con of frame.annotations.constrictions) {
    if (con.articulator === "lips") continue;
    for (let j = 0; j < nCols; j++) {
      if (Math.abs(stationXs[j] - con.placeX) > PLACE_BAND_HALF) continue;
      const gap = gaps[j];
      if (gap === null || gap > CONTACT_TAU) continue;
      for (let r = 0; r < nRows; r++) {
        const pos = Math.abs(position(r));
        if (con.manner === "near" && pos <= GROOVE_HALF_SPAN && grid[r][j] === "contact") {
          grid[r][j] = "groove-channel";
        }
        if (con.manner === "lateral" && pos >= LATERAL_MARGIN_SPAN && grid[r][j] === "no-contact") {
          grid[r][j] = "lateral-channel";
        }
      }
    }
  }
  return grid;
}

export function renderPalatalSvg(frame: FrameDoc, size = 220): string {
  const grid = contactGrid(frame);
  const nRows = grid.length;
  const nCols = grid[0].length;
  const pad = 0.06 * size;
  const cellW = (size - 2 * pad) / nRows;
  const cellH = (size - 2 * pad) / nCols;
  const cells: string[] = [];
  for (let r = 0; r < nRows; r++) {
    for (let j = 0; j < nCols; j++) {
      const cls = grid[r][j];
      const x = (pad + r * cellW).toFixed(2);
      const y = (pad + j * cellH).toFixed(2);
      cells.push(
        `<rect class="cell ${cls}" x="${x}" y="${y}" width="${cellW.toFixed(2)}" height="${cellH.toFixed(2)}"/>`,
      );
    }
  }
  return `<svg viewBox="0 0 ${size} ${size}" xmlns="http://www.w3.org/2000/svg">${cells.join("")}</svg>`;
}
