// DOM wiring for the articulation trainer: phoneme palette, parameter
// sliders, live sagittal/glottal/palatal panels, and animation playback.

import { TrainerApi } from "./api.js";
import type { FrameDoc, PhonemeDoc } from "./api.js";
import { renderGlottalSvg, renderPalatalSvg, renderSagittalSvg } from "./frameRender.js";
import { clampControl, neutralControls, unknownSymbols, validateControls } from "./model.js";
import type { ControlDoc } from "./model.js";
import { PlaybackController } from "./playback.js";
import { Debouncer, SELECT_SPECS, SLIDER_SPECS } from "./sliders.js";

interface UiSessionState {
  currentControls: ControlDoc;
  selectedPhoneme: string | null;
  playback: { request: string | null; playing: boolean; position: number };
  viewToggles: { sagittal: boolean; glottal: boolean; palatal: boolean };
}

const api = new TrainerApi("");
const session: UiSessionState = {
  currentControls: neutralControls(),
  selectedPhoneme: null,
  playback: { request: null, playing: false, position: 0 },
  viewToggles: { sagittal: true, glottal: true, palatal: true },
};
const playback = new PlaybackController();
const knownSymbols = new Set<string>();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function showBanner(message: string | null): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = message ?? "";
  banner.hidden = message === null;
}

function renderViews(frame: FrameDoc, controls: ControlDoc): void {
  if (session.viewToggles.sagittal) {
    el("view-sagittal").innerHTML = renderSagittalSvg(frame);
  }
  if (session.viewToggles.glottal) {
    el("view-glottal").innerHTML = renderGlottalSvg(controls);
  }
  if (session.viewToggles.palatal) {
    el("view-palatal").innerHTML = renderPalatalSvg(frame);
  }
  const derived = frame.derived;
  el("readouts").textContent = [
    `labial ${derived.labialAperture.toFixed(3)}`,
    `apical ${derived.apicalDistance.toFixed(3)}`,
    `dorsal ${derived.dorsalDistance.toFixed(3)}`,
    `velopharyngeal ${derived.velopharyngealOpening.toFixed(3)}`,
    `glottal ${derived.glottalWidth.toFixed(3)}`,
    `jaw ${derived.jawHeight.toFixed(3)}`,
  ].join("   ");
}

async function solveAndRender(): Promise<void> {
  const controls = session.currentControls;
  if (validateControls(controls).length > 0) {
    return; // sliders enforce ranges; never send an invalid body
  }
  try {
    const frame = await api.solveLatest(controls);
    if (frame !== null) {
      renderViews(frame, controls);
      showBanner(null);
    }
  } catch (error) {
    showBanner(`solve failed: ${(error as Error).message}`);
  }
}

const solveDebounce = new Debouncer<ControlDoc>((doc) => {
  session.currentControls = doc;
  void solveAndRender();
});

function syncControlsToInputs(): void {
  for (const spec of SLIDER_SPECS) {
    const input = el<HTMLInputElement>(`slider-${spec.field}`);
    input.value = String(session.currentControls[spec.field]);
    el(`value-${spec.field}`).textContent = session.currentControls[spec.field].toFixed(2);
  }
  for (const spec of SELECT_SPECS) {
    el<HTMLSelectElement>(`select-${spec.field}`).value = session.currentControls[spec.field];
  }
}

function buildSliders(): void {
  const groups: Record<string, HTMLElement> = {
    vocalic: el("sliders-vocalic"),
    consonantal: el("sliders-consonantal"),
    phonatory: el("sliders-phonatory"),
  };
  for (const spec of SLIDER_SPECS) {
    const row = document.createElement("label");
    row.className = "slider-row";
    const caption = document.createElement("span");
    caption.textContent = spec.label;
    const value = document.createElement("span");
    value.id = `value-${spec.field}`;
    value.className = "slider-value";
    value.textContent = "0.00";
    const input = document.createElement("input");
    input.type = "range";
    input.id = `slider-${spec.field}`;
    input.min = String(spec.min);
    input.max = String(spec.max);
    input.step = String(spec.step);
    input.value = "0";
    input.addEventListener("input", () => {
      const next = clampControl(spec.field, Number.parseFloat(input.value));
      value.textContent = next.toFixed(2);
      session.selectedPhoneme = null;
      solveDebounce.push({ ...session.currentControls, [spec.field]: next });
    });
    row.append(caption, input, value);
    groups[spec.group].appendChild(row);
  }
  const selects = el("selects");
  for (const spec of SELECT_SPECS) {
    const row = document.createElement("label");
    row.className = "select-row";
    const caption = document.createElement("span");
    caption.textContent = spec.label;
    const select = document.createElement("select");
    select.id = `select-${spec.field}`;
    for (const option of spec.options) {
      const node = document.createElement("option");
      node.value = option;
      node.textContent = option;
      select.appendChild(node);
    }
    select.addEventListener("change", () => {
      session.selectedPhoneme = null;
      session.currentControls = { ...session.currentControls, [spec.field]: select.value };
      void solveAndRender();
    });
    row.append(caption, select);
    selects.appendChild(row);
  }
}

function selectPhoneme(entry: PhonemeDoc): void {
  session.selectedPhoneme = entry.sampa;
  session.currentControls = { ...entry.state };
  syncControlsToInputs();
  document.querySelectorAll(".phoneme-button").forEach((node) => {
    node.classList.toggle("selected", (node as HTMLElement).dataset.sampa === entry.sampa);
  });
  void solveAndRender();
}

async function buildPalette(): Promise<void> {
  const palette = el("palette");
  const entries = await api.getPhonemes();
  const byClass = new Map<string, PhonemeDoc[]>();
  for (const entry of entries) {
    knownSymbols.add(entry.sampa);
    const bucket = byClass.get(entry.class) ?? [];
    bucket.push(entry);
    byClass.set(entry.class, bucket);
  }
  for (const [phonemeClass, bucket] of byClass) {
    const group = document.createElement("div");
    group.className = "palette-group";
    const title = document.createElement("span");
    title.className = "palette-class";
    title.textContent = phonemeClass;
    group.appendChild(title);
    for (const entry of bucket) {
      const button = document.createElement("button");
      button.className = "phoneme-button";
      button.dataset.sampa = entry.sampa;
      button.textContent = entry.sampa;
      button.title = entry.note;
      button.addEventListener("click", () => selectPhoneme(entry));
      group.appendChild(button);
    }
    palette.appendChild(group);
  }
}

function markUnknownSymbols(): void {
  const input = el<HTMLInputElement>("sampa-input");
  const marks = el("sampa-marks");
  const bad = unknownSymbols(input.value, knownSymbols);
  marks.innerHTML = "";
  for (const ch of input.value.split("").map((c, i) => ({ c, bad: bad.includes(i) }))) {
    const span = document.createElement("span");
    span.textContent = ch.c;
    span.className = ch.bad ? "symbol-unknown" : "symbol-ok";
    marks.appendChild(span);
  }
  el<HTMLButtonElement>("play-button").disabled = bad.length > 0 || input.value.length === 0;
}

function wirePlayback(): void {
  const scrub = el<HTMLInputElement>("scrub");
  playback.onChange((index, frame, playing) => {
    session.playback.playing = playing;
    session.playback.position = playback.position;
    scrub.max = String(Math.max(playback.frameCount - 1, 0));
    scrub.value = String(index);
    el("playback-time").textContent = `${frame.time.toFixed(2)} s`;
    renderViews(frame.frame, frame.state);
  });

  let lastTimestamp: number | null = null;
  function step(timestamp: number): void {
    if (lastTimestamp !== null) {
      playback.tick((timestamp - lastTimestamp) / 1000);
    }
    lastTimestamp = timestamp;
    if (playback.playing) {
      requestAnimationFrame(step);
    } else {
      lastTimestamp = null;
    }
  }

  el<HTMLButtonElement>("play-button").addEventListener("click", async () => {
    const input = el<HTMLInputElement>("sampa-input");
    try {
      const response = await api.animate(input.value, 25);
      session.playback.request = input.value;
      playback.load(response.frames);
      playback.play();
      requestAnimationFrame(step);
      showBanner(null);
    } catch (error) {
      showBanner(`animate failed: ${(error as Error).message}`);
    }
  });
  el<HTMLButtonElement>("pause-button").addEventListener("click", () => playback.pause());
  scrub.addEventListener("input", () => {
    playback.pause();
    const index = Number.parseInt(scrub.value, 10);
    if (playback.frameCount > 0) {
      playback.seek((index / Math.max(playback.frameCount - 1, 1)) * playback.span);
    }
  });
  el<HTMLInputElement>("sampa-input").addEventListener("input", markUnknownSymbols);
}

function wireViewToggles(): void {
  for (const view of ["sagittal", "glottal", "palatal"] as const) {
    const box = el<HTMLInputElement>(`toggle-${view}`);
    box.addEventListener("change", () => {
      session.viewToggles[view] = box.checked;
      el(`view-${view}`).parentElement!.classList.toggle("hidden", !box.checked);
      void solveAndRender();
    });
  }
}

async function init(): Promise<void> {
  buildSliders();
  wirePlayback();
  wireViewToggles();
  if (!(await api.healthy())) {
    showBanner("service unreachable; start it with: artic2d serve --ui frontend");
  }
  try {
    await buildPalette();
  } catch (error) {
    showBanner(`could not load the phoneme inventory: ${(error as Error).message}`);
  }
  markUnknownSymbols();
  await solveAndRender();
}

void init();
