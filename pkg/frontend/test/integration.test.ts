// Round trips against a real local service instance: these tests spawn the
// Python server and speak to it over the same wire the browser uses.

import { spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, TrainerApi } from "../src/api.js";
import { contactGrid, renderPalatalSvg, renderSagittalSvg } from "../src/frameRender.js";
import { unknownSymbols } from "../src/model.js";

const PORT = 8765 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ReturnType<typeof spawn>;
const api = new TrainerApi(BASE);

beforeAll(async () => {
  server = spawn("python3", ["-m", "artic2d", "serve", "--port", String(PORT)], {
    cwd: "..",
    stdio: "ignore",
  });
  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    if (await api.healthy()) {
      return;
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("service did not become healthy in time");
}, 25000);

afterAll(() => {
  server?.kill();
});

describe("inventory round trip", () => {
  it("loads a palette of at least twenty phonemes grouped by class", async () => {
    const entries = await api.getPhonemes();
    expect(entries.length).toBeGreaterThanOrEqual(20);
    const classes = new Set(entries.map((e) => e.class));
    expect(classes).toEqual(new Set(["vowel", "plosive", "nasal", "fricative", "lateral"]));
  });
});

describe("selecting [m]", () => {
  it("shows labial contact, an open velopharyngeal port, and an empty anterior palate", async () => {
    const entries = await api.getPhonemes();
    const m = entries.find((e) => e.sampa === "m");
    expect(m).toBeDefined();
    const frame = await api.solve(m!.state);
    expect(frame.derived.labialAperture).toBe(0);
    expect(frame.derived.velopharyngealOpening).toBeGreaterThan(0);

    const sagittal = renderSagittalSvg(frame);
    expect(sagittal).toContain('data-name="upperLip"');
    expect(sagittal).toContain('data-name="velum"');

    const grid = contactGrid(frame);
    const anteriorColumns = Math.floor(grid[0].length / 3);
    for (const row of grid) {
      for (let j = 0; j < anteriorColumns; j++) {
        expect(row[j]).toBe("no-contact");
      }
    }
    expect(renderPalatalSvg(frame)).toContain("rect");
  });
});

describe("slider edit latency", () => {
  it("solve plus local render completes within 100 ms", async () => {
    const entries = await api.getPhonemes();
    const a = entries.find((e) => e.sampa === "a")!;
    // warm the connection so we measure the edit, not the TCP setup
    await api.solve(a.state);
    const edited = { ...a.state, highLow: -0.4 };
    const start = performance.now();
    const frame = await api.solveLatest(edited);
    expect(frame).not.toBeNull();
    renderSagittalSvg(frame!);
    renderPalatalSvg(frame!);
    const elapsed = performance.now() - start;
    expect(elapsed).toBeLessThan(100);
  });

  it("latest-wins supersedes a stale in-flight solve", async () => {
    const entries = await api.getPhonemes();
    const a = entries.find((e) => e.sampa === "a")!;
    const stale = api.solveLatest({ ...a.state, highLow: 0.9 });
    const fresh = api.solveLatest({ ...a.state, highLow: -0.9 });
    const [first, second] = await Promise.all([stale, fresh]);
    expect(second).not.toBeNull();
    expect(first).toBeNull(); // aborted by the fresher request
  });
});

describe("playback of 'ata'", () => {
  it("traces the apical closure while the lips stay vocalic", async () => {
    const response = await api.animate("ata", 25);
    expect(response.frames.length).toBeGreaterThan(5);
    const tip = response.frames.map((f) => f.state.tongueTipHeight);
    expect(tip[0]).toBe(0);
    expect(Math.max(...tip)).toBe(1);
    expect(tip[tip.length - 1]).toBe(0);
    const lips = response.frames.map((f) => f.state.labialAperture);
    expect(lips.every((v) => v === 0)).toBe(true);
    // the server-side frame trace agrees with the control trace
    const apical = response.frames.map((f) => f.frame.derived.apicalDistance);
    expect(Math.min(...apical)).toBeLessThanOrEqual(1e-9);
    expect(apical[0]).toBeGreaterThan(0.05);
    expect(apical[apical.length - 1]).toBeGreaterThan(0.05);
    const labial = response.frames.map((f) => f.frame.derived.labialAperture);
    expect(Math.min(...labial)).toBeGreaterThan(0.01);
  });
});

describe("error surfaces", () => {
  it("flags unknown symbols before sending, and the server agrees", async () => {
    const entries = await api.getPhonemes();
    const known = new Set(entries.map((e) => e.sampa));
    expect(unknownSymbols("tq", known)).toEqual([1]);
    await expect(api.animate("tq", 25)).rejects.toMatchObject({
      body: { code: "unknownPhoneme" },
    });
  });

  it("maps validation failures onto ApiError details", async () => {
    const entries = await api.getPhonemes();
    const bad = { ...entries[0].state, highLow: 4 };
    try {
      await api.solve(bad);
      expect.unreachable("must reject");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect((error as ApiError).body.code).toBe("badRequest");
    }
  });
});
