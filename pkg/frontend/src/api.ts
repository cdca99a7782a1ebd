// Typed client for the solver service. Slider-driven solve requests are
// cancel-superseded: firing a new one aborts the in-flight call so the
// views only ever show the latest state.

import type { ControlDoc } from "./model.js";

export interface ContourDoc {
  name: string;
  closed: boolean;
  points: [number, number][];
}

export interface DerivedDoc {
  labialAperture: number;
  apicalDistance: number;
  dorsalDistance: number;
  velopharyngealOpening: number;
  glottalWidth: number;
  jawHeight: number;
}

export interface ConstrictionDoc {
  articulator: string;
  place: string;
  manner: string;
  value: number;
  placeX: number;
}

export interface FrameDoc {
  contours: {
    fixed: Record<string, ContourDoc>;
    movable: Record<string, ContourDoc>;
  };
  derived: DerivedDoc;
  annotations: {
    lungPressure: number;
    vocalFoldTension: number;
    velumTight: boolean;
    glottalTight: boolean;
    lateralChannels: string[];
    constrictions: ConstrictionDoc[];
  };
}

export interface PhonemeDoc {
  sampa: string;
  class: string;
  note: string;
  state: ControlDoc;
}

export interface AnimateFrameDoc {
  time: number;
  state: ControlDoc;
  frame: FrameDoc;
}

export interface AnimateResponse {
  sampa: string;
  fps: number;
  span: number;
  frames: AnimateFrameDoc[];
}

export interface ApiErrorDoc {
  code: "badRequest" | "unknownPhoneme" | "internal";
  message: string;
  details?: unknown[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorDoc,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let body: ApiErrorDoc;
  try {
    body = (await response.json()) as ApiErrorDoc;
  } catch {
    body = { code: "internal", message: `HTTP ${response.status}` };
  }
  throw new ApiError(response.status, body);
}

export class TrainerApi {
  private solveAbort: AbortController | null = null;

  constructor(public baseUrl: string = "") {}

  async getPhonemes(): Promise<PhonemeDoc[]> {
    const response = await fetch(`${this.baseUrl}/api/phonemes`);
    if (!response.ok) {
      await parseError(response);
    }
    const body = (await response.json()) as { phonemes: PhonemeDoc[] };
    return body.phonemes;
  }

  /** Solve a control state; a newer call aborts the one still in flight. */
  async solveLatest(doc: ControlDoc): Promise<FrameDoc | null> {
    this.solveAbort?.abort();
    const abort = new AbortController();
    this.solveAbort = abort;
    try {
      return await this.solve(doc, abort.signal);
    } catch (error) {
      if (error instanceof DOMException && error.name === "AbortError") {
        return null; // superseded by a newer slider value
      }
      throw error;
    }
  }

  async solve(doc: ControlDoc, signal?: AbortSignal): Promise<FrameDoc> {
    const response = await fetch(`${this.baseUrl}/api/solve`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
      signal,
    });
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as FrameDoc;
  }

  async animate(sampa: string, fps: number, segmentDuration = 0.15): Promise<AnimateResponse> {
    const response = await fetch(`${this.baseUrl}/api/animate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ sampa, fps, segmentDuration }),
    });
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as AnimateResponse;
  }

  async healthy(): Promise<boolean> {
    try {
      const response = await fetch(`${this.baseUrl}/healthz`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
