// Client-side mirror of the server's control-state contract. Sliders and
// selects enforce these ranges so the UI never sends a request body the
// service would reject.

export type DiscreteField =
  | "lipsPlace"
  | "lipsManner"
  | "tipPlace"
  | "tipManner"
  | "dorsumPlace"
  | "dorsumManner";

export type ContinuousField =
  | "highLow"
  | "frontBack"
  | "rounding"
  | "labialAperture"
  | "tongueTipHeight"
  | "tongueDorsumHeight"
  | "velumHeight"
  | "glottalAperture"
  | "vocalFoldTension"
  | "lungPressure";

export type ControlDoc = Record<ContinuousField, number> & Record<DiscreteField, string>;

export const CONTINUOUS_RANGES: Record<ContinuousField, [number, number]> = {
  highLow: [-1, 1],
  frontBack: [-1, 1],
  rounding: [-1, 1],
  labialAperture: [0, 1],
  tongueTipHeight: [0, 1],
  tongueDorsumHeight: [0, 1],
  velumHeight: [-1, 1],
  glottalAperture: [-1, 1],
  vocalFoldTension: [0, 1],
  lungPressure: [0, 1],
};

export const DISCRETE_LABELS: Record<DiscreteField, readonly string[]> = {
  lipsPlace: ["bilabial", "labiodental"],
  lipsManner: ["full", "near"],
  tipPlace: ["dental", "alveolar", "postalveolar"],
  tipManner: ["full", "near", "lateral"],
  dorsumPlace: ["palatal", "velar"],
  dorsumManner: ["full", "near"],
};

export function neutralControls(): ControlDoc {
  return {
    highLow: 0,
    frontBack: 0,
    rounding: 0,
    labialAperture: 0,
    tongueTipHeight: 0,
    tongueDorsumHeight: 0,
    velumHeight: 0,
    glottalAperture: 0,
    vocalFoldTension: 0,
    lungPressure: 0,
    lipsPlace: "bilabial",
    lipsManner: "full",
    tipPlace: "alveolar",
    tipManner: "full",
    dorsumPlace: "velar",
    dorsumManner: "full",
  };
}

export interface ControlViolation {
  field: string;
  message: string;
}

export function validateControls(doc: Record<string, unknown>): ControlViolation[] {
  const violations: ControlViolation[] = [];
  for (const [field, [lo, hi]] of Object.entries(CONTINUOUS_RANGES)) {
    const value = doc[field];
    if (typeof value !== "number" || !Number.isFinite(value)) {
      violations.push({ field, message: "must be a finite number" });
    } else if (value < lo || value > hi) {
      violations.push({ field, message: `must be within [${lo}, ${hi}]` });
    }
  }
  for (const [field, labels] of Object.entries(DISCRETE_LABELS)) {
    const value = doc[field];
    if (typeof value !== "string" || !labels.includes(value)) {
      violations.push({ field, message: `must be one of ${labels.join(", ")}` });
    }
  }
  const known = new Set<string>([
    ...Object.keys(CONTINUOUS_RANGES),
    ...Object.keys(DISCRETE_LABELS),
  ]);
  for (const field of Object.keys(doc)) {
    if (!known.has(field)) {
      violations.push({ field, message: "unknown field" });
    }
  }
  return violations;
}

export function clampControl(field: ContinuousField, value: number): number {
  const [lo, hi] = CONTINUOUS_RANGES[field];
  return Math.min(hi, Math.max(lo, value));
}

// Symbols not present in the loaded palette are flagged here so the
// animation input can highlight them before any request is sent.
export function unknownSymbols(sequence: string, known: ReadonlySet<string>): number[] {
  const bad: number[] = [];
  for (let i = 0; i < sequence.length; i++) {
    if (!known.has(sequence[i])) {
      bad.push(i);
    }
  }
  return bad;
}
