// Slider definitions mirroring the parameter table, plus the debounce used
// to keep dragging from turning into a request storm.

import { CONTINUOUS_RANGES, DISCRETE_LABELS } from "./model.js";
import type { ContinuousField, DiscreteField } from "./model.js";

export interface SliderSpec {
  field: ContinuousField;
  label: string;
  min: number;
  max: number;
  step: number;
  group: "vocalic" | "consonantal" | "phonatory";
}

function spec(field: ContinuousField, label: string, group: SliderSpec["group"]): SliderSpec {
  const [min, max] = CONTINUOUS_RANGES[field];
  return { field, label, min, max, step: 0.01, group };
}

export const SLIDER_SPECS: SliderSpec[] = [
  spec("highLow", "high-low", "vocalic"),
  spec("frontBack", "front-back", "vocalic"),
  spec("rounding", "spread-round", "vocalic"),
  spec("labialAperture", "labial aperture", "consonantal"),
  spec("tongueTipHeight", "tongue tip height", "consonantal"),
  spec("tongueDorsumHeight", "tongue dorsum height", "consonantal"),
  spec("velumHeight", "velum height", "phonatory"),
  spec("glottalAperture", "glottal aperture", "phonatory"),
  spec("vocalFoldTension", "vocal fold tension", "phonatory"),
  spec("lungPressure", "lung pressure", "phonatory"),
];

export interface SelectSpec {
  field: DiscreteField;
  label: string;
  options: readonly string[];
}

export const SELECT_SPECS: SelectSpec[] = (
  [
    ["lipsPlace", "lips place"],
    ["lipsManner", "lips manner"],
    ["tipPlace", "tip place"],
    ["tipManner", "tip manner"],
    ["dorsumPlace", "dorsum place"],
    ["dorsumManner", "dorsum manner"],
  ] as [DiscreteField, string][]
).map(([field, label]) => ({ field, label, options: DISCRETE_LABELS[field] }));

export const SLIDER_DEBOUNCE_MS = 50;

type Scheduler = (fn: () => void, ms: number) => unknown;
type Canceller = (handle: unknown) => void;

/**
 * Trailing-edge debounce with latest-wins semantics: rapid calls collapse
 * into one dispatch carrying the last value.
 */
export class Debouncer<T> {
  private handle: unknown = null;
  private pending: T | null = null;

  constructor(
    private dispatch: (value: T) => void,
    private delayMs: number = SLIDER_DEBOUNCE_MS,
    private schedule: Scheduler = (fn, ms) => setTimeout(fn, ms),
    private cancel: Canceller = (h) => clearTimeout(h as ReturnType<typeof setTimeout>),
  ) {}

  push(value: T): void {
    this.pending = value;
    if (this.handle !== null) {
      this.cancel(this.handle);
    }
    this.handle = this.schedule(() => this.flush(), this.delayMs);
  }

  flush(): void {
    if (this.handle !== null) {
      this.cancel(this.handle);
      this.handle = null;
    }
    if (this.pending !== null) {
      const value = this.pending;
      this.pending = null;
      this.dispatch(value);
    }
  }
}
