// Deterministic playback controller for sampled frame sequences. The clock
// is injected so tests can drive time explicitly; the DOM wiring feeds it
// requestAnimationFrame deltas.

import type { AnimateFrameDoc } from "./api.js";

export interface PlaybackListener {
  (index: number, frame: AnimateFrameDoc, playing: boolean): void;
}

export class PlaybackController {
  private frames: AnimateFrameDoc[] = [];
  private listeners: PlaybackListener[] = [];
  private _position = 0; // seconds
  private _playing = false;
  public loop = false;

  load(frames: AnimateFrameDoc[]): void {
    if (frames.length === 0) {
      throw new Error("cannot load an empty frame sequence");
    }
    this.frames = frames;
    this._position = 0;
    this._playing = false;
    this.emit();
  }

  get span(): number {
    return this.frames.length ? this.frames[this.frames.length - 1].time : 0;
  }

  get position(): number {
    return this._position;
  }

  get playing(): boolean {
    return this._playing;
  }

  get frameCount(): number {
    return this.frames.length;
  }

  /** Index of the sampled frame at or before the given time. */
  indexAt(time: number): number {
    if (this.frames.length === 0) {
      return 0;
    }
    const clamped = Math.min(Math.max(time, 0), this.span);
    let index = 0;
    for (let i = 0; i < this.frames.length; i++) {
      if (this.frames[i].time <= clamped + 1e-12) {
        index = i;
      } else {
        break;
      }
    }
    return index;
  }

  current(): AnimateFrameDoc {
    return this.frames[this.indexAt(this._position)];
  }

  play(): void {
    if (this.frames.length === 0) {
      return;
    }
    if (this._position >= this.span) {
      this._position = 0;
    }
    this._playing = true;
    this.emit();
  }

  pause(): void {
    this._playing = false;
    this.emit();
  }

  /** Scrubbing to a time shows exactly the frame sampled there. */
  seek(time: number): void {
    this._position = Math.min(Math.max(time, 0), this.span);
    this.emit();
  }

  /** Advance the clock; returns true while playback continues. */
  tick(dtSeconds: number): boolean {
    if (!this._playing) {
      return false;
    }
    this._position += dtSeconds;
    if (this._position >= this.span) {
      if (this.loop) {
        this._position = this.span > 0 ? this._position % this.span : 0;
      } else {
        this._position = this.span;
        this._playing = false;
      }
    }
    this.emit();
    return this._playing;
  }

  onChange(listener: PlaybackListener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    if (this.frames.length === 0) {
      return;
    }
    const frame = this.current();
    const index = this.indexAt(this._position);
    for (const listener of this.listeners) {
      listener(index, frame, this._playing);
    }
  }
}
