/**
 * FD chart view model.
 *
 * Collects streamed force-displacement samples into forward/reverse series,
 * overlays curves from other projects, shades warning spans, and tracks the
 * scrub highlight. Every force value shown comes from server responses:
 * the scrub readout re-emits the single-displacement solve verbatim, and
 * the highlighted point is the rendered curve polyline evaluated at the
 * scrubbed displacement, so it always lies on the drawn curve.
 */

import type { FdAtResponse, FdSampleRecord, WarningRecord } from "./api";

export interface CurvePoint {
  s: number;
  forward: number;
  reverse: number;
}

/** The chart point highlighted while scrubbing; lies on the curve. */
export interface HighlightPoint {
  s: number;
  forward: number;
  reverse: number;
}

/** Forces displayed in the scrub readout, verbatim from GET .../fd/at. */
export interface ForceReadout {
  displacement_mm: number;
  force_forward_N: number;
  force_reverse_N: number;
  base_force_N: number;
}

export interface OverlaySeries {
  label: string;
  points: CurvePoint[];
}

export class ChartError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ChartError";
  }
}

/**
 * Evaluate a sampled curve polyline at displacement s by linear
 * interpolation between the bracketing samples (exact at sample points).
 */
export function curveValueAt(points: readonly CurvePoint[], s: number): HighlightPoint {
  if (points.length === 0) throw new ChartError("no curve samples");
  const first = points[0]!;
  const last = points[points.length - 1]!;
  if (s <= first.s) return { s: first.s, forward: first.forward, reverse: first.reverse };
  if (s >= last.s) return { s: last.s, forward: last.forward, reverse: last.reverse };
  let lo = 0;
  let hi = points.length - 1;
  while (hi - lo > 1) {
    const mid = (lo + hi) >> 1;
    if (points[mid]!.s <= s) lo = mid;
    else hi = mid;
  }
  const a = points[lo]!;
  const b = points[hi]!;
  if (a.s === s) return { s, forward: a.forward, reverse: a.reverse };
  const t = (s - a.s) / (b.s - a.s);
  return {
    s,
    forward: a.forward + t * (b.forward - a.forward),
    reverse: a.reverse + t * (b.reverse - a.reverse),
  };
}

export class ChartView {
  private seriesState: CurvePoint[] = [];
  private overlayState = new Map<string, OverlaySeries>();
  private warningState: WarningRecord[] = [];
  private scrubState: number | null = null;
  private readoutState: FdAtResponse | null = null;
  /** True while a stream is in flight ("estimating..." indicator). */
  estimating = false;
  /** True when the contour has changed since the curve was computed. */
  stale = false;

  get series(): readonly CurvePoint[] {
    return this.seriesState;
  }

  get warnings(): readonly WarningRecord[] {
    return this.warningState;
  }

  get overlays(): readonly OverlaySeries[] {
    return [...this.overlayState.values()];
  }

  /** Drop the current curve and start collecting a fresh stream. */
  beginStream(): void {
    this.seriesState = [];
    this.warningState = [];
    this.estimating = true;
  }

  /** Append one streamed sample; samples arrive in displacement order. */
  appendSample(record: FdSampleRecord): void {
    const prev = this.seriesState[this.seriesState.length - 1];
    if (prev !== undefined && record.displacement_mm <= prev.s) {
      throw new ChartError("stream samples must arrive in displacement order");
    }
    this.seriesState.push({
      s: record.displacement_mm,
      forward: record.force_forward_N,
      reverse: record.force_reverse_N,
    });
  }

  /** Close the stream with the server's warning spans. */
  endStream(warnings: readonly WarningRecord[]): void {
    this.warningState = [...warnings];
    this.estimating = false;
    this.stale = false;
  }

  /**
   * Move the scrub cursor. Returns the highlighted chart point, which is
   * the rendered curve evaluated at s (so it lies on the curve by
   * construction).
   */
  setScrub(s: number): HighlightPoint {
    this.scrubState = s;
    return curveValueAt(this.seriesState, s);
  }

  get highlight(): HighlightPoint | null {
    if (this.scrubState === null || this.seriesState.length === 0) return null;
    return curveValueAt(this.seriesState, this.scrubState);
  }

  /**
   * Record the server's single-displacement solve for the scrub readout.
   * The UI performs no force math: displayedForces re-emits these numbers.
   */
  setReadout(response: FdAtResponse): void {
    this.readoutState = response;
  }

  /** The force numbers shown next to the scrub cursor, verbatim. */
  get displayedForces(): ForceReadout | null {
    if (this.readoutState === null) return null;
    return {
      displacement_mm: this.readoutState.displacement_mm,
      force_forward_N: this.readoutState.force_forward_N,
      force_reverse_N: this.readoutState.force_reverse_N,
      base_force_N: this.readoutState.base_force_N,
    };
  }

  /** Warning spans under the cursor (shaded region hit test). */
  warningsAt(s: number): WarningRecord[] {
    return this.warningState.filter((w) => w.range[0] <= s && s <= w.range[1]);
  }

  setOverlay(id: string, overlay: OverlaySeries): void {
    this.overlayState.set(id, overlay);
  }

  /** Toggling an overlay off removes it entirely. */
  removeOverlay(id: string): boolean {
    return this.overlayState.delete(id);
  }
}
