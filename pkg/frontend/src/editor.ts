/**
 * Profile editor state machine.
 *
 * Holds the editable contour(s) of the active project, the selection, the
 * scrub displacement, and a bounded undo stack. Segment points can be
 * added, removed, moved, and pulled; drags that would create an overhang
 * (a non-monotonic contour) are clamped interactively rather than rejected.
 *
 * In symmetric mode the opposite contour is kept an exact mirror
 * (x -> -x) after every edit, whichever side the edit targets.
 */

export type EditMode = "create" | "import" | "symmetric";

export interface ContourPoint {
  x: number;
  y: number;
}

export interface PointRef {
  side: number;
  index: number;
}

/** Raised for edits the editor refuses; the message carries a hint. */
export class EditorError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EditorError";
  }
}

/** Minimum y gap kept between neighboring points when clamping drags. */
const MIN_Y_GAP = 1e-6;

/** Bounded undo depth (in-session only; archives store final state). */
const UNDO_LIMIT = 100;

export function mirrorContour(contour: readonly ContourPoint[]): ContourPoint[] {
  return contour.map((p) => ({ x: -p.x, y: p.y }));
}

function cloneContours(contours: readonly (readonly ContourPoint[])[]): ContourPoint[][] {
  return contours.map((c) => c.map((p) => ({ x: p.x, y: p.y })));
}

function assertMonotonic(contour: readonly ContourPoint[]): void {
  for (let i = 1; i < contour.length; i++) {
    if (contour[i]!.y <= contour[i - 1]!.y) {
      throw new EditorError(
        `contour must be strictly increasing in y (points ${i - 1} and ${i})`,
      );
    }
  }
}

export interface EditorStateInit {
  /** One contour per mechanism side, each strictly increasing in y. */
  contours: readonly (readonly ContourPoint[])[];
  travel: number;
  mode?: EditMode;
  projectId?: string;
}

export class EditorState {
  readonly mode: EditMode;
  readonly travel: number;
  readonly projectId: string | null;

  private contoursState: ContourPoint[][];
  private undoStack: ContourPoint[][][] = [];
  private scrubState = 0;
  private dirtyState = false;
  private selectedState: PointRef | null = null;

  constructor(init: EditorStateInit) {
    if (init.contours.length === 0) {
      throw new EditorError("editor needs at least one contour");
    }
    if (!(init.travel > 0)) {
      throw new EditorError("travel must be positive");
    }
    this.mode = init.mode ?? "create";
    this.travel = init.travel;
    this.projectId = init.projectId ?? null;
    this.contoursState = cloneContours(init.contours);
    for (const c of this.contoursState) {
      if (c.length < 2) throw new EditorError("a contour needs at least two points");
      assertMonotonic(c);
    }
    if (this.mode === "symmetric") {
      if (this.contoursState.length !== 2) {
        throw new EditorError("symmetric mode needs exactly two sides");
      }
      this.contoursState[1] = mirrorContour(this.contoursState[0]!);
    }
  }

  /** Read-only view of the current contours. */
  get contours(): readonly (readonly ContourPoint[])[] {
    return this.contoursState;
  }

  get dirty(): boolean {
    return this.dirtyState;
  }

  get selected(): PointRef | null {
    return this.selectedState;
  }

  get scrub(): number {
    return this.scrubState;
  }

  get undoDepth(): number {
    return this.undoStack.length;
  }

  select(ref: PointRef | null): void {
    if (ref !== null) this.point(ref.side, ref.index); // validates
    this.selectedState = ref;
  }

  /** Set the scrub displacement, clamped to [0, travel]. */
  setScrub(s: number): number {
    this.scrubState = Math.min(Math.max(s, 0), this.travel);
    return this.scrubState;
  }

  /** Mark the in-memory contour as saved (server acknowledged the edit). */
  markSaved(): void {
    this.dirtyState = false;
  }

  private point(side: number, index: number): ContourPoint {
    const contour = this.contoursState[side];
    if (contour === undefined) {
      throw new EditorError(`no side ${side} (have ${this.contoursState.length})`);
    }
    const p = contour[index];
    if (p === undefined) {
      throw new EditorError(`no point ${index} on side ${side} (have ${contour.length})`);
    }
    return p;
  }

  private requireEditable(): void {
    if (this.mode === "import") {
      throw new EditorError("imported contours are read-only; duplicate into create mode to edit");
    }
  }

  private beginEdit(): void {
    this.requireEditable();
    this.undoStack.push(cloneContours(this.contoursState));
    if (this.undoStack.length > UNDO_LIMIT) this.undoStack.shift();
  }

  private finishEdit(side: number): void {
    if (this.mode === "symmetric") {
      const other = 1 - side;
      this.contoursState[other] = mirrorContour(this.contoursState[side]!);
    }
    this.dirtyState = true;
  }

  /** Undo the most recent edit. Returns false if the stack is empty. */
  undo(): boolean {
    const prev = this.undoStack.pop();
    if (prev === undefined) return false;
    this.contoursState = prev;
    this.selectedState = null;
    this.dirtyState = true;
    return true;
  }

  /**
   * Insert a point at the midpoint of segment [index, index + 1]; the
   * geometry is visually unchanged until the new point is moved.
   */
  addPoint(side: number, segmentIndex: number): PointRef {
    const a = this.point(side, segmentIndex);
    const b = this.point(side, segmentIndex + 1);
    this.beginEdit();
    const mid = { x: (a.x + b.x) / 2, y: (a.y + b.y) / 2 };
    this.contoursState[side]!.splice(segmentIndex + 1, 0, mid);
    this.finishEdit(side);
    const ref = { side, index: segmentIndex + 1 };
    this.selectedState = ref;
    return ref;
  }

  removePoint(side: number, index: number): void {
    this.point(side, index);
    if (this.contoursState[side]!.length <= 2) {
      throw new EditorError(
        "removing this point would leave fewer than two points; move it instead",
      );
    }
    this.beginEdit();
    this.contoursState[side]!.splice(index, 1);
    this.selectedState = null;
    this.finishEdit(side);
  }

  /**
   * Drag one point by (dx, dy). The y component is clamped so the contour
   * stays strictly monotonic (overhangs are prevented, not rejected).
   */
  movePoint(side: number, index: number, dx: number, dy: number): ContourPoint {
    this.point(side, index);
    this.beginEdit();
    const moved = this.applyDrag(side, index, dx, dy);
    this.finishEdit(side);
    this.selectedState = { side, index };
    return moved;
  }

  /**
   * Pull a point: the grabbed point follows the drag in full and its
   * neighbors follow at half strength, weighted by how well the drag
   * aligns with the edge tangent toward each neighbor.
   */
  pullPoint(side: number, index: number, dx: number, dy: number): ContourPoint {
    this.point(side, index);
    this.beginEdit();
    const grabbed = { ...this.point(side, index) };
    const moved = this.applyDrag(side, index, dx, dy);
    const mag = Math.hypot(dx, dy);
    if (mag > 0) {
      for (const nIndex of [index - 1, index + 1]) {
        const contour = this.contoursState[side]!;
        const neighbor = contour[nIndex];
        if (neighbor === undefined) continue;
        const ex = neighbor.x - grabbed.x;
        const ey = neighbor.y - grabbed.y;
        const elen = Math.hypot(ex, ey);
        if (elen === 0) continue;
        const weight = Math.abs(dx * ex + dy * ey) / (mag * elen);
        this.applyDrag(side, nIndex, 0.5 * weight * dx, 0.5 * weight * dy);
      }
    }
    this.finishEdit(side);
    this.selectedState = { side, index };
    return moved;
  }

  /** Move a point, clamping y into the open window set by its neighbors. */
  private applyDrag(side: number, index: number, dx: number, dy: number): ContourPoint {
    const contour = this.contoursState[side]!;
    const p = contour[index]!;
    const lo = index > 0 ? contour[index - 1]!.y + MIN_Y_GAP : -Infinity;
    const hi = index < contour.length - 1 ? contour[index + 1]!.y - MIN_Y_GAP : Infinity;
    let y = p.y + dy;
    if (lo > hi) {
      y = p.y; // window collapsed (points packed tighter than the gap): hold y
    } else {
      y = Math.min(Math.max(y, lo), hi);
    }
    contour[index] = { x: p.x + dx, y };
    return contour[index]!;
  }
}
