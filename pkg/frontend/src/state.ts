import { isFace, maximalFaces, runPiles } from './faces.js';
import type { CatalogRow, Evaluation, MoveDoc } from './types.js';
import { formatHeights } from './types.js';

export interface Selection {
  step: number;
  start: number;
  length: number;
  piles: number[]; // visit order, duplicates collapsed
}

export interface Snapshot {
  heights: number[];
  evaluation: Evaluation | null;
}

export interface BoardViewState {
  ruleset: CatalogRow;
  heights: number[];
  selection: Selection | null;
  pending: Map<number, number>;
  evaluation: Evaluation | null;
  lastEngineMove: MoveDoc | null;
  // one snapshot per human turn, pushed before the move goes out
  undoStack: Snapshot[];
  sessionId: string | null;
  over: boolean;
  error: string | null;
}

export function initialState(ruleset: CatalogRow, heights: number[]): BoardViewState {
  if (heights.length !== ruleset.m) {
    throw new Error(`ruleset has ${ruleset.m} piles, got ${heights.length} heights`);
  }
  return {
    ruleset,
    heights: [...heights],
    selection: null,
    pending: new Map(),
    evaluation: null,
    lastEngineMove: null,
    undoStack: [],
    sessionId: null,
    over: heights.every((h) => h === 0),
    error: null,
  };
}

/**
 * Highlight the run at (step, start, length). The widget only offers the
 * ruleset's own steps and lengths up to k, so anything selectable here is a
 * face; out-of-range arguments are a programming error, not user input.
 */
export function selectFace(
  state: BoardViewState,
  step: number,
  start: number,
  length: number,
): BoardViewState {
  const { m, steps, k } = state.ruleset;
  if (!steps.includes(step)) throw new RangeError(`step ${step} not in {${steps}}`);
  if (length < 1 || length > k) throw new RangeError(`length ${length} out of 1..${k}`);
  if (start < 0 || start >= m) throw new RangeError(`start ${start} out of 0..${m - 1}`);
  const piles = runPiles(m, step, start, length);
  return {
    ...state,
    selection: { step, start, length, piles },
    pending: new Map(),
    error: null,
  };
}

export function clearSelection(state: BoardViewState): BoardViewState {
  return { ...state, selection: null, pending: new Map() };
}

/** Set a pending removal amount, clamped into 0..height of that pile. */
export function setPending(state: BoardViewState, pile: number, amount: number): BoardViewState {
  if (!state.selection || !state.selection.piles.includes(pile)) return state;
  const clamped = Math.max(0, Math.min(amount, state.heights[pile]));
  const pending = new Map(state.pending);
  if (clamped === 0) pending.delete(pile);
  else pending.set(pile, clamped);
  return { ...state, pending };
}

/** The removals map to submit, or null while nothing positive is pending. */
export function pendingMove(state: BoardViewState): Record<number, number> | null {
  if (state.pending.size === 0) return null;
  const removals: Record<number, number> = {};
  for (const [pile, amount] of state.pending) removals[pile] = amount;
  return removals;
}

export function pendingSupportIsFace(state: BoardViewState): boolean {
  const { m, steps, k } = state.ruleset;
  const support = [...state.pending.keys()].sort((a, b) => a - b);
  return isFace(maximalFaces(m, steps, k), support);
}

function snapshot(state: BoardViewState): Snapshot {
  return { heights: [...state.heights], evaluation: state.evaluation };
}

/** Record the pre-move position, then adopt the server's post-move state. */
export function applyHumanMove(
  state: BoardViewState,
  position: number[],
  evaluation: Evaluation | null,
): BoardViewState {
  return {
    ...state,
    undoStack: [...state.undoStack, snapshot(state)],
    heights: [...position],
    evaluation,
    selection: null,
    pending: new Map(),
    lastEngineMove: null,
    over: position.every((h) => h === 0),
    error: null,
  };
}

export function applyEngineMove(
  state: BoardViewState,
  position: number[],
  move: MoveDoc,
  evaluation: Evaluation | null,
): BoardViewState {
  return {
    ...state,
    heights: [...position],
    evaluation,
    lastEngineMove: move,
    over: position.every((h) => h === 0),
    error: null,
  };
}

export function canUndo(state: BoardViewState): boolean {
  return state.undoStack.length > 0;
}

/**
 * Roll back one human turn (the human move and any engine reply after it).
 * The caller re-seats the server session at the restored position.
 */
export function undo(state: BoardViewState): BoardViewState {
  const stack = [...state.undoStack];
  const prev = stack.pop();
  if (!prev) return state;
  return {
    ...state,
    heights: [...prev.heights],
    evaluation: prev.evaluation,
    undoStack: stack,
    selection: null,
    pending: new Map(),
    lastEngineMove: null,
    sessionId: null,
    over: prev.heights.every((h) => h === 0),
    error: null,
  };
}

export function setError(state: BoardViewState, message: string): BoardViewState {
  return { ...state, error: message };
}

export function positionString(state: BoardViewState): string {
  return formatHeights(state.heights);
}

/**
 * Debounced, cached evaluation for what-if exploration. Hypothetical
 * positions are evaluated without touching any session; the cache is keyed
 * by the position string so revisiting an edit is free.
 */
export class WhatIfEvaluator {
  private cache = new Map<string, Evaluation>();
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private evalFn: (position: string) => Promise<Evaluation>,
    private onResult: (position: string, evaluation: Evaluation) => void,
    private delayMs = 250,
  ) {}

  request(position: string): void {
    const hit = this.cache.get(position);
    if (hit) {
      this.onResult(position, hit);
      return;
    }
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.evalFn(position).then((evaluation) => {
        this.cache.set(position, evaluation);
        this.onResult(position, evaluation);
      });
    }, this.delayMs);
  }

  cancel(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
  }

  get cacheSize(): number {
    return this.cache.size;
  }
}
