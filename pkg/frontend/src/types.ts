// Response shapes of the ecnim HTTP API. Positions travel as comma-joined
// height strings ("3,0,2,1,0,0"); rulesets in their text notation.

export type Outcome = 'P' | 'N';

export interface PredicateResolution {
  kind: 'predicate';
  predicate: string;
}

export interface IsoResolution {
  kind: 'iso';
  target: string;
  c: number;
  d: number;
}

export interface MergeResolution {
  kind: 'merge';
  groups: number[][];
}

export interface DisjointResolution {
  kind: 'disjoint';
  groups: number[][];
  component: string;
}

export interface UnsolvedResolution {
  kind: 'unsolved';
  reason: string;
}

export type Resolution =
  | PredicateResolution
  | IsoResolution
  | MergeResolution
  | DisjointResolution
  | UnsolvedResolution;

export interface CatalogRow {
  ruleset: string;
  m: number;
  steps: number[];
  k: number;
  kind: string;
  summary: string;
  solved: boolean;
  resolution: Resolution;
}

export interface Evaluation {
  ruleset: string;
  position: string;
  outcome: Outcome;
  method: string[];
  witness: { reflected: boolean; start: number } | null;
  grundy: number | null;
}

export interface MoveDoc {
  removals: Record<string, number>;
  support: number[];
  result: string;
}

export interface MovesPage {
  ruleset: string;
  position: string;
  moves: MoveDoc[];
  next: number | null;
}

export interface BestMove {
  outcome: Outcome;
  move: MoveDoc | null;
}

export interface HistoryItem {
  by: 'human' | 'engine';
  move: MoveDoc;
  played?: 'winning' | 'resistance';
}

export interface SessionDoc {
  id: string;
  ruleset: string;
  initial: string;
  position: string;
  history: HistoryItem[];
  evaluation: Evaluation;
  over: boolean;
}

export interface EngineMoveResponse extends SessionDoc {
  engine: { played: 'winning' | 'resistance'; move: MoveDoc };
}

export function formatHeights(heights: number[]): string {
  return heights.join(',');
}

export function parseHeights(text: string, m: number): number[] {
  const parts = text.split(',').map((t) => t.trim());
  if (parts.length !== m) {
    throw new Error(`expected ${m} comma-separated heights, got ${parts.length}`);
  }
  return parts.map((t) => {
    const n = Number(t);
    if (!Number.isInteger(n) || n < 0) throw new Error(`bad height "${t}"`);
    return n;
  });
}
