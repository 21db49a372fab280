// Client-side face model. The server's move legality comes from the same
// construction: faces are downward closures of arithmetic runs
// {i, i+s, ..., i+(k-1)s} mod m over the ruleset's steps. The selection
// widget only ever offers runs and sub-selections of runs, so every
// selection it can produce is a face by construction. The contract test
// checks this model against /moves output pile-for-pile.

/** Piles visited by a run, in visit order, wrap-around duplicates collapsed. */
export function runPiles(m: number, step: number, start: number, length: number): number[] {
  const out: number[] = [];
  for (let j = 0; j < length; j++) {
    const pile = (start + j * step) % m;
    if (!out.includes(pile)) out.push(pile);
  }
  return out;
}

function lexCompare(a: number[], b: number[]): number {
  const n = Math.min(a.length, b.length);
  for (let i = 0; i < n; i++) {
    if (a[i] !== b[i]) return a[i] - b[i];
  }
  return a.length - b.length;
}

export function maximalFaces(m: number, steps: number[], k: number): number[][] {
  const seen = new Set<string>();
  const candidates: number[][] = [];
  for (const s of steps) {
    for (let i = 0; i < m; i++) {
      const face = [...runPiles(m, s, i, k)].sort((x, y) => x - y);
      const key = face.join(',');
      if (!seen.has(key)) {
        seen.add(key);
        candidates.push(face);
      }
    }
  }
  const maximal = candidates.filter(
    (f) => !candidates.some((g) => g.length > f.length && f.every((p) => g.includes(p))),
  );
  return maximal.sort(lexCompare);
}

export function isFace(faces: number[][], picks: number[]): boolean {
  if (picks.length === 0) return false;
  return faces.some((f) => picks.every((p) => f.includes(p)));
}

/**
 * Every support the selection widget can submit on this position: nonempty
 * subsets of maximal faces whose piles all still hold tokens. Matches the
 * support set of the server's legal-move listing.
 */
export function reachableSupports(
  m: number,
  steps: number[],
  k: number,
  heights: number[],
): number[][] {
  const seen = new Set<string>();
  const out: number[][] = [];
  for (const face of maximalFaces(m, steps, k)) {
    const live = face.filter((p) => heights[p] > 0);
    for (let mask = 1; mask < 1 << live.length; mask++) {
      const subset = live.filter((_, idx) => mask & (1 << idx));
      const key = subset.join(',');
      if (!seen.has(key)) {
        seen.add(key);
        out.push(subset);
      }
    }
  }
  return out.sort(lexCompare);
}
