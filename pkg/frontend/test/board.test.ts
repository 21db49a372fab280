import { describe, expect, it } from 'vitest';

import { pileAngle, pilePoint, runPolyline, stepChords } from '../src/board.js';
import { resolutionTag } from '../src/main.js';

describe('board geometry', () => {
  it('puts pile 0 at twelve o clock', () => {
    const p = pilePoint(6, 0, 100, 200, 200);
    expect(p.x).toBeCloseTo(200);
    expect(p.y).toBeCloseTo(100);
  });

  it('spaces piles evenly around the circle', () => {
    const m = 7;
    for (let i = 0; i < m; i++) {
      const gap = pileAngle(m, (i + 1) % m) - pileAngle(m, i);
      const wrapped = ((gap % (2 * Math.PI)) + 2 * Math.PI) % (2 * Math.PI);
      expect(wrapped).toBeCloseTo((2 * Math.PI) / m);
    }
  });

  it('keeps every pile on the ring', () => {
    for (let i = 0; i < 8; i++) {
      const p = pilePoint(8, i, 150, 0, 0);
      expect(Math.hypot(p.x, p.y)).toBeCloseTo(150);
    }
  });

  it('draws one chord per pile for a step', () => {
    const chords = stepChords(6, 2, 100, 0, 0);
    expect(chords).toHaveLength(6);
    const [a, b] = chords[0];
    expect(a).toEqual(pilePoint(6, 0, 100, 0, 0));
    expect(b).toEqual(pilePoint(6, 2, 100, 0, 0));
  });

  it('polyline follows the run visit order', () => {
    const pts = runPolyline(6, [4, 0, 2], 100, 0, 0);
    expect(pts).toHaveLength(3);
    expect(pts[0]).toEqual(pilePoint(6, 4, 100, 0, 0));
    expect(pts[1]).toEqual(pilePoint(6, 0, 100, 0, 0));
  });
});

describe('resolution tags', () => {
  it('labels formulas, images, and oracles distinctly', () => {
    expect(resolutionTag({ kind: 'predicate', predicate: 'CN63' })).toBe('formula CN63');
    expect(resolutionTag({ kind: 'iso', target: 'ECN(7_{1},4)', c: 2, d: 0 })).toContain(
      'ECN(7_{1},4)',
    );
    expect(resolutionTag({ kind: 'merge', groups: [[0, 2]] })).toBe('pile merge');
    expect(
      resolutionTag({ kind: 'disjoint', groups: [[0], [1]], component: 'MN(3,2)' }),
    ).toContain('MN(3,2)');
    expect(resolutionTag({ kind: 'unsolved', reason: 'no known closed form' })).toBe(
      'bounded oracle',
    );
  });
});
