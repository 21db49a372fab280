import type { BoardViewState } from './state.js';

// Geometry is kept pure and separate from the DOM so it can be tested
// without a browser. Pile 0 sits at twelve o'clock; indices increase
// clockwise, matching the text notation's pile order.

export interface Point {
  x: number;
  y: number;
}

export function pileAngle(m: number, pile: number): number {
  return -Math.PI / 2 + (2 * Math.PI * pile) / m;
}

export function pilePoint(m: number, pile: number, radius: number, cx: number, cy: number): Point {
  const a = pileAngle(m, pile);
  return { x: cx + radius * Math.cos(a), y: cy + radius * Math.sin(a) };
}

/** Chord endpoints for every step-s adjacency on the circle. */
export function stepChords(
  m: number,
  step: number,
  radius: number,
  cx: number,
  cy: number,
): [Point, Point][] {
  const chords: [Point, Point][] = [];
  for (let i = 0; i < m; i++) {
    chords.push([pilePoint(m, i, radius, cx, cy), pilePoint(m, (i + step) % m, radius, cx, cy)]);
  }
  return chords;
}

/** Polyline through the selected run's piles in visit order. */
export function runPolyline(
  m: number,
  piles: number[],
  radius: number,
  cx: number,
  cy: number,
): Point[] {
  return piles.map((p) => pilePoint(m, p, radius, cx, cy));
}

const SVG_NS = 'http://www.w3.org/2000/svg';
const SIZE = 420;
const RING = 150;

function el(name: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export interface BoardHandlers {
  onPileClick: (pile: number) => void;
}

export function renderBoard(
  svg: SVGSVGElement,
  state: BoardViewState,
  handlers: BoardHandlers,
): void {
  svg.innerHTML = '';
  svg.setAttribute('viewBox', `0 0 ${SIZE} ${SIZE}`);
  const cx = SIZE / 2;
  const cy = SIZE / 2;
  const m = state.ruleset.m;
  const selected = new Set(state.selection?.piles ?? []);
  const engine = new Set(state.lastEngineMove?.support ?? []);

  for (const step of state.ruleset.steps) {
    for (const [a, b] of stepChords(m, step, RING, cx, cy)) {
      svg.appendChild(
        el('line', {
          x1: String(a.x),
          y1: String(a.y),
          x2: String(b.x),
          y2: String(b.y),
          class: 'step-line',
        }),
      );
    }
  }

  if (state.selection) {
    const pts = runPolyline(m, state.selection.piles, RING, cx, cy);
    if (pts.length > 1) {
      svg.appendChild(
        el('polyline', {
          points: pts.map((p) => `${p.x},${p.y}`).join(' '),
          class: 'run-line',
          fill: 'none',
        }),
      );
    }
  }

  for (let pile = 0; pile < m; pile++) {
    const { x, y } = pilePoint(m, pile, RING, cx, cy);
    const group = el('g', { class: 'pile', transform: `translate(${x},${y})` });
    const classes = ['pile-circle'];
    if (selected.has(pile)) classes.push('selected');
    if (engine.has(pile)) classes.push('engine');
    if (state.heights[pile] === 0) classes.push('empty');
    group.appendChild(el('circle', { r: '30', class: classes.join(' ') }));

    const count = el('text', { class: 'pile-count', 'text-anchor': 'middle', dy: '0.35em' });
    count.textContent = String(state.heights[pile]);
    group.appendChild(count);

    const labelPos = pilePoint(m, pile, RING + 48, cx, cy);
    const label = el('text', {
      class: 'pile-label',
      'text-anchor': 'middle',
      x: String(labelPos.x - x),
      y: String(labelPos.y - y),
      dy: '0.35em',
    });
    label.textContent = String(pile);
    group.appendChild(label);

    const pendingAmount = state.pending.get(pile);
    if (pendingAmount) {
      const badge = el('text', {
        class: 'pending-badge',
        'text-anchor': 'middle',
        y: '-38',
      });
      badge.textContent = `−${pendingAmount}`;
      group.appendChild(badge);
    }

    group.addEventListener('click', () => handlers.onPileClick(pile));
    svg.appendChild(group);
  }
}
