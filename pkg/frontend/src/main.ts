import { ApiClient, ApiError } from './api.js';
import { renderBoard } from './board.js';
import type { BoardViewState } from './state.js';
import {
  applyEngineMove,
  applyHumanMove,
  canUndo,
  clearSelection,
  initialState,
  pendingMove,
  positionString,
  selectFace,
  setError,
  setPending,
  undo,
  WhatIfEvaluator,
} from './state.js';
import type { CatalogRow, Evaluation, HistoryItem, Resolution } from './types.js';
import { formatHeights, parseHeights } from './types.js';

/** Short tag telling the player what answers their ruleset: formula or oracle. */
export function resolutionTag(res: Resolution): string {
  switch (res.kind) {
    case 'predicate':
      return `formula ${res.predicate}`;
    case 'iso':
      return `≅ ${res.target}`;
    case 'merge':
      return 'pile merge';
    case 'disjoint':
      return `split → ${res.component}`;
    case 'unsolved':
      return 'bounded oracle';
  }
}

/** A mixed starting position so new games are not symmetric. */
export function defaultHeights(m: number): number[] {
  const pattern = [3, 1, 2];
  return Array.from({ length: m }, (_, i) => pattern[i % pattern.length]);
}

interface WhatIfView {
  active: boolean;
  heights: number[];
  evaluation: Evaluation | null;
}

function apiBase(): string {
  const q = new URLSearchParams(window.location.search).get('api');
  return q ?? 'http://127.0.0.1:8000';
}

function bootstrap(): void {
  const api = new ApiClient(apiBase());
  let catalog: CatalogRow[] = [];
  let state: BoardViewState | null = null;
  let whatIf: WhatIfView = { active: false, heights: [], evaluation: null };
  let history: HistoryItem[] = [];
  let banner = '';
  let currentStep = 1;
  let currentLength = 1;

  const $ = (id: string) => document.getElementById(id)!;
  const svg = $('board') as unknown as SVGSVGElement;
  const picker = $('ruleset-picker') as HTMLSelectElement;
  const positionInput = $('position-input') as HTMLInputElement;

  const whatIfEval = new WhatIfEvaluator(
    (pos) => api.evaluate(state!.ruleset.ruleset, pos),
    (pos, evaluation) => {
      if (whatIf.active && formatHeights(whatIf.heights) === pos) {
        whatIf.evaluation = evaluation;
        render();
      }
    },
  );

  function selectedRow(): CatalogRow {
    return catalog.find((r) => r.ruleset === picker.value) ?? catalog[0];
  }

  function render(): void {
    if (!state) return;
    const viewState: BoardViewState = whatIf.active
      ? { ...state, heights: whatIf.heights, selection: null, pending: new Map() }
      : state;
    renderBoard(svg, viewState, { onPileClick });

    const evaluation = whatIf.active ? whatIf.evaluation : state.evaluation;
    const badge = $('eval-badge');
    if (evaluation) {
      badge.textContent = `${evaluation.outcome} · ${evaluation.method.join(' → ')}`;
      badge.className = `badge ${evaluation.outcome === 'P' ? 'badge-p' : 'badge-n'}`;
    } else {
      badge.textContent = '…';
      badge.className = 'badge';
    }
    $('badge-caption').textContent = whatIf.active
      ? 'what-if position'
      : 'position to move on';

    renderStepButtons();
    renderLengthButtons();
    renderAmounts();
    renderWhatIfPanel();
    renderHistory();

    $('error-banner').textContent = state.error ?? '';
    ($('error-banner') as HTMLElement).style.display = state.error ? 'block' : 'none';
    $('game-banner').textContent = banner;
    ($('game-banner') as HTMLElement).style.display = banner ? 'block' : 'none';

    ($('undo-button') as HTMLButtonElement).disabled = !canUndo(state) || whatIf.active;
    ($('submit-button') as HTMLButtonElement).disabled =
      whatIf.active || state.over || pendingMove(state) === null;
    ($('whatif-toggle') as HTMLButtonElement).textContent = whatIf.active
      ? 'back to game'
      : 'what-if mode';
  }

  function renderStepButtons(): void {
    const box = $('step-buttons');
    box.innerHTML = '';
    for (const s of state!.ruleset.steps) {
      const btn = document.createElement('button');
      btn.textContent = `s=${s}`;
      btn.className = s === currentStep ? 'chip active' : 'chip';
      btn.addEventListener('click', () => {
        currentStep = s;
        if (state!.selection) {
          state = selectFace(state!, s, state!.selection.start, currentLength);
        }
        render();
      });
      box.appendChild(btn);
    }
  }

  function renderLengthButtons(): void {
    const box = $('length-buttons');
    box.innerHTML = '';
    for (let len = 1; len <= state!.ruleset.k; len++) {
      const btn = document.createElement('button');
      btn.textContent = String(len);
      btn.className = len === currentLength ? 'chip active' : 'chip';
      btn.addEventListener('click', () => {
        currentLength = len;
        if (state!.selection) {
          state = selectFace(state!, currentStep, state!.selection.start, len);
        }
        render();
      });
      box.appendChild(btn);
    }
  }

  function renderAmounts(): void {
    const box = $('amounts');
    box.innerHTML = '';
    if (whatIf.active || !state!.selection) return;
    for (const pile of state!.selection.piles) {
      const row = document.createElement('div');
      row.className = 'amount-row';
      const label = document.createElement('span');
      label.textContent = `pile ${pile} (${state!.heights[pile]})`;
      const minus = document.createElement('button');
      minus.textContent = '−';
      const value = document.createElement('span');
      value.className = 'amount-value';
      value.textContent = String(state!.pending.get(pile) ?? 0);
      const plus = document.createElement('button');
      plus.textContent = '+';
      minus.addEventListener('click', () => {
        state = setPending(state!, pile, (state!.pending.get(pile) ?? 0) - 1);
        render();
      });
      plus.addEventListener('click', () => {
        state = setPending(state!, pile, (state!.pending.get(pile) ?? 0) + 1);
        render();
      });
      row.append(label, minus, value, plus);
      box.appendChild(row);
    }
  }

  function renderWhatIfPanel(): void {
    const box = $('whatif-panel');
    box.innerHTML = '';
    if (!whatIf.active) return;
    whatIf.heights.forEach((h, pile) => {
      const row = document.createElement('div');
      row.className = 'amount-row';
      const label = document.createElement('span');
      label.textContent = `pile ${pile}`;
      const minus = document.createElement('button');
      minus.textContent = '−';
      const value = document.createElement('span');
      value.className = 'amount-value';
      value.textContent = String(h);
      const plus = document.createElement('button');
      plus.textContent = '+';
      const bump = (delta: number) => {
        whatIf.heights[pile] = Math.max(0, whatIf.heights[pile] + delta);
        whatIf.evaluation = null;
        whatIfEval.request(formatHeights(whatIf.heights));
        render();
      };
      minus.addEventListener('click', () => bump(-1));
      plus.addEventListener('click', () => bump(+1));
      row.append(label, minus, value, plus);
      box.appendChild(row);
    });
    const reset = document.createElement('button');
    reset.textContent = 'reset to game position';
    reset.addEventListener('click', () => {
      whatIf.heights = [...state!.heights];
      whatIf.evaluation = state!.evaluation;
      render();
    });
    box.appendChild(reset);
  }

  function renderHistory(): void {
    const box = $('history');
    box.innerHTML = '';
    history.forEach((item, idx) => {
      const row = document.createElement('div');
      const parts = Object.entries(item.move.removals)
        .map(([pile, amount]) => `${amount} from ${pile}`)
        .join(', ');
      const who = item.by === 'engine' ? `engine (${item.played})` : 'you';
      row.textContent = `${idx + 1}. ${who}: take ${parts} → ${item.move.result}`;
      box.appendChild(row);
    });
  }

  function onPileClick(pile: number): void {
    if (!state || state.over) return;
    if (whatIf.active) {
      whatIf.heights[pile] = Math.max(0, whatIf.heights[pile] - 1);
      whatIf.evaluation = null;
      whatIfEval.request(formatHeights(whatIf.heights));
      render();
      return;
    }
    state = selectFace(state, currentStep, pile, currentLength);
    render();
  }

  async function refreshEvaluation(): Promise<void> {
    if (!state) return;
    try {
      const evaluation = await api.evaluate(state.ruleset.ruleset, positionString(state));
      state = { ...state, evaluation };
    } catch (err) {
      state = setError(state, describe(err));
    }
    render();
  }

  async function newGame(): Promise<void> {
    const row = selectedRow();
    let heights: number[];
    try {
      heights = parseHeights(positionInput.value, row.m);
    } catch (err) {
      if (state) state = setError(state, describe(err));
      render();
      return;
    }
    currentStep = row.steps[0];
    currentLength = row.k;
    state = initialState(row, heights);
    whatIf = { active: false, heights: [], evaluation: null };
    history = [];
    banner = '';
    try {
      const session = await api.createSession(row.ruleset, formatHeights(heights));
      state = { ...state, sessionId: session.id, evaluation: session.evaluation };
      history = session.history;
    } catch (err) {
      state = setError(state, describe(err));
    }
    render();
  }

  async function reseatSession(): Promise<void> {
    // undo and ruleset swaps restart the server session at the shown position
    if (!state) return;
    try {
      const session = await api.createSession(state.ruleset.ruleset, positionString(state));
      state = { ...state, sessionId: session.id, evaluation: session.evaluation };
    } catch (err) {
      state = setError(state, describe(err));
    }
    render();
  }

  async function submitMove(): Promise<void> {
    if (!state || !state.sessionId) return;
    const removals = pendingMove(state);
    if (!removals) return;
    try {
      const afterHuman = await api.humanMove(state.sessionId, removals);
      history = afterHuman.history;
      state = applyHumanMove(
        state,
        parseHeights(afterHuman.position, state.ruleset.m),
        afterHuman.evaluation,
      );
      if (afterHuman.over) {
        banner = 'You took the last token — you win!';
        render();
        return;
      }
      render();
      const afterEngine = await api.engineMove(state.sessionId!);
      history = afterEngine.history;
      state = applyEngineMove(
        state,
        parseHeights(afterEngine.position, state.ruleset.m),
        afterEngine.engine.move,
        afterEngine.evaluation,
      );
      if (afterEngine.over) banner = 'Engine took the last token — engine wins.';
    } catch (err) {
      // 409s (illegal move, dead game) surface inline without losing state
      state = setError(state, describe(err));
    }
    render();
  }

  function describe(err: unknown): string {
    if (err instanceof ApiError) return err.detail;
    return err instanceof Error ? err.message : String(err);
  }

  $('new-game').addEventListener('click', () => void newGame());
  $('submit-button').addEventListener('click', () => void submitMove());
  $('clear-button').addEventListener('click', () => {
    if (state) {
      state = clearSelection(state);
      render();
    }
  });
  $('undo-button').addEventListener('click', () => {
    if (!state || !canUndo(state)) return;
    state = undo(state);
    history = history.slice(0, -2); // drop the undone human move and reply
    banner = '';
    void reseatSession();
  });
  $('whatif-toggle').addEventListener('click', () => {
    if (!state) return;
    if (whatIf.active) {
      whatIf = { active: false, heights: [], evaluation: null };
      whatIfEval.cancel();
    } else {
      whatIf = { active: true, heights: [...state.heights], evaluation: state.evaluation };
    }
    render();
  });
  picker.addEventListener('change', () => {
    positionInput.value = formatHeights(defaultHeights(selectedRow().m));
    void newGame();
  });

  void (async () => {
    try {
      catalog = (await api.rulesets()).filter((r) => r.m <= 8);
    } catch (err) {
      $('error-banner').textContent =
        `cannot reach the API at ${apiBase()} — start it with: ecnim serve (${describe(err)})`;
      ($('error-banner') as HTMLElement).style.display = 'block';
      return;
    }
    for (const row of catalog) {
      const opt = document.createElement('option');
      opt.value = row.ruleset;
      opt.textContent = `${row.ruleset}  [${resolutionTag(row.resolution)}]`;
      picker.appendChild(opt);
    }
    picker.value = 'ECN(6_{1,2},3)';
    positionInput.value = formatHeights(defaultHeights(selectedRow().m));
    await newGame();
    await refreshEvaluation();
  })();
}

if (typeof document !== 'undefined') {
  if (document.readyState === 'loading') {
    document.addEventListener('DOMContentLoaded', bootstrap);
  } else {
    bootstrap();
  }
}
