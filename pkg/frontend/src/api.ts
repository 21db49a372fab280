import type {
  BestMove,
  CatalogRow,
  EngineMoveResponse,
  Evaluation,
  MoveDoc,
  MovesPage,
  SessionDoc,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = 'ApiError';
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

function detailText(body: unknown): string {
  if (body && typeof body === 'object' && 'detail' in body) {
    const d = (body as { detail: unknown }).detail;
    if (typeof d === 'string') return d;
    return JSON.stringify(d); // validation errors arrive as a list
  }
  return JSON.stringify(body);
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(this.baseUrl + path, init);
    const payload = await res.json();
    if (!res.ok) throw new ApiError(res.status, detailText(payload));
    return payload as T;
  }

  async rulesets(): Promise<CatalogRow[]> {
    const doc = await this.request<{ rulesets: CatalogRow[] }>('GET', '/rulesets');
    return doc.rulesets;
  }

  evaluate(ruleset: string, position: string): Promise<Evaluation> {
    return this.request('POST', '/evaluate', { ruleset, position });
  }

  movesPage(ruleset: string, position: string, offset = 0): Promise<MovesPage> {
    return this.request('POST', '/moves', { ruleset, position, offset });
  }

  /** Follows continuation offsets until the listing is exhausted. */
  async allMoves(ruleset: string, position: string): Promise<MoveDoc[]> {
    const moves: MoveDoc[] = [];
    let offset: number | null = 0;
    while (offset !== null) {
      const page: MovesPage = await this.movesPage(ruleset, position, offset);
      moves.push(...page.moves);
      offset = page.next;
    }
    return moves;
  }

  bestMove(ruleset: string, position: string): Promise<BestMove> {
    return this.request('POST', '/bestmove', { ruleset, position });
  }

  createSession(ruleset: string, position: string): Promise<SessionDoc> {
    return this.request('POST', '/sessions', { ruleset, position });
  }

  session(id: string): Promise<SessionDoc> {
    return this.request('GET', `/sessions/${id}`);
  }

  humanMove(id: string, removals: Record<number, number>): Promise<SessionDoc> {
    return this.request('POST', `/sessions/${id}/move`, { removals });
  }

  engineMove(id: string): Promise<EngineMoveResponse> {
    return this.request('POST', `/sessions/${id}/engine-move`);
  }
}
