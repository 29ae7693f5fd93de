import type { ActionOp, SessionView } from '../src/types';

/**
 * Scripted service double for the six-resource art collection.
 *
 * State transitions are keyed by the active-tag set and were computed
 * with the real engine, so the double answers exactly like the service
 * for the session flows the tests exercise. Cache hits are simulated
 * per strategy: the query flavor keys on the active-tag set, the
 * resource flavor on the filtered-resource set.
 */

interface StateEntry {
  active: string[];
  resources: { id: string; label: string; uri: string | null }[];
  selectable: { label: string; count: number }[];
}

const STATES: StateEntry[] = [
  {
    active: [],
    resources: ['r1', 'r2', 'r3', 'r4', 'r5', 'r6'].map((id) => ({
      id, label: `artifact ${id}`, uri: null,
    })),
    selectable: [
      { label: 'Prehistoric', count: 3 },
      { label: 'Protohistoric', count: 3 },
      { label: 'Cave-Painting', count: 2 },
      { label: 'Cantabrian', count: 2 },
      { label: 'Levant', count: 2 },
      { label: 'Megalithic', count: 1 },
      { label: 'Tartesian', count: 1 },
      { label: 'Plateau', count: 1 },
      { label: 'Phoenician', count: 1 },
      { label: 'Penibaetic', count: 1 },
      { label: 'Punic', count: 1 },
    ],
  },
  {
    active: ['Cave-Painting'],
    resources: [
      { id: 'r1', label: 'artifact r1', uri: null },
      { id: 'r2', label: 'artifact r2', uri: null },
    ],
    selectable: [
      { label: 'Cantabrian', count: 1 },
      { label: 'Levant', count: 1 },
    ],
  },
  {
    active: ['Cave-Painting', 'Levant'],
    resources: [{ id: 'r2', label: 'artifact r2', uri: null }],
    selectable: [],
  },
  {
    active: ['Levant'],
    resources: [
      { id: 'r2', label: 'artifact r2', uri: null },
      { id: 'r6', label: 'artifact r6', uri: null },
    ],
    selectable: [
      { label: 'Cave-Painting', count: 1 },
      { label: 'Prehistoric', count: 1 },
      { label: 'Protohistoric', count: 1 },
      { label: 'Punic', count: 1 },
    ],
  },
  {
    active: ['Prehistoric'],
    resources: ['r1', 'r2', 'r3'].map((id) => ({
      id, label: `artifact ${id}`, uri: null,
    })),
    selectable: [
      { label: 'Cave-Painting', count: 2 },
      { label: 'Cantabrian', count: 2 },
      { label: 'Levant', count: 1 },
      { label: 'Megalithic', count: 1 },
    ],
  },
  {
    active: ['Prehistoric', 'Cave-Painting'],
    resources: [
      { id: 'r1', label: 'artifact r1', uri: null },
      { id: 'r2', label: 'artifact r2', uri: null },
    ],
    selectable: [
      { label: 'Cantabrian', count: 1 },
      { label: 'Levant', count: 1 },
    ],
  },
];

function lookupState(active: string[]): StateEntry {
  const key = [...active].sort().join('|');
  const entry = STATES.find((s) => [...s.active].sort().join('|') === key);
  if (!entry) throw new Error(`fixture has no state for {${key}}`);
  return entry;
}

interface SessionState {
  id: string;
  strategy: string;
  active: string[];
  seenKeys: Set<string>;
  lookups: number;
  hits: number;
  stores: number;
  lastMicros: number | null;
  lastHit: boolean | null;
}

export interface FetchCall {
  url: string;
  method: string;
  body: unknown;
  status: number;
  response: unknown;
}

export class FakeService {
  calls: FetchCall[] = [];
  private sessions = new Map<string, SessionState>();
  private nextId = 0;
  private nextMicros = 40;

  /** fetch-compatible stub; install with vi.stubGlobal('fetch', service.fetch). */
  readonly fetch = async (url: string, init?: { method?: string; body?: string }) => {
    const method = init?.method ?? 'GET';
    const body = init?.body ? JSON.parse(init.body) : null;
    const { status, payload } = this.route(url, method, body);
    this.calls.push({ url, method, body, status, response: payload });
    return { ok: status < 400, status, json: async () => payload };
  };

  actionCalls(): FetchCall[] {
    return this.calls.filter((c) => c.method === 'POST' && c.url.includes('/actions'));
  }

  lastViewFor(sessionId: string): SessionView {
    for (let i = this.calls.length - 1; i >= 0; i -= 1) {
      const call = this.calls[i];
      const view = call.response as SessionView;
      if (call.status < 400 && view && view.id === sessionId) return view;
    }
    throw new Error(`no successful view for ${sessionId}`);
  }

  lastView(): SessionView {
    for (let i = this.calls.length - 1; i >= 0; i -= 1) {
      const call = this.calls[i];
      const view = call.response as SessionView;
      if (call.status < 400 && view && typeof view.totalResources === 'number') {
        return view;
      }
    }
    throw new Error('no successful session view yet');
  }

  private cacheKey(session: SessionState): string {
    if (session.strategy === 'query') {
      return `F:${[...session.active].sort().join('|')}`;
    }
    const state = lookupState(session.active);
    return `R:${state.resources.map((r) => r.id).sort().join('|')}`;
  }

  private route(url: string, method: string, body: unknown) {
    if (url.includes('/api/collections')) {
      return {
        status: 200,
        payload: {
          collections: [{ name: 'spanish-early-art', resources: 6, tags: 11 }],
        },
      };
    }

    if (method === 'POST' && /\/api\/sessions(\?|$)/.test(url)) {
      const { collection, strategy } = body as { collection: string; strategy: string };
      if (collection !== 'spanish-early-art') {
        return {
          status: 404,
          payload: { error: 'unknown_collection', message: `no collection ${collection}` },
        };
      }
      this.nextId += 1;
      const session: SessionState = {
        id: `session-${this.nextId}`,
        strategy,
        active: [],
        seenKeys: new Set(),
        lookups: 0,
        hits: 0,
        stores: 0,
        lastMicros: null,
        lastHit: null,
      };
      if (strategy !== 'none') {
        session.seenKeys.add(this.cacheKey(session));
        session.stores = 1;
      }
      this.sessions.set(session.id, session);
      return { status: 201, payload: this.view(session) };
    }

    const match = url.match(/\/api\/sessions\/([^/?]+)/);
    const session = match ? this.sessions.get(match[1]) : undefined;
    if (!session) {
      return { status: 404, payload: { error: 'unknown_session', message: 'no session' } };
    }

    if (method === 'POST' && url.includes('/actions')) {
      const { op, tag } = body as { op: ActionOp; tag: string };
      const state = lookupState(session.active);
      if (op === 'add') {
        if (!state.selectable.some((t) => t.label === tag)) {
          return {
            status: 409,
            payload: {
              error: 'invalid_action',
              message: `tag ${tag} is not selectable`,
              detail: { op, tag, reason: 'not_applicable' },
            },
          };
        }
        session.active = [...session.active, tag];
      } else {
        if (!session.active.includes(tag)) {
          return {
            status: 409,
            payload: {
              error: 'invalid_action',
              message: `tag ${tag} is not active`,
              detail: { op, tag, reason: 'not_applicable' },
            },
          };
        }
        session.active = session.active.filter((t) => t !== tag);
      }
      session.lastMicros = this.nextMicros;
      this.nextMicros += 17.5;
      if (session.strategy === 'none') {
        session.lastHit = false;
      } else {
        session.lookups += 1;
        const key = this.cacheKey(session);
        const hit = session.seenKeys.has(key);
        session.lastHit = hit;
        if (hit) {
          session.hits += 1;
        } else {
          session.seenKeys.add(key);
          session.stores += 1;
        }
      }
      return { status: 200, payload: this.view(session) };
    }

    if (method === 'GET') {
      return { status: 200, payload: this.view(session) };
    }
    if (method === 'DELETE') {
      this.sessions.delete(session.id);
      return { status: 204, payload: {} };
    }
    return { status: 404, payload: { error: 'unknown', message: 'no route' } };
  }

  private view(session: SessionState): SessionView {
    const state = lookupState(session.active);
    return {
      id: session.id,
      collection: 'spanish-early-art',
      strategy: session.strategy as SessionView['strategy'],
      activeTags: [...session.active],
      selectableTags: state.selectable.map((t) => ({ ...t })),
      resources: state.resources.map((r) => ({ ...r })),
      totalResources: state.resources.length,
      page: 1,
      pageSize: 12,
      totalPages: 1,
      lastActionMicros: session.lastMicros,
      lastActionHit: session.lastHit,
      cacheStats: {
        lookups: session.lookups,
        hits: session.hits,
        stores: session.stores,
        entries: session.stores,
      },
    };
  }
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
