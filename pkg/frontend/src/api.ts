import type { ActionOp, CollectionInfo, ErrorBody, SessionView } from './types';

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, body: ErrorBody) {
    super(body.message || body.error || `HTTP ${status}`);
    this.status = status;
    this.code = body.error || 'unknown';
    this.detail = body.detail;
  }
}

/** Minimal response surface so tests can stub fetch with plain objects. */
interface FetchLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = (await fetch(url, init)) as unknown as FetchLike;
  if (!response.ok) {
    let body: ErrorBody = { error: 'unknown', message: `HTTP ${response.status}` };
    try {
      body = (await response.json()) as ErrorBody;
    } catch {
      // non-JSON error body; keep the fallback
    }
    throw new ApiError(response.status, body);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  listCollections(): Promise<{ collections: CollectionInfo[] }> {
    return request(`${this.baseUrl}/api/collections`);
  }

  createSession(collection: string, strategy: string): Promise<SessionView> {
    return request(`${this.baseUrl}/api/sessions`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ collection, strategy }),
    });
  }

  getSession(id: string, page: number, pageSize: number): Promise<SessionView> {
    return request(
      `${this.baseUrl}/api/sessions/${id}?page=${page}&page_size=${pageSize}`,
    );
  }

  applyAction(
    id: string,
    op: ActionOp,
    tag: string,
    page: number,
    pageSize: number,
  ): Promise<SessionView> {
    return request(
      `${this.baseUrl}/api/sessions/${id}/actions?page=${page}&page_size=${pageSize}`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ op, tag }),
      },
    );
  }

  async deleteSession(id: string): Promise<void> {
    await fetch(`${this.baseUrl}/api/sessions/${id}`, { method: 'DELETE' });
  }
}
