import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiError } from '../src/api';

afterEach(() => {
  vi.unstubAllGlobals();
});

function recordingFetch(status: number, payload: unknown) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const stub = async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    return { ok: status < 400, status, json: async () => payload };
  };
  return { calls, stub };
}

describe('ApiClient', () => {
  it('builds session URLs with pagination parameters', async () => {
    const { calls, stub } = recordingFetch(200, {});
    vi.stubGlobal('fetch', stub);
    const client = new ApiClient('http://svc');

    await client.getSession('abc', 2, 10);
    expect(calls[0].url).toBe('http://svc/api/sessions/abc?page=2&page_size=10');

    await client.applyAction('abc', 'add', 'Levant', 1, 12);
    expect(calls[1].url).toBe('http://svc/api/sessions/abc/actions?page=1&page_size=12');
    expect(calls[1].init?.method).toBe('POST');
    expect(JSON.parse(calls[1].init?.body as string)).toEqual({
      op: 'add',
      tag: 'Levant',
    });
  });

  it('posts collection and strategy on session creation', async () => {
    const { calls, stub } = recordingFetch(201, {});
    vi.stubGlobal('fetch', stub);
    await new ApiClient('http://svc').createSession('art', 'query');
    expect(calls[0].url).toBe('http://svc/api/sessions');
    expect(JSON.parse(calls[0].init?.body as string)).toEqual({
      collection: 'art',
      strategy: 'query',
    });
  });

  it('raises ApiError with the server error code', async () => {
    const { stub } = recordingFetch(409, {
      error: 'invalid_action',
      message: 'tag X is not selectable',
      detail: { reason: 'not_applicable' },
    });
    vi.stubGlobal('fetch', stub);
    const client = new ApiClient('http://svc');
    const err = await client.applyAction('abc', 'add', 'X', 1, 12)
      .then(() => null, (e) => e as ApiError);
    expect(err).toBeInstanceOf(ApiError);
    expect(err!.status).toBe(409);
    expect(err!.code).toBe('invalid_action');
    expect(err!.message).toContain('not selectable');
  });

  it('falls back gracefully on a non-JSON error body', async () => {
    vi.stubGlobal('fetch', async () => ({
      ok: false,
      status: 502,
      json: async () => { throw new Error('not json'); },
    }));
    const err = await new ApiClient('http://svc').listCollections()
      .then(() => null, (e) => e as ApiError);
    expect(err!.status).toBe(502);
    expect(err!.message).toContain('502');
  });
});
