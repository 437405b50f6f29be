// Thin client over the scenario service. Every id the UI shows comes out of
// these responses; nothing is fabricated client-side.

import type {
  Annotation,
  Identity,
  Mention,
  QueryRow,
  ScenarioDetail,
  ScenarioSummary,
  Segment,
} from './types.js';

export class StaleVersionError extends Error {
  constructor() {
    super('scenario changed on the server; reload to continue');
  }
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function check<T>(response: Response): Promise<T> {
  if (response.status === 409) throw new StaleVersionError();
  if (!response.ok) {
    const body = await response.text();
    throw new ApiError(response.status, body.slice(0, 300));
  }
  return response.json() as Promise<T>;
}

export class ApiClient {
  constructor(private base: string = '') {}

  private url(path: string): string {
    return this.base + path;
  }

  async scenarios(): Promise<ScenarioSummary[]> {
    return check(await fetch(this.url('/scenarios')));
  }

  async scenario(id: string): Promise<ScenarioDetail> {
    return check(await fetch(this.url(`/scenarios/${id}`)));
  }

  mediaUrl(scenarioId: string, path: string): string {
    return this.url(`/scenarios/${scenarioId}/media/${path}`);
  }

  async createMention(
    scenarioId: string,
    signalId: string,
    segments: Segment[],
    annotations: Annotation[],
    version: number,
  ): Promise<{ mention: Mention; version: number }> {
    const response = await fetch(
      this.url(`/scenarios/${scenarioId}/signals/${signalId}/mentions`),
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ segments, annotations, version }),
      },
    );
    return check(response);
  }

  async deleteMention(mentionId: string, version: number): Promise<void> {
    await check(
      await fetch(this.url(`/mentions/${mentionId}?version=${version}`), {
        method: 'DELETE',
      }),
    );
  }

  async identities(): Promise<Identity[]> {
    return check(await fetch(this.url('/identities')));
  }

  async mintIdentity(name: string): Promise<Identity> {
    const response = await fetch(this.url('/identities'), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ name }),
    });
    return check(response);
  }

  async createTriple(
    scenarioId: string,
    body: {
      subject: string;
      predicate: string;
      object: string;
      perspective?: Record<string, string>;
      signal_id?: string;
      segments?: Segment[];
      version?: number;
    },
  ): Promise<{ claim: string; version: number }> {
    const response = await fetch(this.url(`/scenarios/${scenarioId}/triples`), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    return check(response);
  }

  async emit(scenarioId: string): Promise<{ delta: number; size: number }> {
    return check(
      await fetch(this.url(`/scenarios/${scenarioId}/emit`), { method: 'POST' }),
    );
  }

  async graph(scenarioId: string): Promise<string> {
    const response = await fetch(
      this.url(`/scenarios/${scenarioId}/graph?format=trig`),
    );
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return response.text();
  }

  async query(
    scenarioId: string,
    params: { s?: string; p?: string; o?: string; t?: number; source?: string },
  ): Promise<QueryRow[]> {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== undefined && value !== '') search.set(key, String(value));
    }
    return check(
      await fetch(this.url(`/scenarios/${scenarioId}/query?${search}`)),
    );
  }
}
