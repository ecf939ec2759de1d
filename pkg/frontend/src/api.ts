// Typed client for the triage service's HTTP+JSON API.

export interface RankedRole {
  role: string;
  confidence: number;
}

export interface RecommendResponse {
  chosen: string;
  alternatives: RankedRole[];
  fallback_applied: boolean;
  unknown_project: boolean;
  model_version: string;
  model_kind: string;
}

export interface FeedbackEvent {
  project_id: string;
  title: string;
  recommended_role: string;
  accepted: boolean;
  override_role?: string;
  model_version: string;
  idempotency_key: string;
}

export interface ModelsResponse {
  models: { name: string; kind: string; model_version: string; projects: string[] }[];
  active: string | null;
}

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  try {
    const body = await resp.json();
    return new ApiError(resp.status, body.code ?? 'error', body.message ?? resp.statusText);
  } catch {
    return new ApiError(resp.status, 'error', resp.statusText);
  }
}

export class TriageApi {
  constructor(private baseUrl: string = '') {}

  async recommend(
    projectId: string,
    title: string,
    k: number,
    signal?: AbortSignal,
  ): Promise<RecommendResponse> {
    const resp = await fetch(`${this.baseUrl}/api/recommend`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ project_id: projectId, title, k }),
      signal,
    });
    if (!resp.ok) throw await parseError(resp);
    return resp.json();
  }

  async sendFeedback(event: FeedbackEvent): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/api/feedback`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(event),
    });
    if (!resp.ok) throw await parseError(resp);
  }

  async listModels(): Promise<ModelsResponse> {
    const resp = await fetch(`${this.baseUrl}/api/models`);
    if (!resp.ok) throw await parseError(resp);
    return resp.json();
  }
}

export function newIdempotencyKey(): string {
  if (typeof crypto !== 'undefined' && 'randomUUID' in crypto) {
    return crypto.randomUUID();
  }
  return `key-${Date.now()}-${Math.random().toString(36).slice(2)}`;
}
