/**
 * Typed client for the knowledge-base service. Every call returns the raw
 * response body; the UI keeps no state the server did not send.
 */

export interface Recommendation {
  id: string;
  rule: string;
  kind: 'ask_question' | 'schedule_appointment' | 'screen_for' | 'notify';
  args: string[];
  text: string;
  status: string;
}

export interface ScoreInfo {
  score: number;
  categories: string[];
  score_class: string;
}

export interface AnswerEntry {
  question: string;
  value: unknown;
  ts: string;
}

export interface SessionView {
  id: string;
  person: string;
  created_at: string;
  answers: AnswerEntry[];
  score: ScoreInfo;
  open_recommendations: Recommendation[];
  closed_recommendations: { id: string; status: string }[];
  profile: string[];
}

export interface AnswerOutcome {
  new_facts: string[][];
  new_recommendations: Recommendation[];
  ace_score: ScoreInfo;
}

export interface ScreeningCandidate {
  nho: string;
  label: string;
}

export interface ScreeningResponse {
  candidates: ScreeningCandidate[];
}

export class ApiError extends Error {
  status: number;
  line?: number;
  column?: number;

  constructor(status: number, body: { error?: string; line?: number; column?: number }) {
    super(body.error ?? `request failed with status ${status}`);
    this.status = status;
    this.line = body.line;
    this.column = body.column;
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, {
    headers: { 'Content-Type': 'application/json' },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(response.status, body);
  }
  return body as T;
}

export class Client {
  constructor(private base: string = '') {}

  createSession(demographics: Record<string, unknown>): Promise<SessionView> {
    return request(this.base, '/sessions', {
      method: 'POST',
      body: JSON.stringify({ demographics }),
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}`);
  }

  recordAnswer(sessionId: string, question: string, value: unknown): Promise<AnswerOutcome> {
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}/answers`, {
      method: 'POST',
      body: JSON.stringify({ question, value }),
    });
  }

  openRecommendations(sessionId: string): Promise<{ open: Recommendation[] }> {
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}/recommendations`);
  }

  closeRecommendation(sessionId: string, recId: string, status: string): Promise<unknown> {
    return request(
      this.base,
      `/sessions/${encodeURIComponent(sessionId)}/recommendations/${encodeURIComponent(recId)}/close`,
      { method: 'POST', body: JSON.stringify({ status }) },
    );
  }

  screening(sessionId: string, symptoms: string[]): Promise<ScreeningResponse> {
    const query = symptoms.length
      ? `?symptoms=${encodeURIComponent(symptoms.join(','))}`
      : '';
    return request(this.base, `/sessions/${encodeURIComponent(sessionId)}/screening${query}`);
  }
}
