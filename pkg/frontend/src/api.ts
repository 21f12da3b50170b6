// Typed client for the session service. The UI never interprets answers
// itself; every state transition comes from one of these responses.

export interface ChartPoint {
  index: number;
  value: string;
}

export interface Progress {
  queries: number;
  bound: number;
}

export interface QueryView {
  seq: number;
  assignment: string[];
  progress: Progress;
  chart?: ChartPoint[];
}

export interface ResultView {
  status: string;
  kind: string;
  members: number[];
  query_count: number;
  class_mismatch: boolean;
  program?: string;
  sidecar?: { k: number; formula: number[]; pairs: number[][] };
}

export interface CreateResponse {
  id: string;
  kind: string;
  status: string;
  query: QueryView | null;
}

export interface AnswerResponse {
  status: "running" | "done";
  query?: QueryView;
  result?: ResultView;
}

export interface TranscriptEntry {
  seq: number;
  assignment: string[];
  answer: number;
  size_before: number;
  size_after: number;
}

export interface Transcript {
  entries: TranscriptEntry[];
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function request<T>(method: string, url: string, body?: unknown): Promise<T> {
  const resp = await fetch(url, {
    method,
    headers: body === undefined ? undefined : { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const text = await resp.text();
  let parsed: unknown = null;
  try {
    parsed = text ? JSON.parse(text) : null;
  } catch {
    parsed = null;
  }
  if (!resp.ok) {
    const detail =
      parsed !== null && typeof parsed === "object" && "detail" in parsed
        ? String((parsed as { detail: unknown }).detail)
        : `HTTP ${resp.status}`;
    throw new ApiError(resp.status, detail);
  }
  return parsed as T;
}

export class SessionApi {
  constructor(private readonly base: string = "") {}

  createPatternFromCsv(csv: string): Promise<CreateResponse> {
    return request("POST", `${this.base}/sessions`, { kind: "pattern", csv });
  }

  createPatternFromValues(chart: (number | string)[]): Promise<CreateResponse> {
    return request("POST", `${this.base}/sessions`, { kind: "pattern", chart });
  }

  getQuery(sid: string): Promise<QueryView> {
    return request("GET", `${this.base}/sessions/${sid}/query`);
  }

  postAnswer(sid: string, answer: 0 | 1, key: string, seq: number): Promise<AnswerResponse> {
    return request("POST", `${this.base}/sessions/${sid}/answer`, { answer, key, seq });
  }

  getResult(sid: string): Promise<ResultView> {
    return request("GET", `${this.base}/sessions/${sid}/result`);
  }

  getTranscript(sid: string): Promise<Transcript> {
    return request("GET", `${this.base}/sessions/${sid}/transcript`);
  }
}

export function freshKey(): string {
  const rand =
    typeof crypto !== "undefined" && "randomUUID" in crypto
      ? crypto.randomUUID()
      : `${Date.now()}-${Math.random().toString(36).slice(2)}`;
  return `ui-${rand}`;
}
