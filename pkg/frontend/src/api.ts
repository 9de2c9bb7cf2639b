/**
 * HTTP client for the workbench server. Reads are anonymous; mutations send
 * the bearer token obtained from login. Ontology writes are guarded with
 * If-Match so concurrent editors fail loudly instead of overwriting.
 */

import type { ExchangeDocument } from "./model.js";

export interface LoginResponse {
  token: string;
  expires_in_s: number;
  user: string;
}

export interface ProjectSummary {
  id: string;
  name: string;
  state: string;
  [extra: string]: unknown;
}

export interface Progress {
  id: string;
  name: string;
  state: string;
  counters: Record<string, number>;
  last_event: EventEntry | null;
  legal_stages: string[];
}

export interface EventEntry {
  ts: string;
  actor: string;
  event: string;
  detail: Record<string, unknown>;
}

export interface VerificationFinding {
  kind: string;
  refs: string[];
  detail: string;
}

export interface SearchHit {
  doc_id: string;
  score: number;
  title: string | null;
}

export interface SearchResponse {
  corpus_id: string;
  query: string;
  mode: string;
  lemmas: string[];
  results: SearchHit[];
}

export interface OntologyResponse {
  doc: ExchangeDocument;
  etag: string | null;
}

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
    public detail?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }

  get findings(): VerificationFinding[] {
    const detail = this.detail as { findings?: VerificationFinding[] } | undefined;
    return detail?.findings ?? [];
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class WorkbenchClient {
  token: string | null = null;

  constructor(
    public baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request(
    method: string,
    path: string,
    body?: unknown,
    headers: Record<string, string> = {},
  ): Promise<Response> {
    const init: RequestInit = { method, headers: { ...headers } };
    if (body !== undefined) {
      (init.headers as Record<string, string>)["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    if (this.token) {
      (init.headers as Record<string, string>)["Authorization"] = `Bearer ${this.token}`;
    }
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (exc) {
      throw new ApiError("SERVER_UNREACHABLE", `cannot reach ${this.baseUrl}: ${exc}`, 0);
    }
    if (!response.ok) {
      let payload: { error?: string; message?: string; detail?: unknown } = {};
      try {
        payload = await response.json();
      } catch {
        // non-JSON error body; fall through with the status text
      }
      throw new ApiError(
        payload.error ?? "SERVER_ERROR",
        payload.message ?? response.statusText,
        response.status,
        payload.detail,
      );
    }
    return response;
  }

  async login(username: string, password: string): Promise<LoginResponse> {
    const response = await this.request("POST", "/auth/login", { username, password });
    const data = (await response.json()) as LoginResponse;
    this.token = data.token;
    return data;
  }

  async health(): Promise<boolean> {
    const response = await this.request("GET", "/health");
    return ((await response.json()) as { ok: boolean }).ok;
  }

  async listProjects(): Promise<ProjectSummary[]> {
    return (await this.request("GET", "/projects")).json();
  }

  async createProject(name: string): Promise<ProjectSummary> {
    return (await this.request("POST", "/projects", { name })).json();
  }

  async getProgress(projectId: string): Promise<Progress> {
    return (await this.request("GET", `/projects/${projectId}/progress`)).json();
  }

  async runStage(
    projectId: string,
    stage: string,
    params: Record<string, unknown> = {},
  ): Promise<Progress> {
    const response = await this.request("POST", `/projects/${projectId}/stages/${stage}`, {
      params,
    });
    return response.json();
  }

  async getOntology(projectId: string, slot = "draft"): Promise<OntologyResponse> {
    const response = await this.request(
      "GET",
      `/projects/${projectId}/ontology?slot=${encodeURIComponent(slot)}`,
    );
    return { doc: await response.json(), etag: response.headers.get("ETag") };
  }

  async putOntology(
    projectId: string,
    doc: ExchangeDocument,
    slot = "draft",
    ifMatchDigest?: string | null,
  ): Promise<{ slot: string; digest: string }> {
    const headers: Record<string, string> = {};
    if (ifMatchDigest) headers["If-Match"] = `"${ifMatchDigest}"`;
    const response = await this.request(
      "PUT",
      `/projects/${projectId}/ontology?slot=${encodeURIComponent(slot)}`,
      doc,
      headers,
    );
    return response.json();
  }

  async verify(projectId: string, verdict: "approve" | "reject", comment = ""): Promise<Progress> {
    const response = await this.request("POST", `/projects/${projectId}/verify`, {
      verdict,
      comment,
    });
    return response.json();
  }

  async search(corpusId: string, query: string, mode = "any"): Promise<SearchResponse> {
    const params = new URLSearchParams({ corpus: corpusId, q: query, mode });
    return (await this.request("GET", `/search?${params}`)).json();
  }

  async events(projectId: string): Promise<EventEntry[]> {
    const response = await this.request("GET", `/projects/${projectId}/events`);
    return parseEventStream(await response.text());
  }

  /**
   * Live event feed. Yields entries as the server sends them; the caller
   * stops it by aborting the passed controller.
   */
  async *followEvents(projectId: string, signal?: AbortSignal): AsyncGenerator<EventEntry> {
    const init: RequestInit = { method: "GET" };
    if (signal !== undefined) init.signal = signal;
    const response = await this.fetchImpl(
      `${this.baseUrl}/projects/${projectId}/events?follow=true`,
      init,
    );
    if (!response.ok || response.body === null) {
      throw new ApiError("SERVER_ERROR", `event stream failed: ${response.status}`, response.status);
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let cut;
      while ((cut = buffer.indexOf("\n\n")) >= 0) {
        const frame = buffer.slice(0, cut);
        buffer = buffer.slice(cut + 2);
        for (const entry of parseEventStream(frame + "\n\n")) yield entry;
      }
    }
  }
}

/** Parse `data:` lines out of a server-sent-events body. */
export function parseEventStream(text: string): EventEntry[] {
  const entries: EventEntry[] = [];
  for (const line of text.split("\n")) {
    if (line.startsWith("data: ")) {
      entries.push(JSON.parse(line.slice("data: ".length)));
    }
  }
  return entries;
}
