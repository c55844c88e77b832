import { ComputeResponse, LabelsResponse, SessionSummary } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin client for the clustering service; all views go through here so
 * tests can intercept every response the UI ever sees. */
export class ServiceClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new Error(`${response.status}: ${detail}`);
    }
    return (await response.json()) as T;
  }

  createSessionFromCsv(csv: string, labelColumn?: string): Promise<SessionSummary> {
    return this.post("/sessions", { csv, label_column: labelColumn ?? null });
  }

  createSessionFromGenerator(
    generator: Record<string, unknown>,
    seed: number,
  ): Promise<SessionSummary> {
    return this.post("/sessions", { generator, seed });
  }

  compute(
    session: string,
    method: string,
    params: Record<string, unknown>,
    seed = 0,
  ): Promise<ComputeResponse> {
    return this.post(`/sessions/${session}/compute`, { method, params, seed });
  }

  cut(
    session: string,
    hierarchy: string,
    threshold: number,
    minSize = 2,
  ): Promise<LabelsResponse> {
    return this.post(`/sessions/${session}/cut`, {
      hierarchy,
      threshold,
      min_size: minSize,
    });
  }

  cutByCount(session: string, hierarchy: string, count: number): Promise<LabelsResponse> {
    return this.post(`/sessions/${session}/cut`, { hierarchy, count });
  }

  selectPeaks(
    session: string,
    graph: string,
    selected: number[],
  ): Promise<LabelsResponse> {
    return this.post(`/sessions/${session}/peaks`, { graph, selected });
  }
}
