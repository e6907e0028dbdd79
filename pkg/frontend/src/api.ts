// Thin typed client over the documented GET endpoints. The UI never computes
// scores or colors itself; everything rendered comes from these responses.

import type { BoardResponse, ErrorBoardResponse, PhaseListResponse } from "./types.js";

export interface BoardParams {
  sort?: string;
  dir?: "asc" | "desc";
  search?: string;
  submitter?: string;
  metrics?: string[];
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new Error(`GET ${url} failed: ${response.status}`);
  }
  return (await response.json()) as T;
}

export function boardUrl(phase: string, params: BoardParams): string {
  const query = new URLSearchParams();
  if (params.sort) query.set("sort", params.sort);
  if (params.dir) query.set("dir", params.dir);
  if (params.search) query.set("search", params.search);
  if (params.submitter) query.set("submitter", params.submitter);
  if (params.metrics && params.metrics.length > 0) query.set("metrics", params.metrics.join(","));
  const suffix = query.toString();
  return `/api/boards/${encodeURIComponent(phase)}${suffix ? "?" + suffix : ""}`;
}

export function fetchPhases(): Promise<PhaseListResponse> {
  return getJson<PhaseListResponse>("/api/phases");
}

export function fetchBoard(phase: string, params: BoardParams): Promise<BoardResponse> {
  return getJson<BoardResponse>(boardUrl(phase, params));
}

export function fetchErrors(phase: string, params: BoardParams): Promise<ErrorBoardResponse> {
  const query = new URLSearchParams();
  if (params.sort) query.set("sort", params.sort);
  if (params.dir) query.set("dir", params.dir);
  if (params.search) query.set("search", params.search);
  const suffix = query.toString();
  return getJson<ErrorBoardResponse>(
    `/api/boards/${encodeURIComponent(phase)}/errors${suffix ? "?" + suffix : ""}`
  );
}

export function fetchHistory(phase: string, submitterId: string): Promise<BoardResponse> {
  return getJson<BoardResponse>(
    `/api/boards/${encodeURIComponent(phase)}/history/${encodeURIComponent(submitterId)}`
  );
}
