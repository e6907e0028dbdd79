// API response shapes, mirroring the server's pydantic models verbatim.

export interface ColorCell {
  band: "green" | "red" | "neutral";
  intensity: number;
  valid: boolean;
}

export interface BoardRow {
  submitter_id: string;
  display_name: string;
  submission_id: number;
  eval_timestamp: number;
  metrics: Record<string, number | null>;
  colors: Record<string, ColorCell>;
}

export interface Column {
  name: string;
  display_name: string;
  min: number;
  max: number;
  threshold: number;
  higher_is_better: boolean;
  visible_by_default: boolean;
}

export interface BoardResponse {
  phase: string;
  columns: Column[];
  rows: BoardRow[];
}

export interface ErrorRow {
  submitter_id: string;
  display_name: string;
  submission_id: number;
  eval_timestamp: number;
  category: string;
  message: string;
}

export interface ErrorBoardResponse {
  phase: string;
  rows: ErrorRow[];
}

export interface Phase {
  name: string;
  kind: string;
  deadline: number;
  submissions: number;
  evaluations: number;
  errors: number;
}

export interface PhaseListResponse {
  phases: Phase[];
}
