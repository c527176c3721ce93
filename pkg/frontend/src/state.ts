/** UI state: one plain object, replaced (never mutated) on every change. */

import type { MultimodalResponse, NotationChild, NotationInfo, TfidfResponse } from "./api.js";

export type SearchMode = "multimodal" | "tfidf" | "both";

export interface Crumb {
  code: string;
  label: string;
}

export type DetailData =
  | { kind: "loaded"; info: NotationInfo; children: NotationChild[]; breadcrumb: Crumb[] }
  | { kind: "not-found"; code: string };

export interface Banner {
  status: number; // HTTP status; 0 = network failure
  message: string;
}

export interface ResultSet {
  multimodal?: MultimodalResponse;
  tfidf?: TfidfResponse;
}

export interface UiSearchState {
  query: string;
  mode: SearchMode;
  k: number;
  n: number;
  searching: boolean;
  validation: string | null;
  banner: Banner | null;
  results: ResultSet | null;
  view: { kind: "search" } | { kind: "detail"; code: string };
  detail: DetailData | null;
  /** visited notation codes, oldest first; last entry is the open one */
  navStack: string[];
}

// client-side bounds; the server rejects non-positive values anyway
export const K_BOUNDS = { min: 1, max: 1000 } as const;
export const N_BOUNDS = { min: 1, max: 200 } as const;

export function clamp(value: number, bounds: { min: number; max: number }): number {
  if (!Number.isFinite(value)) return bounds.min;
  return Math.min(bounds.max, Math.max(bounds.min, Math.floor(value)));
}

export function initialState(): UiSearchState {
  return {
    query: "",
    mode: "multimodal",
    k: 100,
    n: 20,
    searching: false,
    validation: null,
    banner: null,
    results: null,
    view: { kind: "search" },
    detail: null,
    navStack: [],
  };
}
