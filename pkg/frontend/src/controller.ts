/** Orchestrates API calls against the UI state.
 *
 * At most one request batch is in flight: every submission aborts the
 * previous one, and responses arriving for an aborted batch are dropped.
 */

import { ApiClient, ApiError } from "./api.js";
import type { NotationInfo } from "./api.js";
import type { Crumb, ResultSet, SearchMode, UiSearchState } from "./state.js";
import { K_BOUNDS, N_BOUNDS, clamp, initialState } from "./state.js";

const MAX_BREADCRUMB_DEPTH = 32;

export type StateListener = (state: UiSearchState) => void;

function isAbort(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

export class SearchController {
  state: UiSearchState = initialState();
  private inflight: AbortController | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: StateListener = () => {},
  ) {}

  private update(patch: Partial<UiSearchState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.state);
  }

  setMode(mode: SearchMode): void {
    this.update({ mode });
  }

  setK(k: number): void {
    this.update({ k: clamp(k, K_BOUNDS) });
  }

  setN(n: number): void {
    this.update({ n: clamp(n, N_BOUNDS) });
  }

  dismissBanner(): void {
    this.update({ banner: null });
  }

  private beginRequest(): AbortSignal {
    this.inflight?.abort();
    this.inflight = new AbortController();
    return this.inflight.signal;
  }

  async submitSearch(rawQuery: string): Promise<void> {
    const query = rawQuery.trim();
    if (!query) {
      // inline validation only; deliberately no network traffic
      this.update({ validation: "Type a search term first." });
      return;
    }
    const signal = this.beginRequest();
    this.update({
      query,
      validation: null,
      banner: null,
      searching: true,
      view: { kind: "search" },
      detail: null,
    });
    try {
      const results = await this.fetchResults(query, signal);
      if (signal.aborted) return;
      this.update({ results, searching: false });
    } catch (err) {
      this.handleError(err, signal);
    }
  }

  private async fetchResults(query: string, signal: AbortSignal): Promise<ResultSet> {
    const { k, n, mode } = this.state;
    if (mode === "both") {
      // one request per system, side by side
      const [multimodal, tfidf] = await Promise.all([
        this.api.searchMultimodal(query, { k, n, signal }),
        this.api.searchTfidf(query, { n, signal }),
      ]);
      return { multimodal, tfidf };
    }
    if (mode === "tfidf") {
      return { tfidf: await this.api.searchTfidf(query, { n, signal }) };
    }
    return { multimodal: await this.api.searchMultimodal(query, { k, n, signal }) };
  }

  async submitImage(image: Blob): Promise<void> {
    const signal = this.beginRequest();
    // image queries have no text for the TF-IDF side; show the multimodal view
    this.update({
      validation: null,
      banner: null,
      searching: true,
      mode: "multimodal",
      view: { kind: "search" },
      detail: null,
    });
    try {
      const multimodal = await this.api.searchImage(image, {
        k: this.state.k,
        n: this.state.n,
        signal,
      });
      if (signal.aborted) return;
      this.update({ results: { multimodal }, searching: false });
    } catch (err) {
      this.handleError(err, signal);
    }
  }

  async openNotation(code: string): Promise<void> {
    this.update({ navStack: [...this.state.navStack, code] });
    await this.showNotation(code);
  }

  back(): void {
    const stack = this.state.navStack.slice(0, -1);
    const previous = stack[stack.length - 1];
    this.update({ navStack: stack });
    if (previous === undefined) {
      this.update({ view: { kind: "search" }, detail: null });
    } else {
      void this.showNotation(previous);
    }
  }

  private async showNotation(code: string): Promise<void> {
    const signal = this.beginRequest();
    this.update({ view: { kind: "detail", code }, detail: null, banner: null, searching: false });
    try {
      const info = await this.api.notation(code, signal);
      const childrenResponse = await this.api.notationChildren(code, signal);
      const breadcrumb = await this.fetchBreadcrumb(info, signal);
      if (signal.aborted) return;
      this.update({
        detail: { kind: "loaded", info, children: childrenResponse.children, breadcrumb },
      });
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.update({ detail: { kind: "not-found", code } });
        return;
      }
      this.handleError(err, signal);
    }
  }

  private async fetchBreadcrumb(info: NotationInfo, signal: AbortSignal): Promise<Crumb[]> {
    const chain: Crumb[] = [];
    let parent = info.parent;
    for (let depth = 0; parent !== null && depth < MAX_BREADCRUMB_DEPTH; depth += 1) {
      let ancestor: NotationInfo;
      try {
        ancestor = await this.api.notation(parent, signal);
      } catch (err) {
        if (err instanceof ApiError && err.status === 404) break; // gap in the scheme
        throw err;
      }
      chain.unshift({ code: ancestor.code, label: ancestor.label });
      parent = ancestor.parent;
    }
    return chain;
  }

  private handleError(err: unknown, signal: AbortSignal): void {
    if (isAbort(err) || signal.aborted) return; // superseded by a newer request
    if (err instanceof ApiError) {
      const message =
        err.status === 422
          ? `No encoder entry for that query: ${err.message}`
          : err.status === 503
            ? `Encoder unavailable: ${err.message}`
            : err.status === 0
              ? err.message
              : `Request failed (HTTP ${err.status}): ${err.message}`;
      this.update({ banner: { status: err.status, message }, searching: false });
      return;
    }
    this.update({ banner: { status: -1, message: String(err) }, searching: false });
  }
}
