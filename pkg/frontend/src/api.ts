/** Typed client for the iconsearch JSON API. All traffic goes through the
 * documented /api endpoints; the fetch implementation is injectable for
 * tests. */

export interface Hit {
  image_id: string;
  score: number;
  uri: string | null;
}

export interface AggregatedNotation {
  code: string;
  label: string;
  count: number;
  best_score: number;
}

export interface MultimodalResponse {
  hits: Hit[];
  notations: AggregatedNotation[];
}

export interface TfidfNotation {
  code: string;
  label: string;
  score: number;
}

export interface TfidfResponse {
  notations: TfidfNotation[];
}

export interface NotationInfo {
  code: string;
  label: string;
  parent: string | null;
  children: string[];
  image_count: number;
}

export interface NotationChild {
  code: string;
  label: string;
  image_count: number;
}

export interface NotationChildrenResponse {
  code: string;
  children: NotationChild[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface SearchOptions {
  k?: number;
  n?: number;
  signal?: AbortSignal;
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    private readonly base = "",
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      if (err instanceof Error && err.name === "AbortError") throw err;
      throw new ApiError(0, "cannot reach the search service");
    }
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body: unknown = await response.json();
        if (body && typeof (body as { detail?: unknown }).detail === "string") {
          detail = (body as { detail: string }).detail;
        }
      } catch {
        // body was not JSON; keep the generic detail
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  searchMultimodal(query: string, options: SearchOptions = {}): Promise<MultimodalResponse> {
    const params = new URLSearchParams({ q: query, mode: "multimodal" });
    if (options.k !== undefined) params.set("k", String(options.k));
    if (options.n !== undefined) params.set("n", String(options.n));
    return this.request(`/api/search?${params.toString()}`, { signal: options.signal });
  }

  searchTfidf(query: string, options: SearchOptions = {}): Promise<TfidfResponse> {
    const params = new URLSearchParams({ q: query, mode: "tfidf" });
    if (options.n !== undefined) params.set("n", String(options.n));
    return this.request(`/api/search?${params.toString()}`, { signal: options.signal });
  }

  searchImage(image: Blob, options: SearchOptions = {}): Promise<MultimodalResponse> {
    const params = new URLSearchParams();
    if (options.k !== undefined) params.set("k", String(options.k));
    if (options.n !== undefined) params.set("n", String(options.n));
    const suffix = params.size > 0 ? `?${params.toString()}` : "";
    return this.request(`/api/search/image${suffix}`, {
      method: "POST",
      body: image,
      headers: { "Content-Type": "application/octet-stream" },
      signal: options.signal,
    });
  }

  notation(code: string, signal?: AbortSignal): Promise<NotationInfo> {
    return this.request(`/api/notations/${encodeURIComponent(code)}`, { signal });
  }

  notationChildren(code: string, signal?: AbortSignal): Promise<NotationChildrenResponse> {
    return this.request(`/api/notations/${encodeURIComponent(code)}/children`, { signal });
  }
}
