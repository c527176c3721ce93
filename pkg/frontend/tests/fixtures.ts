/** Mocked API payloads (the street scenario) and a scripted fetch fake. */

import type { FetchLike, MultimodalResponse, NotationInfo, TfidfResponse } from "../src/api.js";

export const STREET_MULTIMODAL: MultimodalResponse = {
  hits: [
    { image_id: "img00", score: 0.99995, uri: "http://images.test/00.jpg" },
    { image_id: "img01", score: 0.9998, uri: "http://images.test/01.jpg" },
    { image_id: "img02", score: 0.99955, uri: null },
    { image_id: "img03", score: 0.9992, uri: "http://images.test/03.jpg" },
    { image_id: "img04", score: 0.99875, uri: null },
    { image_id: "img05", score: 0.9982, uri: "http://images.test/05.jpg" },
    { image_id: "img06", score: 0.99755, uri: "http://images.test/06.jpg" },
    { image_id: "img07", score: 0.9968, uri: "http://images.test/07.jpg" },
    { image_id: "img08", score: 0.99595, uri: "http://images.test/08.jpg" },
    { image_id: "img09", score: 0.995, uri: "http://images.test/09.jpg" },
  ],
  notations: [
    { code: "25I141", label: "street", count: 8, best_score: 0.99995 },
    { code: "31D14", label: "adult man", count: 5, best_score: 0.9982 },
    { code: "34B11", label: "dog", count: 3, best_score: 0.9968 },
  ],
};

export const STREET_TFIDF: TfidfResponse = {
  notations: [
    { code: "25I141", label: "street", score: 1.0 },
    { code: "25I14", label: "street-level views", score: 0.5173 },
  ],
};

export const NOTATION_CHAIN: Record<string, NotationInfo> = {
  "25I141": { code: "25I141", label: "street", parent: "25I14", children: [], image_count: 8 },
  "25I14": {
    code: "25I14",
    label: "street-level views",
    parent: "25I1",
    children: ["25I141"],
    image_count: 0,
  },
  "25I1": {
    code: "25I1",
    label: "city-view in general",
    parent: "25I",
    children: ["25I14"],
    image_count: 0,
  },
  "25I": { code: "25I", label: "city-view", parent: "25", children: ["25I1"], image_count: 0 },
  "25": { code: "25", label: "earth, world", parent: "2", children: ["25I"], image_count: 0 },
  "2": { code: "2", label: "nature", parent: null, children: ["25"], image_count: 0 },
};

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export interface SeenRequest {
  url: string;
  init?: RequestInit;
}

/** Routes requests against the street fixture and records every call. */
export function streetFetch(): { fetchFn: FetchLike; seen: SeenRequest[] } {
  const seen: SeenRequest[] = [];
  const fetchFn: FetchLike = (url, init) => {
    seen.push({ url, init });
    if (init?.signal?.aborted) {
      return Promise.reject(new DOMException("aborted", "AbortError"));
    }
    const parsed = new URL(url, "http://test.local");
    if (parsed.pathname === "/api/search") {
      const mode = parsed.searchParams.get("mode");
      return Promise.resolve(jsonResponse(mode === "tfidf" ? STREET_TFIDF : STREET_MULTIMODAL));
    }
    if (parsed.pathname === "/api/search/image") {
      return Promise.resolve(jsonResponse(STREET_MULTIMODAL));
    }
    const childMatch = parsed.pathname.match(/^\/api\/notations\/([^/]+)\/children$/);
    if (childMatch) {
      const code = decodeURIComponent(childMatch[1] as string);
      const info = NOTATION_CHAIN[code];
      if (!info) return Promise.resolve(jsonResponse({ detail: "unknown" }, 404));
      return Promise.resolve(
        jsonResponse({
          code,
          children: info.children.map((child) => ({
            code: child,
            label: NOTATION_CHAIN[child]?.label ?? "",
            image_count: NOTATION_CHAIN[child]?.image_count ?? 0,
          })),
        }),
      );
    }
    const infoMatch = parsed.pathname.match(/^\/api\/notations\/([^/]+)$/);
    if (infoMatch) {
      const code = decodeURIComponent(infoMatch[1] as string);
      const info = NOTATION_CHAIN[code];
      if (!info) return Promise.resolve(jsonResponse({ detail: `unknown notation '${code}'` }, 404));
      return Promise.resolve(jsonResponse(info));
    }
    return Promise.resolve(jsonResponse({ detail: "no such endpoint" }, 404));
  };
  return { fetchFn, seen };
}

export function renderedCodes(html: string): string[] {
  return [...html.matchAll(/data-code="([^"]+)"/g)].map((m) => m[1] as string);
}
