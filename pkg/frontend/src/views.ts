/** Pure render functions: state in, HTML string out.
 *
 * The UI never reorders anything — lists are rendered exactly in API
 * payload order, which the tests assert by comparing DOM order against
 * mocked payloads.
 */

import type { AggregatedNotation, Hit, TfidfNotation } from "./api.js";
import type { Banner, DetailData, UiSearchState } from "./state.js";

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => ESCAPES[ch] as string);
}

function notationItem(code: string, label: string, metric: string): string {
  return (
    `<li class="notation">` +
    `<a href="#" class="code-link" data-code="${escapeHtml(code)}">${escapeHtml(code)}</a>` +
    `<span class="label">${escapeHtml(label)}</span>` +
    `<span class="metric">${escapeHtml(metric)}</span>` +
    `</li>`
  );
}

export function renderMultimodalNotations(notations: AggregatedNotation[]): string {
  if (notations.length === 0) return `<p class="empty">No notations found.</p>`;
  const items = notations.map((n) =>
    notationItem(n.code, n.label, `${n.count} image${n.count === 1 ? "" : "s"} · best ${n.best_score.toFixed(3)}`),
  );
  return `<ol class="notation-list">${items.join("")}</ol>`;
}

export function renderTfidfNotations(notations: TfidfNotation[]): string {
  if (notations.length === 0) return `<p class="empty">No notations found.</p>`;
  const items = notations.map((n) => notationItem(n.code, n.label, `score ${n.score.toFixed(3)}`));
  return `<ol class="notation-list">${items.join("")}</ol>`;
}

export function renderHits(hits: Hit[]): string {
  if (hits.length === 0) return "";
  const cards = hits.map((hit) => {
    const thumb = hit.uri
      ? `<img src="${escapeHtml(hit.uri)}" alt="${escapeHtml(hit.image_id)}" loading="lazy">`
      : `<div class="placeholder" role="img" aria-label="no image available"></div>`;
    return `<figure class="hit">${thumb}<figcaption>${escapeHtml(hit.image_id)} · ${hit.score.toFixed(3)}</figcaption></figure>`;
  });
  return `<section class="hits"><h3>Supporting images</h3><div class="hit-grid">${cards.join("")}</div></section>`;
}

export function renderResults(state: UiSearchState): string {
  if (state.searching) return `<p class="status">Searching…</p>`;
  const results = state.results;
  if (!results) return `<p class="status">Search the corpus to see ranked notations.</p>`;

  if (state.mode === "both") {
    const left = results.multimodal ? renderMultimodalNotations(results.multimodal.notations) : "";
    const right = results.tfidf ? renderTfidfNotations(results.tfidf.notations) : "";
    return (
      `<div class="columns">` +
      `<section class="column" data-system="multimodal"><h3>Multimodal</h3>${left}</section>` +
      `<section class="column" data-system="tfidf"><h3>TF-IDF</h3>${right}</section>` +
      `</div>`
    );
  }
  if (state.mode === "tfidf") {
    return results.tfidf ? renderTfidfNotations(results.tfidf.notations) : "";
  }
  if (!results.multimodal) return "";
  return renderMultimodalNotations(results.multimodal.notations) + renderHits(results.multimodal.hits);
}

export function renderBanner(banner: Banner | null): string {
  if (!banner) return "";
  return (
    `<div class="banner" data-status="${banner.status}">` +
    `<span>${escapeHtml(banner.message)}</span>` +
    `<button type="button" data-action="dismiss" aria-label="dismiss">×</button>` +
    `</div>`
  );
}

export function renderValidation(validation: string | null): string {
  if (!validation) return "";
  return `<p class="validation">${escapeHtml(validation)}</p>`;
}

export function renderDetail(detail: DetailData | null): string {
  if (!detail) return `<p class="status">Loading notation…</p>`;
  if (detail.kind === "not-found") {
    return (
      `<section class="detail">` +
      `<p class="not-found">Unknown notation <code>${escapeHtml(detail.code)}</code>.</p>` +
      `<a href="#" data-action="back">Back</a>` +
      `</section>`
    );
  }
  const crumbs = detail.breadcrumb
    .map(
      (crumb) =>
        `<a href="#" data-code="${escapeHtml(crumb.code)}" title="${escapeHtml(crumb.label)}">${escapeHtml(crumb.code)}</a>`,
    )
    .concat(`<span class="current">${escapeHtml(detail.info.code)}</span>`)
    .join(`<span class="sep"> › </span>`);
  const children =
    detail.children.length === 0
      ? `<p class="empty">No narrower notations.</p>`
      : `<ul class="children">` +
        detail.children
          .map(
            (child) =>
              `<li>` +
              `<a href="#" class="code-link" data-code="${escapeHtml(child.code)}">${escapeHtml(child.code)}</a>` +
              `<span class="label">${escapeHtml(child.label)}</span>` +
              `<span class="metric">${child.image_count} image${child.image_count === 1 ? "" : "s"}</span>` +
              `</li>`,
          )
          .join("") +
        `</ul>`;
  return (
    `<section class="detail">` +
    `<nav class="breadcrumb">${crumbs}</nav>` +
    `<h2>${escapeHtml(detail.info.code)} <small>${escapeHtml(detail.info.label)}</small></h2>` +
    `<p class="meta">${detail.info.image_count} annotated image${detail.info.image_count === 1 ? "" : "s"}</p>` +
    `<h3>Narrower notations</h3>` +
    children +
    `<p><a href="#" data-action="back">Back</a></p>` +
    `</section>`
  );
}

export function renderContent(state: UiSearchState): string {
  return state.view.kind === "detail" ? renderDetail(state.detail) : renderResults(state);
}
