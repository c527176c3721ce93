/** DOM bootstrap: wires the static form to the controller and repaints the
 * banner/validation/content regions on every state change. */

import { ApiClient } from "./api.js";
import { SearchController } from "./controller.js";
import type { SearchMode } from "./state.js";
import { renderBanner, renderContent, renderValidation } from "./views.js";

export function mount(root: Document = document): SearchController {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = root.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el as T;
  };

  const form = byId<HTMLFormElement>("search-form");
  const queryInput = byId<HTMLInputElement>("query");
  const modeSelect = byId<HTMLSelectElement>("mode");
  const kInput = byId<HTMLInputElement>("param-k");
  const nInput = byId<HTMLInputElement>("param-n");
  const imageInput = byId<HTMLInputElement>("image-input");
  const bannerRegion = byId<HTMLElement>("banner");
  const validationRegion = byId<HTMLElement>("validation");
  const contentRegion = byId<HTMLElement>("content");

  const api = new ApiClient();
  const controller = new SearchController(api, (state) => {
    bannerRegion.innerHTML = renderBanner(state.banner);
    validationRegion.innerHTML = renderValidation(state.validation);
    contentRegion.innerHTML = renderContent(state);
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    controller.setMode(modeSelect.value as SearchMode);
    controller.setK(Number(kInput.value));
    controller.setN(Number(nInput.value));
    void controller.submitSearch(queryInput.value);
  });

  imageInput.addEventListener("change", () => {
    const file = imageInput.files?.[0];
    if (file) {
      controller.setK(Number(kInput.value));
      controller.setN(Number(nInput.value));
      void controller.submitImage(file);
    }
    imageInput.value = "";
  });

  byId<HTMLElement>("app").addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-code],[data-action]");
    if (!target) return;
    const code = target.dataset.code;
    if (code) {
      event.preventDefault();
      void controller.openNotation(code);
    } else if (target.dataset.action === "back") {
      event.preventDefault();
      controller.back();
    } else if (target.dataset.action === "dismiss") {
      event.preventDefault();
      controller.dismissBanner();
    }
  });

  return controller;
}
