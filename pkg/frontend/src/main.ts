/** Browser entry point. */

import { mount } from "./app.js";

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", () => {
    mount();
  });
} else {
  mount();
}
