import { App } from "./app.js";

function boot(): void {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const app = new App(root);
  void app.start();
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
