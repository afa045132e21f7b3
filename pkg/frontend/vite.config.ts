import { defineConfig } from "vitest/config";

export default defineConfig({
  build: { outDir: "dist" },
  // `doris serve --bind 127.0.0.1:8765` during development; production
  // builds are served by the service itself via --static frontend/dist.
  server: { proxy: { "/api": "http://127.0.0.1:8765" } },
  test: { environment: "jsdom" },
});
