/// <reference types="vitest" />
import { defineConfig } from "vite";

// The dev server proxies API calls to a locally running `jobrank serve`
// (default port 8000; override with JOBRANK_API).
const apiTarget = process.env.JOBRANK_API ?? "http://localhost:8000";

export default defineConfig({
  server: {
    proxy: Object.fromEntries(
      ["/search", "/profiles", "/jobs", "/graph", "/config", "/healthz"].map(
        (path) => [path, { target: apiTarget, changeOrigin: true }],
      ),
    ),
  },
  test: {
    environment: "jsdom",
    include: ["test/**/*.test.ts"],
  },
});
