import type { IOptionalBrowserSettings } from "happy-dom";
import { defineConfig } from "vitest/config";

// The end-to-end suite talks to a locally spawned service that does
// not emit CORS headers.
const happyDomSettings: IOptionalBrowserSettings = {
  fetch: { disableSameOriginPolicy: true },
};

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: { settings: happyDomSettings },
    },
    include: ["tests/**/*.test.ts"],
    testTimeout: 20000,
    hookTimeout: 30000,
  },
});
