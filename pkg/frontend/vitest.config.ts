import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // The integration suite boots a real gateway process.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
