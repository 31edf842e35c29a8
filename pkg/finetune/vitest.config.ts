import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    testTimeout: 120_000,
    // tfjs keeps global state; parallel files would race on the backend
    fileParallelism: false,
  },
});
