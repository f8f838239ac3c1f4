import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // The integration suite boots the real Python workbench server once per
    // file; give startup and teardown generous room.
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
