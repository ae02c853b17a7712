/** Spawning the compute core's CLI. */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/**
 * Command used to reach the CLI. Override with SKETCHLAB_BIN (whitespace
 * separated, e.g. "python3 -m sketchlab.cli"); defaults to the installed
 * `sketchlab` entry point.
 */
export function cliCommand(): string[] {
  const env = process.env.SKETCHLAB_BIN;
  if (env && env.trim()) return env.trim().split(/\s+/);
  return ["sketchlab"];
}

export function runCli(args: string[]): void {
  const [cmd, ...head] = cliCommand();
  const res = spawnSync(cmd, [...head, ...args], {
    encoding: "utf8",
    maxBuffer: 1 << 26,
  });
  if (res.error) throw res.error;
  if (res.status !== 0) {
    throw new Error(`sketchlab ${args[0]} failed (exit ${res.status}): ${res.stderr}`);
  }
}

/** Run fn with a private scratch directory, always cleaned up. */
export function withScratch<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "sketchlab-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}
