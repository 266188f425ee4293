// Spawns a real annotation server (the Python package) on a free-ish port
// with a fresh flow-test dataset; used by the end-to-end UI test.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));

export interface RunningServer {
  base: string;
  stop(): void;
}

export async function startServer(): Promise<RunningServer> {
  const dir = mkdtempSync(join(tmpdir(), "annotator-flow-"));
  const made = spawnSync("python3", [join(HERE, "make_dataset.py"), dir], { encoding: "utf-8" });
  if (made.status !== 0) {
    throw new Error(`make_dataset.py failed: ${made.stderr}`);
  }
  const port = 8300 + Math.floor(Math.random() * 600);
  const base = `http://127.0.0.1:${port}`;
  // the UI is served from the API's own origin in production; mirror that
  // here so happy-dom's same-origin policy lets requests through
  (globalThis as any).window?.happyDOM?.setURL?.(base);
  const proc: ChildProcess = spawn(
    "python3",
    [
      "-m",
      "rumourkit.cli",
      "serve",
      "--threads-dir",
      join(dir, "threads"),
      "--log",
      join(dir, "annotations.log"),
      "--port",
      String(port),
    ],
    { stdio: "ignore" },
  );
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const probe = await fetch(`${base}/api/days`);
      if (probe.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      proc.kill();
      throw new Error("annotation server did not come up");
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  return { base, stop: () => void proc.kill() };
}
