import { spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import path from "node:path";
import { describe, expect, it } from "vitest";
import { Artifact } from "../src/model";

const CLI = path.join(__dirname, "..", "dist", "cli.js");

interface RunResult {
  code: number | null;
  stdout: string;
  stderr: string;
}

function runCli(args: string[], input: string): Promise<RunResult> {
  return new Promise((resolve, reject) => {
    const child = spawn("node", [CLI, ...args], { stdio: ["pipe", "pipe", "pipe"] });
    let stdout = "";
    let stderr = "";
    child.stdout.on("data", (c) => (stdout += c.toString()));
    child.stderr.on("data", (c) => (stderr += c.toString()));
    child.on("error", reject);
    child.on("close", (code) => resolve({ code, stdout, stderr }));
    child.stdin.write(input);
    child.stdin.end();
  });
}

function writeArtifact(): string {
  const artifact: Artifact = {
    format: "oracle/1",
    kind: "forest",
    class_labels: ["cool", "warm"],
    features: [
      { name: "x", kind: "numeric" },
      { name: "color", kind: "categorical", categories: ["red", "blue"] },
    ],
    trees: [
      {
        feature: 0,
        threshold: 2.0,
        left: { label: "cool" },
        right: {
          feature: 1,
          category: "blue",
          left: { label: "cool" },
          right: { label: "warm" },
        },
      },
      {
        feature: 0,
        threshold: 3.5,
        left: { label: "cool" },
        right: { label: "warm" },
      },
      { label: "warm" },
    ],
  };
  const dir = mkdtempSync(path.join(tmpdir(), "adapter-test-"));
  const file = path.join(dir, "model.json");
  writeFileSync(file, JSON.stringify(artifact));
  return file;
}

describe("cli", () => {
  it("serves batches and exits 0 when the input stream closes", async () => {
    const model = writeArtifact();
    // Tree votes for 4.0,red: warm (>2, not blue), warm (>3.5), warm.
    // For 1.0,red: cool, cool, warm -> cool. For 2.5,blue: cool, cool, warm.
    const input = "2\n4.0,red\n1.0,red\n1\n2.5,blue\n";
    const res = await runCli(["--model", model], input);
    expect(res.stderr).toBe("");
    expect(res.code).toBe(0);
    expect(res.stdout).toBe("warm\ncool\ncool\n");
  });

  it("handles an empty batch", async () => {
    const model = writeArtifact();
    const res = await runCli(["--model", model], "0\n");
    expect(res.code).toBe(0);
    expect(res.stdout).toBe("");
  });

  it("exits 2 without a --model flag", async () => {
    const res = await runCli([], "");
    expect(res.code).toBe(2);
    expect(res.stderr).toContain("usage:");
  });

  it("exits 1 on an unreadable artifact", async () => {
    const res = await runCli(["--model", "/nonexistent/model.json"], "");
    expect(res.code).toBe(1);
    expect(res.stderr).toContain("cannot read model artifact");
  });

  it("exits 1 with a diagnostic on a malformed header", async () => {
    const model = writeArtifact();
    const res = await runCli(["--model", model], "not-a-count\n");
    expect(res.code).toBe(1);
    expect(res.stderr).toContain("bad batch header");
  });
});
