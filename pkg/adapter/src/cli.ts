import { parseArgs } from "node:util";
import { loadModel, Model } from "./model";
import { serve } from "./protocol";

// Exit codes follow the parent tool's convention: 0 success, 2 usage error,
// 1 runtime failure. Failures set process.exitCode instead of calling
// process.exit() so pending pipe writes drain before the process dies.
function main(): void {
  let modelPath: string | undefined;
  try {
    const { values } = parseArgs({ options: { model: { type: "string" } } });
    modelPath = values.model;
  } catch {
    modelPath = undefined;
  }
  if (!modelPath) {
    process.stderr.write("usage: cli.js --model <artifact.json>\n");
    process.exitCode = 2;
    return;
  }

  let model: Model;
  try {
    model = loadModel(modelPath);
  } catch (e) {
    process.stderr.write(`adapter: ${(e as Error).message}\n`);
    process.exitCode = 1;
    return;
  }

  serve(model, process.stdin, process.stdout).catch((e: Error) => {
    process.stderr.write(`adapter: ${e.message}\n`);
    process.exitCode = 1;
    process.stdin.destroy();
  });
}

main();
