import readline from "node:readline";
import { Readable, Writable } from "node:stream";
import { Model } from "./model";

export class ProtocolError extends Error {}

/**
 * Serve the batch prediction protocol until the input stream closes.
 *
 * Each exchange: one header line with the row count N, then N CSV lines in
 * schema order. The response is exactly N label lines, written before the
 * next header is read. A zero-row batch produces no output and the loop
 * continues. The promise resolves on clean end-of-input at a batch boundary
 * and rejects on a malformed header or a truncated batch.
 */
export function serve(model: Model, input: Readable, output: Writable): Promise<void> {
  const rl = readline.createInterface({ input, terminal: false });
  return new Promise((resolve, reject) => {
    let pending = 0;
    let rows: string[] = [];
    let failed: Error | null = null;

    const fail = (err: Error) => {
      failed = err;
      rl.close();
    };

    rl.on("line", (line) => {
      if (failed) {
        return;
      }
      try {
        if (pending === 0) {
          if (!/^\d+$/.test(line)) {
            throw new ProtocolError(`bad batch header ${JSON.stringify(line)}`);
          }
          pending = parseInt(line, 10);
          rows = [];
        } else {
          rows.push(line);
          pending -= 1;
          if (pending === 0) {
            const labels = rows.map((r) => model.predictCsv(r));
            output.write(labels.map((l) => l + "\n").join(""));
          }
        }
      } catch (e) {
        fail(e as Error);
      }
    });
    rl.on("close", () => {
      if (failed) {
        reject(failed);
      } else if (pending > 0) {
        reject(new ProtocolError(`input ended ${pending} rows short of a full batch`));
      } else {
        resolve();
      }
    });
  });
}
