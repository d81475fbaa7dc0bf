import { PassThrough } from "node:stream";
import { describe, expect, it } from "vitest";
import { Artifact, Model } from "../src/model";
import { ProtocolError, serve } from "../src/protocol";

function signModel(): Model {
  const artifact: Artifact = {
    format: "oracle/1",
    kind: "tree",
    class_labels: ["neg", "pos"],
    features: [{ name: "x", kind: "numeric" }],
    trees: [
      {
        feature: 0,
        threshold: 0.0,
        left: { label: "neg" },
        right: { label: "pos" },
      },
    ],
  };
  return new Model(artifact);
}

function collect(out: PassThrough): () => string {
  let buf = "";
  out.on("data", (chunk) => {
    buf += chunk.toString();
  });
  return () => buf;
}

const tick = () => new Promise((r) => setImmediate(r));

describe("serve", () => {
  it("answers batches in order and resolves on clean end-of-input", async () => {
    const input = new PassThrough();
    const output = new PassThrough();
    const read = collect(output);
    const done = serve(signModel(), input, output);

    input.write("3\n-1.0\n0.0\n2.5\n");
    await tick();
    expect(read()).toBe("neg\nneg\npos\n");

    input.write("2\n7\n-7\n");
    await tick();
    expect(read()).toBe("neg\nneg\npos\npos\nneg\n");

    input.end();
    await expect(done).resolves.toBeUndefined();
  });

  it("writes each batch before reading the next header", async () => {
    const input = new PassThrough();
    const output = new PassThrough();
    const read = collect(output);
    const done = serve(signModel(), input, output);

    input.write("1\n5.0\n");
    await tick();
    // The second batch has not been sent yet; the first answer is already out.
    expect(read()).toBe("pos\n");
    input.end("1\n-5.0\n");
    await done;
    expect(read()).toBe("pos\nneg\n");
  });

  it("treats a zero-row batch as a no-op and keeps serving", async () => {
    const input = new PassThrough();
    const output = new PassThrough();
    const read = collect(output);
    const done = serve(signModel(), input, output);

    input.write("0\n");
    await tick();
    expect(read()).toBe("");
    input.end("1\n1.0\n");
    await done;
    expect(read()).toBe("pos\n");
  });

  it("rejects on a malformed header", async () => {
    const input = new PassThrough();
    const output = new PassThrough();
    const done = serve(signModel(), input, output);
    input.write("three\n");
    await expect(done).rejects.toThrow(ProtocolError);
    await expect(done).rejects.toThrow(/bad batch header/);
  });

  it("rejects when input ends mid-batch", async () => {
    const input = new PassThrough();
    const output = new PassThrough();
    const done = serve(signModel(), input, output);
    input.end("3\n1.0\n");
    await expect(done).rejects.toThrow(/2 rows short/);
  });

  it("rejects on an unparseable row without writing a partial answer", async () => {
    const input = new PassThrough();
    const output = new PassThrough();
    const read = collect(output);
    const done = serve(signModel(), input, output);
    input.write("2\n1.0\nnot-a-number\n");
    await expect(done).rejects.toThrow(/not numeric/);
    expect(read()).toBe("");
  });
});
