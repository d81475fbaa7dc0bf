import { describe, expect, it } from "vitest";
import { Artifact, Model, ModelError } from "../src/model";

function stumpArtifact(): Artifact {
  return {
    format: "oracle/1",
    kind: "tree",
    class_labels: ["low", "high"],
    features: [{ name: "x", kind: "numeric" }],
    trees: [
      {
        feature: 0,
        threshold: 2.5,
        left: { label: "low" },
        right: { label: "high" },
      },
    ],
  };
}

describe("tree evaluation", () => {
  it("routes numeric splits left on value <= threshold", () => {
    const m = new Model(stumpArtifact());
    expect(m.predict([2.4])).toBe("low");
    expect(m.predict([2.5])).toBe("low");
    expect(m.predict([2.5000001])).toBe("high");
  });

  it("routes categorical splits left on equality", () => {
    const m = new Model({
      format: "oracle/1",
      kind: "tree",
      class_labels: ["a", "b"],
      features: [{ name: "color", kind: "categorical", categories: ["red", "blue"] }],
      trees: [
        {
          feature: 0,
          category: "red",
          left: { label: "a" },
          right: { label: "b" },
        },
      ],
    });
    expect(m.predict(["red"])).toBe("a");
    expect(m.predict(["blue"])).toBe("b");
    expect(m.predict(["mauve"])).toBe("b");
  });

  it("handles a constant tree", () => {
    const m = new Model({
      format: "oracle/1",
      kind: "tree",
      class_labels: ["only"],
      features: [{ name: "x", kind: "numeric" }],
      trees: [{ label: "only" }],
    });
    expect(m.predict([123.0])).toBe("only");
  });
});

describe("forest voting", () => {
  function constantForest(labels: string[]): Model {
    return new Model({
      format: "oracle/1",
      kind: "forest",
      class_labels: ["a", "b", "c"],
      features: [{ name: "x", kind: "numeric" }],
      trees: labels.map((l) => ({ label: l })),
    });
  }

  it("majority wins", () => {
    expect(constantForest(["b", "b", "a"]).predict([0])).toBe("b");
  });

  it("vote ties go to the earlier class label", () => {
    expect(constantForest(["b", "a"]).predict([0])).toBe("a");
    expect(constantForest(["c", "b"]).predict([0])).toBe("b");
    expect(constantForest(["c", "b", "c", "b"]).predict([0])).toBe("b");
  });
});

describe("row parsing", () => {
  it("types cells by feature kind", () => {
    const m = new Model({
      format: "oracle/1",
      kind: "tree",
      class_labels: ["a", "b"],
      features: [
        { name: "x", kind: "numeric" },
        { name: "color", kind: "categorical", categories: ["red", "blue"] },
      ],
      trees: [
        {
          feature: 0,
          threshold: 1.5,
          left: { label: "a" },
          right: {
            feature: 1,
            category: "red",
            left: { label: "a" },
            right: { label: "b" },
          },
        },
      ],
    });
    expect(m.predictCsv("0.5,blue")).toBe("a");
    expect(m.predictCsv("3.0,red")).toBe("a");
    expect(m.predictCsv("3.0,blue")).toBe("b");
  });

  it("rejects a wrong cell count", () => {
    const m = new Model(stumpArtifact());
    expect(() => m.predictCsv("1.0,extra")).toThrow(ModelError);
  });

  it("rejects a non-numeric cell for a numeric feature", () => {
    const m = new Model(stumpArtifact());
    expect(() => m.predictCsv("abc")).toThrow(/not numeric/);
    expect(() => m.predictCsv("")).toThrow(/not numeric/);
  });

  it("round-trips float cells exactly", () => {
    const m = new Model(stumpArtifact());
    // repr() of a Python float is the shortest string that parses back to
    // the same double, so Number() must land on the identical value.
    expect(m.predictCsv("2.5")).toBe("low");
    expect(m.predictCsv("2.5000000000000004")).toBe("high");
  });
});

describe("artifact validation", () => {
  it("rejects unknown formats and kinds", () => {
    expect(() => new Model({ ...stumpArtifact(), format: "oracle/2" })).toThrow(ModelError);
    expect(() => new Model({ ...stumpArtifact(), kind: "linear" })).toThrow(ModelError);
  });

  it("rejects an empty model", () => {
    expect(() => new Model({ ...stumpArtifact(), trees: [] })).toThrow(/no trees/);
    expect(() => new Model({ ...stumpArtifact(), class_labels: [] })).toThrow(/no class_labels/);
  });

  it("rejects unknown leaf labels and bad feature indices", () => {
    const bad = stumpArtifact();
    (bad.trees[0] as { left: { label: string } }).left.label = "mystery";
    expect(() => new Model(bad)).toThrow(/not in class_labels/);

    const oob = stumpArtifact();
    (oob.trees[0] as { feature: number }).feature = 7;
    expect(() => new Model(oob)).toThrow(/feature 7/);
  });

  it("rejects unknown feature kinds", () => {
    const bad = stumpArtifact();
    bad.features[0].kind = "ordinal";
    expect(() => new Model(bad)).toThrow(/unknown kind/);
  });
});
