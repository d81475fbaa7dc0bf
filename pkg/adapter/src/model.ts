import { readFileSync } from "node:fs";

export const NUMERIC = "numeric";
export const CATEGORICAL = "categorical";

export interface FeatureSpec {
  name: string;
  kind: string;
  categories?: string[];
}

interface LeafNode {
  label: string;
}

interface SplitNode {
  feature: number;
  threshold?: number;
  category?: string;
  left: TreeNode;
  right: TreeNode;
}

export type TreeNode = LeafNode | SplitNode;

export interface Artifact {
  format: string;
  kind: string;
  class_labels: string[];
  features: FeatureSpec[];
  trees: TreeNode[];
}

type Cell = number | string;

export class ModelError extends Error {}

function isLeaf(node: TreeNode): node is LeafNode {
  return "label" in node;
}

function checkTree(node: TreeNode, features: FeatureSpec[], labels: Set<string>): void {
  if (isLeaf(node)) {
    if (!labels.has(node.label)) {
      throw new ModelError(`leaf label ${JSON.stringify(node.label)} not in class_labels`);
    }
    return;
  }
  if (!Number.isInteger(node.feature) || node.feature < 0 || node.feature >= features.length) {
    throw new ModelError(`split references feature ${node.feature}, have ${features.length}`);
  }
  const kind = features[node.feature].kind;
  if (kind === NUMERIC && typeof node.threshold !== "number") {
    throw new ModelError(`numeric split on feature ${node.feature} lacks a threshold`);
  }
  if (kind === CATEGORICAL && typeof node.category !== "string") {
    throw new ModelError(`categorical split on feature ${node.feature} lacks a category`);
  }
  if (node.left == null || node.right == null) {
    throw new ModelError(`split on feature ${node.feature} is missing a child`);
  }
  checkTree(node.left, features, labels);
  checkTree(node.right, features, labels);
}

function evalTree(node: TreeNode, cells: Cell[]): string {
  let cur = node;
  while (!isLeaf(cur)) {
    const v = cells[cur.feature];
    const goLeft =
      cur.threshold !== undefined ? (v as number) <= cur.threshold : v === cur.category;
    cur = goLeft ? cur.left : cur.right;
  }
  return cur.label;
}

/**
 * Evaluator for the "oracle/1" model artifact.
 *
 * Numeric splits route left when value <= threshold; categorical splits route
 * left on equality with the named category. A forest predicts by majority
 * vote, ties going to the earlier entry of class_labels.
 */
export class Model {
  readonly classLabels: string[];
  readonly features: FeatureSpec[];
  private trees: TreeNode[];
  private labelIndex: Map<string, number>;

  constructor(artifact: Artifact) {
    if (artifact.format !== "oracle/1") {
      throw new ModelError(`unsupported artifact format ${JSON.stringify(artifact.format)}`);
    }
    if (artifact.kind !== "tree" && artifact.kind !== "forest") {
      throw new ModelError(`unsupported model kind ${JSON.stringify(artifact.kind)}`);
    }
    if (!Array.isArray(artifact.class_labels) || artifact.class_labels.length === 0) {
      throw new ModelError("artifact has no class_labels");
    }
    if (!Array.isArray(artifact.trees) || artifact.trees.length === 0) {
      throw new ModelError("artifact has no trees");
    }
    for (const f of artifact.features) {
      if (f.kind !== NUMERIC && f.kind !== CATEGORICAL) {
        throw new ModelError(`feature ${JSON.stringify(f.name)} has unknown kind ${f.kind}`);
      }
    }
    this.classLabels = artifact.class_labels;
    this.features = artifact.features;
    this.trees = artifact.trees;
    this.labelIndex = new Map(this.classLabels.map((c, i) => [c, i]));
    const known = new Set(this.classLabels);
    for (const root of this.trees) {
      checkTree(root, this.features, known);
    }
  }

  /** Parse one CSV line (schema order, no quoting) into typed cells. */
  parseRow(line: string): Cell[] {
    const parts = line.split(",");
    if (parts.length !== this.features.length) {
      throw new ModelError(
        `row has ${parts.length} cells, schema has ${this.features.length}: ${JSON.stringify(line)}`
      );
    }
    return parts.map((raw, j) => {
      if (this.features[j].kind === CATEGORICAL) {
        return raw;
      }
      const v = Number(raw);
      if (raw.trim() === "" || Number.isNaN(v)) {
        throw new ModelError(`cell ${JSON.stringify(raw)} is not numeric (feature ${this.features[j].name})`);
      }
      return v;
    });
  }

  predict(cells: Cell[]): string {
    const counts = new Array(this.classLabels.length).fill(0);
    for (const root of this.trees) {
      counts[this.labelIndex.get(evalTree(root, cells))!] += 1;
    }
    let best = 0;
    for (let i = 1; i < counts.length; i++) {
      if (counts[i] > counts[best]) {
        best = i;
      }
    }
    return this.classLabels[best];
  }

  predictCsv(line: string): string {
    return this.predict(this.parseRow(line));
  }
}

export function loadModel(path: string): Model {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (e) {
    throw new ModelError(`cannot read model artifact ${path}: ${(e as Error).message}`);
  }
  let doc: Artifact;
  try {
    doc = JSON.parse(text);
  } catch (e) {
    throw new ModelError(`model artifact ${path} is not valid JSON: ${(e as Error).message}`);
  }
  return new Model(doc);
}
