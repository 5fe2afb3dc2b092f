/**
 * JSONL corpus loading with strict schema validation.
 *
 * One sample per line: graph topology as directed arc pairs (every arc
 * followed by its reverse), aligned edge attributes, per-node attributes,
 * ten appended knot features, and a scalar target.  Violations raise with
 * the offending line number.
 */

import { readFileSync } from "node:fs";

export interface GraphSample {
  name: string;
  base: string;
  crossings: number;
  numNodes: number;
  /** directed arcs; both directions of every undirected edge are present */
  edgeSrc: Int32Array;
  edgeDst: Int32Array;
  /** row-major [numEdges x 2]: alternation, activated distance */
  edgeAttr: Float64Array;
  /** row-major [numNodes x 2]: constant 1, normalized degree */
  nodeAttr: Float64Array;
  /** the ten appended knot features (already standardized by the emitter) */
  features: Float64Array;
  target: number;
  targetName: string;
}

export interface Manifest {
  count: number;
  splits: { mode: string; train: string[]; test: string[] };
  feature_standardization: { mean: number[]; std: number[] };
  [key: string]: unknown;
}

export interface Dataset {
  samples: GraphSample[];
  targetName: string;
}

function fail(line: number, message: string): never {
  throw new Error(`corpus line ${line}: ${message}`);
}

function asNumberArray(value: unknown, line: number, what: string): number[] {
  if (!Array.isArray(value) || value.some((x) => typeof x !== "number" || !Number.isFinite(x))) {
    fail(line, `${what} must be an array of finite numbers`);
  }
  return value as number[];
}

export function parseSample(obj: Record<string, unknown>, line: number): GraphSample {
  for (const key of ["name", "base", "crossings", "num_nodes", "edges", "edge_attr",
                     "node_attr", "features", "target", "target_name"]) {
    if (!(key in obj)) fail(line, `missing key ${key}`);
  }
  const numNodes = obj.num_nodes as number;
  if (!Number.isInteger(numNodes) || numNodes < 1) fail(line, "num_nodes must be a positive integer");
  const edges = obj.edges as unknown[];
  if (!Array.isArray(edges)) fail(line, "edges must be an array");
  const m = edges.length;
  if (m % 2 !== 0) fail(line, "directed arcs must come in forward/reverse pairs");
  const edgeSrc = new Int32Array(m);
  const edgeDst = new Int32Array(m);
  for (let e = 0; e < m; e++) {
    const pair = asNumberArray(edges[e], line, `edges[${e}]`);
    if (pair.length !== 2) fail(line, `edges[${e}] must be [src, dst]`);
    const [src, dst] = pair;
    if (!Number.isInteger(src) || !Number.isInteger(dst) || src < 0 || dst < 0
        || src >= numNodes || dst >= numNodes) {
      fail(line, `edges[${e}] index out of range for ${numNodes} nodes`);
    }
    edgeSrc[e] = src;
    edgeDst[e] = dst;
  }
  // every arc must be followed by its reverse (the emitter's contract)
  for (let e = 0; e < m; e += 2) {
    if (edgeSrc[e] !== edgeDst[e + 1] || edgeDst[e] !== edgeSrc[e + 1]) {
      fail(line, `arc ${e + 1} is not the reverse of arc ${e}`);
    }
  }
  const edgeAttrRows = obj.edge_attr as unknown[];
  if (!Array.isArray(edgeAttrRows) || edgeAttrRows.length !== m) {
    fail(line, "edge_attr must align with edges");
  }
  const edgeAttr = new Float64Array(2 * m);
  for (let e = 0; e < m; e++) {
    const row = asNumberArray(edgeAttrRows[e], line, `edge_attr[${e}]`);
    if (row.length !== 2) fail(line, `edge_attr[${e}] must have 2 entries`);
    edgeAttr[2 * e] = row[0];
    edgeAttr[2 * e + 1] = row[1];
  }
  const nodeAttrRows = obj.node_attr as unknown[];
  if (!Array.isArray(nodeAttrRows) || nodeAttrRows.length !== numNodes) {
    fail(line, "node_attr must have one row per node");
  }
  const nodeAttr = new Float64Array(2 * numNodes);
  for (let i = 0; i < numNodes; i++) {
    const row = asNumberArray(nodeAttrRows[i], line, `node_attr[${i}]`);
    if (row.length !== 2) fail(line, `node_attr[${i}] must have 2 entries`);
    nodeAttr[2 * i] = row[0];
    nodeAttr[2 * i + 1] = row[1];
  }
  const features = asNumberArray(obj.features, line, "features");
  if (features.length !== 10) fail(line, `expected 10 features, got ${features.length}`);
  const target = obj.target;
  if (typeof target !== "number" || !Number.isFinite(target)) fail(line, "target must be finite");
  return {
    name: String(obj.name),
    base: String(obj.base),
    crossings: Number(obj.crossings),
    numNodes,
    edgeSrc,
    edgeDst,
    edgeAttr,
    nodeAttr,
    features: Float64Array.from(features),
    target,
    targetName: String(obj.target_name),
  };
}

export function loadCorpus(path: string): Dataset {
  const text = readFileSync(path, "utf-8");
  const samples: GraphSample[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let obj: Record<string, unknown>;
    try {
      obj = JSON.parse(line) as Record<string, unknown>;
    } catch (exc) {
      fail(i + 1, `malformed JSON (${(exc as Error).message})`);
    }
    samples.push(parseSample(obj, i + 1));
  }
  if (samples.length === 0) throw new Error(`no samples in ${path}`);
  const targetName = samples[0].targetName;
  if (samples.some((s) => s.targetName !== targetName)) {
    throw new Error("mixed target names in one corpus");
  }
  return { samples, targetName };
}

export function loadManifest(path: string): Manifest {
  return JSON.parse(readFileSync(path, "utf-8")) as Manifest;
}

/** Partition samples by the manifest's base-knot split. */
export function splitByManifest(dataset: Dataset, manifest: Manifest): {
  train: GraphSample[];
  test: GraphSample[];
} {
  const trainBases = new Set(manifest.splits.train);
  const testBases = new Set(manifest.splits.test);
  const train = dataset.samples.filter((s) => trainBases.has(s.base));
  const test = dataset.samples.filter((s) => testBases.has(s.base));
  return { train, test };
}
