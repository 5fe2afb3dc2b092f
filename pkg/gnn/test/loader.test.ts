import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { loadCorpus, loadManifest, parseSample, splitByManifest } from "../src/loader.js";

const CORPUS = new URL("../testdata/corpus.jsonl", import.meta.url).pathname;
const MANIFEST = new URL("../testdata/corpus.jsonl.manifest.json", import.meta.url).pathname;

function validSampleObj(): Record<string, unknown> {
  return {
    name: "k#v0",
    base: "k",
    seed: 1,
    crossings: 1,
    num_nodes: 3,
    edges: [[0, 1], [1, 0], [1, 2], [2, 1]],
    edge_attr: [[1, 0.5], [1, 0.5], [-1, 0.25], [-1, 0.25]],
    node_attr: [[1, 1], [1, 0.5], [1, 1]],
    features: [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    target: 3,
    target_name: "determinant",
  };
}

describe("corpus loading", () => {
  it("loads the committed corpus", () => {
    const ds = loadCorpus(CORPUS);
    expect(ds.samples.length).toBe(500);
    expect(ds.targetName).toBe("determinant");
    const sample = ds.samples[0];
    expect(sample.edgeSrc.length % 2).toBe(0);
    expect(sample.features.length).toBe(10);
  });

  it("splits by the manifest's base knots without leakage", () => {
    const ds = loadCorpus(CORPUS);
    const manifest = loadManifest(MANIFEST);
    const { train, test } = splitByManifest(ds, manifest);
    expect(train.length + test.length).toBe(500);
    const trainBases = new Set(train.map((s) => s.base));
    for (const s of test) {
      expect(trainBases.has(s.base)).toBe(false);
    }
  });

  it("accepts a well-formed sample", () => {
    expect(() => parseSample(validSampleObj(), 1)).not.toThrow();
  });

  it("rejects out-of-range edge indices with the line number", () => {
    const obj = validSampleObj();
    (obj.edges as number[][])[2] = [1, 9];
    (obj.edges as number[][])[3] = [9, 1];
    expect(() => parseSample(obj, 17)).toThrow(/line 17.*out of range/);
  });

  it("rejects a missing reverse arc", () => {
    const obj = validSampleObj();
    obj.edges = [[0, 1], [1, 2], [1, 0], [2, 1]];
    expect(() => parseSample(obj, 4)).toThrow(/reverse/);
  });

  it("rejects attribute arity mismatches", () => {
    const obj = validSampleObj();
    (obj.edge_attr as number[][])[1] = [1];
    expect(() => parseSample(obj, 2)).toThrow(/2 entries/);
  });

  it("rejects a wrong feature count", () => {
    const obj = validSampleObj();
    obj.features = [1, 2, 3];
    expect(() => parseSample(obj, 3)).toThrow(/10 features/);
  });

  it("reports malformed JSON lines", () => {
    const dir = mkdtempSync(join(tmpdir(), "corpus-"));
    const path = join(dir, "bad.jsonl");
    writeFileSync(path, JSON.stringify(validSampleObj()) + "\n{not json\n");
    expect(() => loadCorpus(path)).toThrow(/line 2.*malformed JSON/);
  });
});
