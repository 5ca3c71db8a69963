import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { runExport, type ExportJob } from "../src/export.js";
import { main } from "../src/cli.js";
import type { CorpusJson } from "../src/schema.js";

const TOY = fileURLToPath(new URL("../fixtures/toy", import.meta.url));
const FAKE_TOOLS = fileURLToPath(new URL("./fake_tools", import.meta.url));

function freshDir(): string {
  return mkdtempSync(join(tmpdir(), "export-"));
}

function stubJob(outDir: string, extra: Partial<ExportJob> = {}): ExportJob {
  return { mode: "stub", source: "standoff", inDir: TOY, outDir, dim: 16, seed: 0, log: () => {}, ...extra };
}

function writeToolsConfig(overrides: Partial<Record<"lemmatizer" | "encoder", string>> = {}): string {
  const path = join(freshDir(), "tools.json");
  writeFileSync(path, JSON.stringify({
    lemmatizer: `node ${join(FAKE_TOOLS, "lemmatizer.cjs")}`,
    encoder: `node ${join(FAKE_TOOLS, "encoder.cjs")}`,
    ...overrides,
  }));
  return path;
}

describe("stub export", () => {
  it("writes a corpus and sidecar byte-identical across reruns", () => {
    const a = freshDir();
    const b = freshDir();
    const first = runExport(stubJob(a));
    const second = runExport(stubJob(b));
    expect(readFileSync(second.corpusPath)).toEqual(readFileSync(first.corpusPath));
    expect(readFileSync(second.storePath)).toEqual(readFileSync(first.storePath));
  });

  it("changes the sidecar when the seed changes, but not the corpus", () => {
    const a = runExport(stubJob(freshDir()));
    const b = runExport(stubJob(freshDir(), { seed: 1 }));
    expect(readFileSync(b.corpusPath)).toEqual(readFileSync(a.corpusPath));
    expect(readFileSync(b.storePath)).not.toEqual(readFileSync(a.storePath));
  });

  it("emits one vector per mention and sentence at the requested dimension", () => {
    const result = runExport(stubJob(freshDir(), { dim: 5 }));
    const corpus = JSON.parse(readFileSync(result.corpusPath, "utf8")) as CorpusJson;
    const lines = readFileSync(result.storePath, "utf8").trim().split("\n").map((l) => JSON.parse(l));
    const expected = corpus.documents.reduce((n, d) => n + d.sentences.length + d.mentions.length, 0);
    expect(lines).toHaveLength(expected);
    for (const record of lines) {
      expect(record.vector).toHaveLength(5);
      expect(Math.abs(Math.hypot(...record.vector) - 1)).toBeLessThan(1e-6);
    }
  });

  it("rejects an unknown source format", () => {
    expect(() => runExport(stubJob(freshDir(), { source: "conll" }))).toThrow(/unknown source format/);
  });
});

describe("contract with the consuming toolkit", () => {
  it("stub output loads through load_corpus and the stats command", () => {
    const result = runExport(stubJob(freshDir()));
    const stdout = execFileSync("python3", ["-m", "cdcrkit", "stats", "--corpus", result.corpusPath], {
      encoding: "utf8",
    });
    const stats = Object.fromEntries(stdout.trim().split("\n").map((line) => line.split("\t")));
    expect(stats.corpus_id).toBe("storm-toy");
    expect(stats.documents).toBe("2");
    expect(stats.event_mentions).toBe("6");
    expect(stats["links[cross-subtopic]"]).toBe("1");
  });

  it("stub sidecar loads through load_vector_store", () => {
    const result = runExport(stubJob(freshDir()));
    const script =
      "import sys\n" +
      "from cdcrkit.features import load_vector_store\n" +
      "s = load_vector_store(sys.argv[1])\n" +
      "print(s.dim, len(s.vectors))\n";
    const stdout = execFileSync("python3", ["-c", script, result.storePath], { encoding: "utf8" });
    expect(stdout.trim()).toBe("16 23");
  });
});

describe("full mode", () => {
  it("takes lemmas and vectors from the configured tools", () => {
    const result = runExport(stubJob(freshDir(), { mode: "full", tools: writeToolsConfig() }));
    const corpus = JSON.parse(readFileSync(result.corpusPath, "utf8")) as CorpusJson;
    const struck = corpus.documents[0].mentions.find((m) => m.mention_id === "e1")!;
    expect(struck.lemma).toBe("tool:struck");
    const lines = readFileSync(result.storePath, "utf8").trim().split("\n").map((l) => JSON.parse(l));
    expect(lines[0].vector).toHaveLength(4);
    expect(lines[0].vector[1]).toBe(1);
  });

  it("needs a tools config", () => {
    expect(() => runExport(stubJob(freshDir(), { mode: "full" }))).toThrow(/--tools/);
    const incomplete = join(freshDir(), "tools.json");
    writeFileSync(incomplete, JSON.stringify({ lemmatizer: "x" }));
    expect(() => runExport(stubJob(freshDir(), { mode: "full", tools: incomplete }))).toThrow(/encoder command/);
  });

  it("surfaces a crashing tool with its stage name", () => {
    const tools = writeToolsConfig({
      lemmatizer: `FAIL_AFTER=2 node ${join(FAKE_TOOLS, "lemmatizer.cjs")}`,
    });
    expect(() => runExport(stubJob(freshDir(), { mode: "full", tools }))).toThrow(/lemmatizer exited with status 3/);
  });

  it("detects a tool that skips a request", () => {
    const tools = writeToolsConfig({
      encoder: `DROP_ID=landfall0/e1 node ${join(FAKE_TOOLS, "encoder.cjs")}`,
    });
    expect(() => runExport(stubJob(freshDir(), { mode: "full", tools }))).toThrow(/no response for "landfall0\/e1"/);
  });
});

describe("cli", () => {
  it("runs a stub export end to end", () => {
    const out = freshDir();
    const code = main(["export", "--mode", "stub", "--source", "standoff", "--in", TOY, "--out", out, "--dim", "8", "--seed", "3"]);
    expect(code).toBe(0);
    const corpus = JSON.parse(readFileSync(join(out, "corpus.json"), "utf8"));
    expect(corpus.corpus_id).toBe("storm-toy");
    expect(JSON.parse(readFileSync(join(out, "store.jsonl"), "utf8").split("\n")[0]).vector).toHaveLength(8);
  });

  it.each([
    [[]],
    [["export", "--mode", "stub", "--source", "standoff", "--in", "x"]],
    [["export", "--mode", "sideways", "--source", "standoff", "--in", "x", "--out", "y"]],
    [["export", "--mode", "stub", "--source", "standoff", "--in", "x", "--out", "y", "--dim", "-3"]],
  ])("rejects bad arguments %j", (argv) => {
    expect(main(argv as string[])).toBe(2);
  });

  it("reports export failures as exit code 1", () => {
    expect(main(["export", "--mode", "stub", "--source", "nope", "--in", TOY, "--out", freshDir()])).toBe(1);
  });
});
