/**
 * Orchestration: read one source directory, convert, and write the corpus
 * JSON plus the embedding sidecar. Output files are written atomically
 * (temp file + rename) so a crash never leaves a half-written artifact.
 */

import { mkdirSync, renameSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { convertCorpus, headLemma, sidecarEntries } from "./convert.js";
import type { CorpusJson } from "./schema.js";
import { ExportError } from "./schema.js";
import { readStandoffCorpus, type SourceCorpus } from "./standoff.js";
import { loadToolsConfig, runTool } from "./tools.js";
import { stubVector } from "./vectors.js";

export interface ExportJob {
  mode: "full" | "stub";
  source: string;
  inDir: string;
  outDir: string;
  /** Stub vector dimension. */
  dim: number;
  /** Stub vector seed. */
  seed: number;
  /** Path to the tool commands JSON; required in full mode. */
  tools?: string;
  log?: (message: string) => void;
}

export interface ExportResult {
  corpusPath: string;
  storePath: string;
  documents: number;
  vectors: number;
}

const SOURCE_READERS: Record<string, (dir: string) => SourceCorpus> = {
  standoff: readStandoffCorpus,
};

function atomicWrite(path: string, content: string): void {
  const tmp = `${path}.tmp`;
  writeFileSync(tmp, content, "utf8");
  renameSync(tmp, path);
}

function fullModeConvert(source: SourceCorpus, toolsPath: string, log: (m: string) => void) {
  const tools = loadToolsConfig(toolsPath);

  // First pass with stub lemmas just to locate spans, then overwrite the
  // lemma of every action mention with the lemmatizer's answer.
  const corpus = convertCorpus(source, { lemmaOf: (_d, _e, text) => headLemma(text), log });
  const requests: { id: string; text: string }[] = [];
  for (const doc of corpus.documents) {
    for (const m of doc.mentions) {
      if (m.kind !== "action") continue;
      const text = doc.sentences[m.sentence].slice(m.token_span[0], m.token_span[1]).join(" ");
      requests.push({ id: `${doc.doc_id}/${m.mention_id}`, text });
    }
  }
  const lemmas = runTool("lemmatizer", tools.lemmatizer, requests);
  for (const doc of corpus.documents) {
    for (const m of doc.mentions) {
      if (m.kind !== "action") continue;
      const lemma = lemmas.get(`${doc.doc_id}/${m.mention_id}`)!.lemma;
      if (typeof lemma !== "string" || lemma === "") {
        throw new ExportError(`lemmatizer returned no usable lemma for ${doc.doc_id}/${m.mention_id}`);
      }
      m.lemma = lemma;
    }
  }

  const entries = sidecarEntries(corpus);
  const encoded = runTool("encoder", tools.encoder, entries.map((e) => ({ id: e.key, text: e.text })));
  const vectorOf = (key: string): number[] => {
    const vector = encoded.get(key)!.vector;
    if (!Array.isArray(vector) || vector.length === 0 || !vector.every((x: unknown) => typeof x === "number")) {
      throw new ExportError(`encoder returned a bad vector for ${JSON.stringify(key)}`);
    }
    return vector;
  };
  return { corpus, vectorOf };
}

export function runExport(job: ExportJob): ExportResult {
  const log = job.log ?? ((m) => console.error(m));
  const reader = SOURCE_READERS[job.source];
  if (reader === undefined) {
    throw new ExportError(
      `unknown source format ${JSON.stringify(job.source)}; known: ${Object.keys(SOURCE_READERS).join(", ")}`,
    );
  }
  const source = reader(job.inDir);

  let corpus: CorpusJson;
  let vectorOf: (key: string) => number[];
  if (job.mode === "stub") {
    corpus = convertCorpus(source, { lemmaOf: (_d, _e, text) => headLemma(text), log });
    vectorOf = (key) => stubVector(key, job.seed, job.dim);
  } else if (job.mode === "full") {
    if (job.tools === undefined) throw new ExportError("full mode needs --tools pointing at the tool commands JSON");
    ({ corpus, vectorOf } = fullModeConvert(source, job.tools, log));
  } else {
    throw new ExportError(`mode must be "full" or "stub", got ${JSON.stringify(job.mode)}`);
  }

  const entries = sidecarEntries(corpus);
  let dim = -1;
  const lines = entries.map((e) => {
    const vector = vectorOf(e.key);
    if (dim === -1) dim = vector.length;
    else if (vector.length !== dim) {
      throw new ExportError(`vector for ${e.key} has dimension ${vector.length}, expected ${dim}`);
    }
    return JSON.stringify({ key: e.key, vector });
  });

  mkdirSync(job.outDir, { recursive: true });
  const corpusPath = join(job.outDir, "corpus.json");
  const storePath = join(job.outDir, "store.jsonl");
  atomicWrite(corpusPath, JSON.stringify(corpus, null, 2) + "\n");
  atomicWrite(storePath, lines.join("\n") + "\n");
  return { corpusPath, storePath, documents: corpus.documents.length, vectors: entries.length };
}
