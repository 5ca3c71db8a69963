/**
 * Reader for the standoff source format: one directory holding a
 * manifest.json plus a .txt/.ann pair per document.
 *
 * The .txt file is plain text, one sentence per non-empty line, in source
 * order; if the source has a title line it is simply the first sentence.
 * The .ann file addresses the text by character offsets (counting newlines),
 * tab-separated, one record per line:
 *
 *   E <id> <start> <end> <cluster>     event trigger; cluster "_" = singleton
 *   R <event_id> <label> <start> <end> role span of an event (SRL label)
 *   X <start> <end> [value]            temporal expression, optional TIMEX3 value
 *
 * Lines starting with "#" are comments.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { ExportError } from "./schema.js";

export interface Token {
  text: string;
  start: number;
  end: number;
}

export interface SourceEvent {
  id: string;
  start: number;
  end: number;
  cluster: string | null;
}

export interface SourceRole {
  event: string;
  label: string;
  start: number;
  end: number;
}

export interface SourceTimex {
  start: number;
  end: number;
  value?: string;
}

export interface SourceDocument {
  docId: string;
  topic: string;
  subtopic: string;
  publishDate?: string;
  text: string;
  sentences: Token[][];
  events: SourceEvent[];
  roles: SourceRole[];
  timexes: SourceTimex[];
}

export interface SourceCorpus {
  corpusId: string;
  documents: SourceDocument[];
}

const PUBLISH_DATE = /^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}$/;

export function tokenize(text: string): Token[][] {
  const sentences: Token[][] = [];
  let offset = 0;
  for (const line of text.split("\n")) {
    const tokens: Token[] = [];
    for (const m of line.matchAll(/\S+/g)) {
      tokens.push({ text: m[0], start: offset + m.index, end: offset + m.index + m[0].length });
    }
    if (tokens.length > 0) sentences.push(tokens);
    offset += line.length + 1;
  }
  return sentences;
}

/**
 * Maps a character span to (sentence index, token span) over the covering
 * tokens. The span must overlap at least one token and stay inside one
 * sentence.
 */
export function charSpanToTokens(
  sentences: Token[][],
  start: number,
  end: number,
  where: string,
): { sentence: number; span: [number, number] } {
  if (!(start >= 0 && end > start)) throw new ExportError(`${where}: bad character span [${start}, ${end})`);
  for (let s = 0; s < sentences.length; s++) {
    const tokens = sentences[s];
    let first = -1;
    let last = -1;
    for (let t = 0; t < tokens.length; t++) {
      if (tokens[t].start < end && tokens[t].end > start) {
        if (first < 0) first = t;
        last = t;
      }
    }
    if (first >= 0) {
      const sentenceEnd = tokens[tokens.length - 1].end;
      if (end > sentenceEnd) throw new ExportError(`${where}: span [${start}, ${end}) crosses a sentence boundary`);
      return { sentence: s, span: [first, last + 1] };
    }
  }
  throw new ExportError(`${where}: span [${start}, ${end}) covers no token`);
}

function parseOffsets(fields: string[], at: number, where: string): [number, number] {
  const start = Number(fields[at]);
  const end = Number(fields[at + 1]);
  if (!Number.isInteger(start) || !Number.isInteger(end)) {
    throw new ExportError(`${where}: offsets must be integers, got ${fields[at]!} ${fields[at + 1]!}`);
  }
  return [start, end];
}

export function parseAnnotations(content: string, where: string) {
  const events: SourceEvent[] = [];
  const roles: SourceRole[] = [];
  const timexes: SourceTimex[] = [];
  const ids = new Set<string>();

  content.split("\n").forEach((line, i) => {
    const at = `${where}:${i + 1}`;
    if (line.trim() === "" || line.startsWith("#")) return;
    const fields = line.split("\t");
    const tag = fields[0];
    if (tag === "E") {
      if (fields.length !== 5) throw new ExportError(`${at}: E takes id, start, end, cluster`);
      const id = fields[1]!;
      if (id === "" || id.includes("/")) throw new ExportError(`${at}: bad event id ${JSON.stringify(id)}`);
      if (ids.has(id)) throw new ExportError(`${at}: duplicate event id ${JSON.stringify(id)}`);
      ids.add(id);
      const [start, end] = parseOffsets(fields, 2, at);
      events.push({ id, start, end, cluster: fields[4] === "_" ? null : fields[4]! });
    } else if (tag === "R") {
      if (fields.length !== 5) throw new ExportError(`${at}: R takes event id, label, start, end`);
      const [start, end] = parseOffsets(fields, 3, at);
      roles.push({ event: fields[1]!, label: fields[2]!, start, end });
    } else if (tag === "X") {
      if (fields.length !== 3 && fields.length !== 4) throw new ExportError(`${at}: X takes start, end and an optional value`);
      const [start, end] = parseOffsets(fields, 1, at);
      timexes.push({ start, end, value: fields[3] });
    } else {
      throw new ExportError(`${at}: unknown record tag ${JSON.stringify(tag)}`);
    }
  });

  for (const role of roles) {
    if (!ids.has(role.event)) throw new ExportError(`${where}: role references unknown event ${JSON.stringify(role.event)}`);
  }
  return { events, roles, timexes };
}

export function readStandoffCorpus(dir: string): SourceCorpus {
  let manifest: any;
  try {
    manifest = JSON.parse(readFileSync(join(dir, "manifest.json"), "utf8"));
  } catch (e) {
    throw new ExportError(`cannot read ${join(dir, "manifest.json")}: ${(e as Error).message}`);
  }
  if (typeof manifest.corpus_id !== "string" || !Array.isArray(manifest.documents)) {
    throw new ExportError("manifest needs corpus_id and a documents list");
  }

  const documents: SourceDocument[] = [];
  const seen = new Set<string>();
  for (const entry of manifest.documents) {
    const file = entry.file;
    if (typeof file !== "string" || typeof entry.topic !== "string" || typeof entry.subtopic !== "string") {
      throw new ExportError(`manifest entry ${JSON.stringify(entry)} needs file, topic, subtopic`);
    }
    if (file.includes("/") || seen.has(file)) throw new ExportError(`bad or duplicate document file ${JSON.stringify(file)}`);
    seen.add(file);
    if (entry.publish_date !== undefined && !PUBLISH_DATE.test(entry.publish_date)) {
      throw new ExportError(`${file}: publish_date must be YYYY-MM-DDTHH:MM, got ${JSON.stringify(entry.publish_date)}`);
    }
    const text = readFileSync(join(dir, `${file}.txt`), "utf8");
    const ann = parseAnnotations(readFileSync(join(dir, `${file}.ann`), "utf8"), `${file}.ann`);
    documents.push({
      docId: file,
      topic: entry.topic,
      subtopic: entry.subtopic,
      publishDate: entry.publish_date,
      text,
      sentences: tokenize(text),
      ...ann,
    });
  }
  return { corpusId: manifest.corpus_id, documents };
}
