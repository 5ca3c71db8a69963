/**
 * Standoff source -> corpus JSON.
 *
 * Event triggers become action mentions. Role spans become component mentions
 * anchored to their action, with SRL labels mapped ARG0/ARG1 -> participant,
 * ARGM-TMP -> time, ARGM-LOC/ARGM-DIR -> location and every other label
 * dropped from the mention layer (the full frames are still emitted under
 * "srl"). Temporal expressions are normalized to ISO values; expressions that
 * cannot be resolved are dropped and reported through the log callback.
 */

import type {
  CorpusJson,
  DocumentJson,
  MentionJson,
  SrlFrameJson,
  SrlRole,
  TimexJson,
} from "./schema.js";
import { charSpanToTokens, type SourceCorpus, type SourceDocument, type Token } from "./standoff.js";
import { normalizeTimex } from "./timex.js";

export const ROLE_TO_KIND: Record<string, SrlRole> = {
  ARG0: "participant",
  ARG1: "participant",
  "ARGM-TMP": "time",
  "ARGM-LOC": "location",
  "ARGM-DIR": "location",
};

const KIND_PREFIX: Record<SrlRole, string> = {
  participant: "p",
  time: "t",
  location: "l",
};

export interface ConvertOptions {
  /** Produces the lemma for an action mention; stub mode lowercases the head token. */
  lemmaOf: (docId: string, eventId: string, spanText: string) => string;
  log: (message: string) => void;
}

export function spanText(sentences: Token[][], sentence: number, span: [number, number]): string {
  return sentences[sentence]
    .slice(span[0], span[1])
    .map((t) => t.text)
    .join(" ");
}

/** Stub lemma rule, head-final: the span's last token, cleaned of edge
 * punctuation and lowercased. */
export function headLemma(text: string): string {
  const raw = text.split(" ").filter((t) => t !== "").pop() ?? text;
  const stripped = raw.replace(/^[^\p{L}\p{N}]+|[^\p{L}\p{N}]+$/gu, "");
  return (stripped === "" ? raw : stripped).toLowerCase();
}

/** Fallback when a temporal expression carries no value: read an ISO date or
 * a bare year out of the span text itself. */
export function timexValueFromText(text: string): string | undefined {
  const date = text.match(/\d{4}-\d{2}-\d{2}(?:T[A-Z0-9:]+)?/);
  if (date) return date[0];
  const year = text.match(/(?<!\d)\d{4}(?!\d)/);
  return year ? year[0] : undefined;
}

function convertDocument(doc: SourceDocument, opts: ConvertOptions): DocumentJson {
  const mentions: MentionJson[] = [];
  const frames: SrlFrameJson[] = [];
  const publishDate = doc.publishDate === undefined ? undefined : new Date(`${doc.publishDate}:00Z`);

  for (const event of doc.events) {
    const where = `${doc.docId}, event ${event.id}`;
    const pos = charSpanToTokens(doc.sentences, event.start, event.end, where);
    const mention: MentionJson = {
      mention_id: event.id,
      kind: "action",
      sentence: pos.sentence,
      token_span: pos.span,
      lemma: opts.lemmaOf(doc.docId, event.id, spanText(doc.sentences, pos.sentence, pos.span)),
    };
    if (event.cluster !== null) mention.cluster_id = event.cluster;
    mentions.push(mention);

    const roles = doc.roles.filter((r) => r.event === event.id);
    const perKind: Record<string, number> = {};
    const frame: SrlFrameJson = { predicate: { sentence: pos.sentence, token_span: pos.span }, args: [] };
    for (const role of roles) {
      const kind = ROLE_TO_KIND[role.label];
      if (kind === undefined) continue;
      const rolePos = charSpanToTokens(doc.sentences, role.start, role.end, `${where}, role ${role.label}`);
      frame.args.push({ role: kind, sentence: rolePos.sentence, token_span: rolePos.span });
      const n = (perKind[kind] = (perKind[kind] ?? 0) + 1);
      mentions.push({
        mention_id: `${event.id}.${KIND_PREFIX[kind]}${n - 1}`,
        kind,
        sentence: rolePos.sentence,
        token_span: rolePos.span,
        anchor: event.id,
      });
    }
    if (frame.args.length > 0) frames.push(frame);
  }

  const timex: TimexJson[] = [];
  for (const t of doc.timexes) {
    const pos = charSpanToTokens(doc.sentences, t.start, t.end, `${doc.docId}, timex`);
    const text = spanText(doc.sentences, pos.sentence, pos.span);
    const raw = t.value ?? timexValueFromText(text);
    if (raw === undefined) {
      opts.log(`${doc.docId}: dropped timex ${JSON.stringify(text)} (no value and no digits to derive one)`);
      continue;
    }
    const value = normalizeTimex(raw, publishDate);
    if (value === null) {
      opts.log(`${doc.docId}: dropped timex ${JSON.stringify(text)} (cannot resolve ${JSON.stringify(raw)})`);
      continue;
    }
    timex.push({ sentence: pos.sentence, token_span: pos.span, value });
  }

  const out: DocumentJson = {
    doc_id: doc.docId,
    topic: doc.topic,
    subtopic: doc.subtopic,
    sentences: doc.sentences.map((s) => s.map((t) => t.text)),
    mentions,
  };
  if (doc.publishDate !== undefined) out.publish_date = doc.publishDate;
  if (timex.length > 0) out.timex = timex;
  if (frames.length > 0) out.srl = frames;
  return out;
}

export function convertCorpus(source: SourceCorpus, opts: ConvertOptions): CorpusJson {
  return {
    corpus_id: source.corpusId,
    documents: source.documents.map((d) => convertDocument(d, opts)),
  };
}

/** Sidecar coverage: one vector per mention plus one per sentence. Entity
 * links would add kb/ keys, but stub mode emits none. */
export function sidecarEntries(corpus: CorpusJson): { key: string; text: string }[] {
  const entries: { key: string; text: string }[] = [];
  for (const doc of corpus.documents) {
    doc.sentences.forEach((tokens, i) => {
      entries.push({ key: `${doc.doc_id}/sent/${i}`, text: tokens.join(" ") });
    });
    for (const m of doc.mentions) {
      const tokens = doc.sentences[m.sentence].slice(m.token_span[0], m.token_span[1]);
      entries.push({ key: `${doc.doc_id}/${m.mention_id}`, text: tokens.join(" ") });
    }
  }
  return entries.sort((a, b) => (a.key < b.key ? -1 : a.key > b.key ? 1 : 0));
}
