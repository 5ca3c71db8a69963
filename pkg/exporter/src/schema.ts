/**
 * Shape of the corpus JSON and embedding sidecar this exporter emits.
 *
 * The consumer is the Python toolkit's load_corpus / load_vector_store; these
 * types restate its file contract so the compiler keeps the writer honest.
 * Spans are [start, end) token indices into one tokenized sentence. Mentions
 * are addressed as "doc_id/mention_id" elsewhere, so mention ids must never
 * contain "/".
 */

export type MentionKind = "action" | "participant" | "time" | "location";

export interface MentionJson {
  mention_id: string;
  kind: MentionKind;
  sentence: number;
  token_span: [number, number];
  cluster_id?: string;
  anchor?: string;
  subtype?: string;
  lemma?: string;
}

export interface TimexJson {
  sentence: number;
  token_span: [number, number];
  value: string;
}

export type SrlRole = "participant" | "time" | "location";

export interface SrlArgJson {
  role: SrlRole;
  sentence: number;
  token_span: [number, number];
}

export interface SrlFrameJson {
  predicate: { sentence: number; token_span: [number, number] };
  args: SrlArgJson[];
}

export interface EntityLinkJson {
  sentence: number;
  token_span: [number, number];
  kb_id: string;
}

export interface DocumentJson {
  doc_id: string;
  topic: string;
  subtopic: string;
  /** "YYYY-MM-DDTHH:MM", or absent for undated documents. */
  publish_date?: string;
  sentences: string[][];
  mentions: MentionJson[];
  timex?: TimexJson[];
  entity_links?: EntityLinkJson[];
  srl?: SrlFrameJson[];
}

export interface CorpusJson {
  corpus_id: string;
  documents: DocumentJson[];
}

/** One line of the JSON-lines embedding sidecar. */
export interface VectorRecord {
  key: string;
  vector: number[];
}

export class ExportError extends Error {}
