// Wire types for the scenario HTTP API.

export interface TemporalExtent {
  container_id: string;
  start: number;
  end: number;
  type: string;
}

export interface IndexSegment {
  type: 'Index';
  container_id: string;
  start: number;
  stop: number;
}

export interface BoundingBoxSegment {
  type: 'BoundingBox';
  container_id: string;
  bounds: [number, number, number, number];
}

export type Segment = IndexSegment | BoundingBoxSegment | TemporalExtent;

export interface TokenValue {
  type: 'Token';
  id: string;
  value: string;
}

export interface EntityLinkValue {
  type: 'EntityLink';
  iri: string;
}

export interface LabelValue {
  type: 'Label';
  value: string;
}

export interface TripleValue {
  type: 'Triple';
  subject: string;
  predicate: string;
  object: string;
  perspective?: Record<string, string>;
}

export type AnnotationValue =
  | TokenValue
  | EntityLinkValue
  | LabelValue
  | TripleValue
  | Record<string, unknown>;

export interface Annotation {
  type: string;
  source: string;
  timestamp: number | null;
  value: AnnotationValue;
}

export interface Mention {
  type?: string;
  id: string;
  annotations: Annotation[];
  segment: Segment[];
}

export interface Signal {
  id: string;
  modality: 'text' | 'image' | 'audio' | 'video';
  files: string[];
  time: TemporalExtent;
  ruler: { container_id: string; start?: number; stop?: number; bounds?: number[] };
  mentions: Mention[];
  seq?: string[] | string;
  speaker?: { id: string; name: string };
}

export interface ScenarioSummary {
  id: string;
  ruler: { start: number; end: number };
  modalities: string[];
}

export interface ScenarioDetail {
  scenario: {
    id: string;
    ruler: { container_id: string; start: number; end: number };
    context: { agent: string; persons?: { id: string; name: string }[] };
    signals: Record<string, string>;
  };
  signals: Record<string, Signal[]>;
  version: number;
  warnings: string[];
}

export interface Identity {
  iri: string;
  name: string;
  type?: string;
}

export interface QueryRow {
  claim: string;
  subject: string;
  predicate: string;
  object: string;
  mention: string;
  source: string | null;
  certainty: string | null;
  polarity: string | null;
  timestamp: number;
}

export function seqText(signal: Signal): string {
  if (signal.seq === undefined) return '';
  return Array.isArray(signal.seq) ? signal.seq.join('') : signal.seq;
}
