// Token-boundary snapping for text selections. Selections always widen to
// whole tokens so stored segments match the tokenizer's offsets.

export interface TokenSpan {
  value: string;
  start: number;
  stop: number;
}

/** Token mentions of a signal, sorted by offset (from its token annotations). */
export function tokenSpans(
  mentions: { annotations: { value: unknown }[]; segment: unknown[] }[],
): TokenSpan[] {
  const spans: TokenSpan[] = [];
  for (const mention of mentions) {
    for (const annotation of mention.annotations) {
      const value = annotation.value as { type?: string; value?: string };
      if (value && value.type === 'Token' && mention.segment.length > 0) {
        const segment = mention.segment[0] as { start?: unknown; stop?: unknown };
        if (typeof segment.start === 'number' && typeof segment.stop === 'number') {
          spans.push({ value: value.value ?? '', start: segment.start, stop: segment.stop });
        }
      }
    }
  }
  return spans.sort((a, b) => a.start - b.start);
}

/**
 * Snap a raw character range to token boundaries: the result covers every
 * token the range touches. A collapsed or between-token range snaps to the
 * nearest token on its right, falling back to the left.
 */
export function snapToTokens(
  start: number,
  stop: number,
  tokens: TokenSpan[],
): { start: number; stop: number } | null {
  if (tokens.length === 0) return null;
  const [a, b] = start <= stop ? [start, stop] : [stop, start];
  const touched = tokens.filter((t) => t.start < b && t.stop > a);
  if (touched.length > 0) {
    return {
      start: Math.min(...touched.map((t) => t.start)),
      stop: Math.max(...touched.map((t) => t.stop)),
    };
  }
  const right = tokens.find((t) => t.start >= a);
  const pick = right ?? tokens[tokens.length - 1];
  return { start: pick.start, stop: pick.stop };
}

/** Tokens fully inside a (snapped) range, for display. */
export function tokensWithin(
  start: number,
  stop: number,
  tokens: TokenSpan[],
): TokenSpan[] {
  return tokens.filter((t) => t.start >= start && t.stop <= stop);
}
