import { describe, expect, it } from 'vitest';

import { snapToTokens, tokensWithin, TokenSpan } from '../src/tokens.js';

// Committed token oracle for the first CarLani utterance.
const TOKENS: TokenSpan[] = [
  { value: 'I', start: 0, stop: 1 },
  { value: 'need', start: 2, stop: 6 },
  { value: 'to', start: 7, stop: 9 },
  { value: 'take', start: 10, stop: 14 },
  { value: 'my', start: 15, stop: 17 },
  { value: 'pills', start: 18, stop: 23 },
  { value: ',', start: 23, stop: 24 },
  { value: 'but', start: 25, stop: 28 },
  { value: 'I', start: 29, stop: 30 },
  { value: 'cannot', start: 31, stop: 37 },
  { value: 'find', start: 38, stop: 42 },
  { value: 'them', start: 43, stop: 47 },
  { value: '.', start: 47, stop: 48 },
];

describe('snapToTokens', () => {
  it('a selection of chars 0-1 snaps to the token "I"', () => {
    expect(snapToTokens(0, 1, TOKENS)).toEqual({ start: 0, stop: 1 });
  });

  it('a partial word widens to the whole token', () => {
    // chars 3..5 are inside "need" [2, 6)
    expect(snapToTokens(3, 5, TOKENS)).toEqual({ start: 2, stop: 6 });
  });

  it('a straddling selection covers every touched token', () => {
    // 16..20 touches "my" [15,17) and "pills" [18,23)
    expect(snapToTokens(16, 20, TOKENS)).toEqual({ start: 15, stop: 23 });
  });

  it('reversed ranges are normalized', () => {
    expect(snapToTokens(5, 3, TOKENS)).toEqual({ start: 2, stop: 6 });
  });

  it('a whitespace-only selection snaps to the next token', () => {
    // char 1..2 is the space between "I" and "need"
    expect(snapToTokens(1, 2, TOKENS)).toEqual({ start: 2, stop: 6 });
  });

  it('every snapped range starts and ends on oracle boundaries', () => {
    const starts = new Set(TOKENS.map((t) => t.start));
    const stops = new Set(TOKENS.map((t) => t.stop));
    for (let a = 0; a < 48; a += 1) {
      for (let b = a; b <= 48; b += 3) {
        const snapped = snapToTokens(a, b, TOKENS);
        expect(snapped).not.toBeNull();
        expect(starts.has(snapped!.start)).toBe(true);
        expect(stops.has(snapped!.stop)).toBe(true);
      }
    }
  });

  it('returns null when the signal has no tokens', () => {
    expect(snapToTokens(0, 4, [])).toBeNull();
  });
});

describe('tokensWithin', () => {
  it('lists the tokens covered by a snapped range', () => {
    const snapped = snapToTokens(16, 20, TOKENS)!;
    expect(tokensWithin(snapped.start, snapped.stop, TOKENS).map((t) => t.value))
      .toEqual(['my', 'pills']);
  });
});
