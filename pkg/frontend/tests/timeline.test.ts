import { describe, expect, it } from 'vitest';

import { activeAt, layoutLanes, playbackStops } from '../src/timeline.js';
import { initialPlayback, queryAt, stepBack, stepForward } from '../src/playback.js';
import type { Signal } from '../src/types.js';

function textSignal(id: string, start: number, end: number, seq: string): Signal {
  return {
    id,
    modality: 'text',
    files: [],
    time: { container_id: 'scn', start, end, type: 'TemporalRuler' },
    ruler: { container_id: id, start: 0, stop: seq.length },
    mentions: [],
    seq: seq.split(''),
  };
}

function imageSignal(id: string, start: number, end: number): Signal {
  return {
    id,
    modality: 'image',
    files: [`image/${id}.jpg`],
    time: { container_id: 'scn', start, end, type: 'TimeSegment' },
    ruler: { container_id: id, bounds: [0, 0, 3840, 1080] },
    mentions: [],
  };
}

const SIGNALS = {
  text: [
    textSignal('u1', 0, 0, 'I need to take my pills, but I cannot find them.'),
    textSignal('u2', 3933, 3933, 'I found them. They are under the table.'),
    textSignal('u3', 7133, 7133, 'Oh! Got it. Thank you.'),
  ],
  image: [imageSignal('f0', 0, 33), imageSignal('f30', 1000, 1033)],
};

describe('layoutLanes', () => {
  it('one lane per modality, bars positioned by temporal ruler', () => {
    const lanes = layoutLanes(SIGNALS, 0, 11133);
    expect(lanes.map((lane) => lane.modality)).toEqual(['image', 'text']);
    const text = lanes[1];
    expect(text.bars.map((bar) => bar.start)).toEqual([0, 3933, 7133]);
    expect(text.bars[1].leftPct).toBeCloseTo((3933 / 11133) * 100, 5);
    // point events keep a clickable minimum width
    expect(text.bars[0].widthPct).toBeGreaterThan(0);
  });

  it('labels text bars with the utterance and image bars with the file', () => {
    const lanes = layoutLanes(SIGNALS, 0, 11133);
    expect(lanes[1].bars[2].label).toBe('Oh! Got it. Thank you.');
    expect(lanes[0].bars[0].label).toBe('f0.jpg');
  });
});

describe('playback stepping', () => {
  const lanes = layoutLanes(SIGNALS, 0, 11133);

  it('stops are the distinct signal start times in order', () => {
    expect(playbackStops(lanes)).toEqual([0, 1000, 3933, 7133]);
  });

  it('steps forward and back through the stops', () => {
    let state = initialPlayback(lanes);
    expect(state.t).toBe(0);
    state = stepForward(state);
    expect(state.t).toBe(1000);
    state = stepForward(state);
    state = stepForward(state);
    expect(state.t).toBe(7133);
    state = stepForward(state);
    expect(state.t).toBe(7133); // clamped at the end
    state = stepBack(state);
    expect(state.t).toBe(3933);
  });

  it('highlights signals whose extent covers t', () => {
    expect(activeAt(lanes, 1000)).toEqual(new Set(['f30']));
    expect(activeAt(lanes, 0)).toEqual(new Set(['u1', 'f0']));
    expect(activeAt(lanes, 500)).toEqual(new Set());
  });

  it('builds per-source query parameters at the current time', () => {
    const state = { t: 3933, stops: [0, 3933] };
    expect(queryAt(state, 'Leolani', { s: 'robotWorld:pills' })).toEqual({
      s: 'robotWorld:pills',
      t: 3933,
      source: 'Leolani',
    });
    expect(queryAt(state, undefined, {})).toEqual({ t: 3933 });
  });
});
