// Manual step-through playback: advancing t highlights the signals covering t
// and re-runs the knowledge query as of t for the selected source.

import type { Lane } from './timeline.js';
import { activeAt, playbackStops } from './timeline.js';

export interface PlaybackState {
  t: number;
  stops: number[];
}

export function initialPlayback(lanes: Lane[]): PlaybackState {
  const stops = playbackStops(lanes);
  return { t: stops[0] ?? 0, stops };
}

export function stepForward(state: PlaybackState): PlaybackState {
  const next = state.stops.find((stop) => stop > state.t);
  return next === undefined ? state : { ...state, t: next };
}

export function stepBack(state: PlaybackState): PlaybackState {
  const previous = [...state.stops].reverse().find((stop) => stop < state.t);
  return previous === undefined ? state : { ...state, t: previous };
}

export function highlighted(lanes: Lane[], state: PlaybackState): Set<string> {
  return activeAt(lanes, state.t);
}

/** Query parameters for "what does `source` believe at t". */
export function queryAt(
  state: PlaybackState,
  source: string | undefined,
  pattern: { s?: string; p?: string; o?: string },
): { s?: string; p?: string; o?: string; t: number; source?: string } {
  return { ...pattern, t: state.t, ...(source ? { source } : {}) };
}
