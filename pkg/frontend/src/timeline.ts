// Timeline layout: pure math from signals to positioned lane bars.

import type { Signal } from './types.js';

export interface LaneBar {
  signalId: string;
  modality: string;
  leftPct: number;
  widthPct: number;
  label: string;
  start: number;
  end: number;
}

export interface Lane {
  modality: string;
  bars: LaneBar[];
}

const MIN_WIDTH_PCT = 0.8; // point events stay clickable

export function layoutLanes(
  signals: Record<string, Signal[]>,
  rulerStart: number,
  rulerEnd: number,
): Lane[] {
  const span = Math.max(rulerEnd - rulerStart, 1);
  const lanes: Lane[] = [];
  for (const modality of Object.keys(signals).sort()) {
    const bars = signals[modality]
      .slice()
      .sort((a, b) => a.time.start - b.time.start)
      .map((signal) => {
        const left = ((signal.time.start - rulerStart) / span) * 100;
        const width = ((signal.time.end - signal.time.start) / span) * 100;
        return {
          signalId: signal.id,
          modality,
          leftPct: Math.min(Math.max(left, 0), 100),
          widthPct: Math.max(width, MIN_WIDTH_PCT),
          label: barLabel(signal),
          start: signal.time.start,
          end: signal.time.end,
        };
      });
    lanes.push({ modality, bars });
  }
  return lanes;
}

function barLabel(signal: Signal): string {
  if (signal.modality === 'text') {
    const seq = Array.isArray(signal.seq) ? signal.seq.join('') : signal.seq ?? '';
    return seq.length > 32 ? `${seq.slice(0, 32)}…` : seq;
  }
  const file = signal.files[0] ?? signal.id;
  return file.split('/').pop() ?? file;
}

/** Signals whose time extent covers t (point events match exactly at t). */
export function activeAt(lanes: Lane[], t: number): Set<string> {
  const active = new Set<string>();
  for (const lane of lanes) {
    for (const bar of lane.bars) {
      if (bar.start <= t && (t < bar.end || bar.start === bar.end && t === bar.start)) {
        active.add(bar.signalId);
      }
    }
  }
  return active;
}

/** Distinct signal start times, ascending: the manual playback stops. */
export function playbackStops(lanes: Lane[]): number[] {
  const stops = new Set<number>();
  for (const lane of lanes) {
    for (const bar of lane.bars) stops.add(bar.start);
  }
  return [...stops].sort((a, b) => a - b);
}
