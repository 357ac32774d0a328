// Animation model for the replay stream: a deterministic mapping from a
// clock position to token positions. Scrubbing to the same position always
// produces the same frame; wall time only ever moves the clock.

import type { ReplayHopJson, ReplayJson } from "./api.js";
import type { ClockState } from "./state.js";

export interface TokenFrame {
  tokenId: string;
  source: string;
  target: string;
  /** 0..1 along the current edge; 1 while dwelling at the target node. */
  fraction: number;
  moving: boolean;
}

export function streamBounds(stream: ReplayJson): { start: number; end: number } {
  if (!stream.hops.length) return { start: 0, end: 0 };
  let start = Number.POSITIVE_INFINITY;
  let end = Number.NEGATIVE_INFINITY;
  for (const hop of stream.hops) {
    start = Math.min(start, hop.depart_ts);
    end = Math.max(end, hop.arrive_ts);
  }
  return { start, end };
}

function hopFraction(hop: ReplayHopJson, position: number): number {
  if (hop.arrive_ts <= hop.depart_ts) return 1;
  return (position - hop.depart_ts) / (hop.arrive_ts - hop.depart_ts);
}

/**
 * Token positions at a clock position. A token is moving while inside a
 * hop's [depart, arrive] window, dwells at the previous target between
 * hops, and disappears after its final hop arrives.
 */
export function tokensAt(stream: ReplayJson, position: number): TokenFrame[] {
  const byToken = new Map<string, ReplayHopJson[]>();
  for (const hop of stream.hops) {
    const list = byToken.get(hop.token_id) ?? [];
    list.push(hop);
    byToken.set(hop.token_id, list);
  }
  const frames: TokenFrame[] = [];
  for (const [tokenId, hops] of [...byToken.entries()].sort((a, b) => a[0].localeCompare(b[0]))) {
    hops.sort((a, b) => a.seq - b.seq);
    const first = hops[0]!;
    const last = hops[hops.length - 1]!;
    if (position < first.depart_ts || position > last.arrive_ts) continue;
    let frame: TokenFrame | null = null;
    for (const hop of hops) {
      if (position < hop.depart_ts) break; // dwelling before this hop
      frame = {
        tokenId,
        source: hop.source,
        target: hop.target,
        fraction: Math.min(1, Math.max(0, hopFraction(hop, position))),
        moving: position <= hop.arrive_ts && hop.arrive_ts > hop.depart_ts,
      };
      if (position <= hop.arrive_ts) break;
    }
    if (frame) frames.push(frame);
  }
  return frames;
}

/** Advance the virtual clock by elapsed wall milliseconds; a paused clock
 * never moves. */
export function advanceClock(clock: ClockState, wallDeltaMs: number): ClockState {
  if (!clock.playing || wallDeltaMs <= 0) return clock;
  return { ...clock, position: clock.position + wallDeltaMs * clock.speed };
}

export function clampToBounds(clock: ClockState, stream: ReplayJson): ClockState {
  const { start, end } = streamBounds(stream);
  if (clock.position < start) return { ...clock, position: start };
  if (clock.position > end) return { ...clock, position: end, playing: false };
  return clock;
}
