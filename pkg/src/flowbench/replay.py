"""Token replay streams for map animation: one token per case traversing its
own event sequence with real timestamps, including START and END hops. The
client bins and renders; the stream carries raw hops."""

from __future__ import annotations

from dataclasses import dataclass

from .discover import Dfg
from .model import EventLog

START = "START"
END = "END"


@dataclass(frozen=True)
class Hop:
    token_id: str
    seq: int
    source: str
    target: str
    depart_ts: int
    arrive_ts: int

    def to_dict(self) -> dict:
        return {
            "token_id": self.token_id,
            "seq": self.seq,
            "source": self.source,
            "target": self.target,
            "depart_ts": self.depart_ts,
            "arrive_ts": self.arrive_ts,
        }


@dataclass(frozen=True)
class ReplayStream:
    hops: tuple[Hop, ...]
    token_count: int

    def to_dict(self) -> dict:
        return {"token_count": self.token_count, "hops": [h.to_dict() for h in self.hops]}


def replay_stream(log: EventLog, dfg: Dfg | None = None) -> ReplayStream:
    """Hops are monotone per token (a clock clamps out-of-order completions)
    and the stream is globally sorted by departure time."""
    if dfg is not None:
        for case in log.cases:
            for prev, nxt in zip(case.events, case.events[1:]):
                if (prev.activity, nxt.activity) not in dfg.edges:
                    raise ValueError("replay DFG was not built from this log")

    hops: list[Hop] = []
    for case in log.cases:
        if not case.events:
            continue
        clock = case.events[0].start_ts
        seq = 0
        hops.append(Hop(case.case_id, seq, START, case.events[0].activity, clock, clock))
        for prev, nxt in zip(case.events, case.events[1:]):
            seq += 1
            depart = max(clock, prev.end_ts())
            arrive = max(depart, nxt.start_ts)
            hops.append(Hop(case.case_id, seq, prev.activity, nxt.activity, depart, arrive))
            clock = arrive
        last = case.events[-1]
        seq += 1
        final = max(clock, last.end_ts())
        hops.append(Hop(case.case_id, seq, last.activity, END, final, final))

    hops.sort(key=lambda h: (h.depart_ts, h.token_id, h.seq))
    return ReplayStream(hops=tuple(hops), token_count=sum(1 for c in log.cases if c.events))
