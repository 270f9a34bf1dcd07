"""Commutativity-aware logical scheduling.

An event-driven loop draws candidates from the current commutation group of
every operand qubit; conflicts over shared qubits are resolved by maximum
matching on the computational graph (qubits as vertices, 2-qubit candidates
as edges, 1-qubit candidates as self-loops).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .commute import CommutationGroupTable, singleton_groups
from .gdg import GDG


class ScheduleError(RuntimeError):
    """Deadlock: the scheduling frontier cannot make progress."""


@dataclass
class ComputationalGraph:
    edges: list[tuple[int, int, int]] = field(default_factory=list)      # (qa, qb, node)
    self_loops: list[tuple[int, int]] = field(default_factory=list)      # (q, node)


@dataclass
class Schedule:
    entries: list[tuple[int, float]]  # (node id, start_ns) in start order
    makespan_ns: float

    def to_json(self, g: GDG) -> str:
        rows = []
        for nid, start in self.entries:
            node = g.nodes[nid]
            rows.append({
                "node": nid,
                "label": node.instruction.label(),
                "qubits": list(node.qubits),
                "start_ns": start,
                "duration_ns": node.duration,
            })
        return json.dumps({"makespan_ns": self.makespan_ns, "entries": rows},
                          indent=2)

    def timeline(self, g: GDG, width: int = 60) -> str:
        """ASCII per-qubit timeline for docs and debugging."""
        span = max(self.makespan_ns, 1e-9)
        lanes = {q: [" "] * width for q in range(g.num_qubits)}
        for nid, start in self.entries:
            node = g.nodes[nid]
            lo = int(start / span * (width - 1))
            hi = max(lo + 1, int((start + (node.duration or 0)) / span * (width - 1)))
            mark = str(nid)[-1]
            for q in node.qubits:
                for i in range(lo, min(hi, width)):
                    lanes[q][i] = mark
        lines = [f"q{q}: |{''.join(lane)}|" for q, lane in sorted(lanes.items())]
        lines.append(f"makespan: {self.makespan_ns:.1f} ns")
        return "\n".join(lines)


def max_matching(gc: ComputationalGraph) -> set[int]:
    """Maximum-cardinality matching over edges, then self-loops on free vertices.

    Parallel edges on one vertex pair keep the lowest node id.  Among
    self-loops competing for one vertex, the lowest node id wins.
    """
    best_edge: dict[tuple[int, int], int] = {}
    for qa, qb, nid in sorted(gc.edges, key=lambda e: e[2]):
        key = (min(qa, qb), max(qa, qb))
        best_edge.setdefault(key, nid)
    graph = nx.Graph()
    for (qa, qb), nid in sorted(best_edge.items()):
        graph.add_edge(qa, qb, node=nid)
    matching = nx.max_weight_matching(graph, maxcardinality=True)
    chosen = set()
    used = set()
    for qa, qb in matching:
        chosen.add(graph.edges[qa, qb]["node"])
        used.update((qa, qb))
    for q, nid in sorted(gc.self_loops, key=lambda s: s[1]):
        if q not in used:
            chosen.add(nid)
            used.add(q)
    return chosen


def _run(g: GDG, groups: CommutationGroupTable) -> Schedule:
    unscheduled = {n.id for n in g.real_nodes()}
    queues = {q: deque(lst) for q, lst in groups.groups.items()}
    current: dict[int, set[int]] = {q: set() for q in queues}
    busy_until: dict[int, float] = {q: 0.0 for q in range(g.num_qubits)}
    entries: list[tuple[int, float]] = []
    now = 0.0

    def refill():
        for q, dq in queues.items():
            while not current[q] and dq:
                current[q] = set(dq.popleft())

    while unscheduled:
        refill()
        candidates = []
        for nid in sorted(unscheduled):
            node = g.nodes[nid]
            if all(busy_until[q] <= now + 1e-12 and nid in current[q]
                   for q in node.qubits):
                candidates.append(nid)
        if candidates:
            gc = ComputationalGraph()
            for nid in candidates:
                qs = g.nodes[nid].qubits
                if len(qs) == 1:
                    gc.self_loops.append((qs[0], nid))
                else:
                    gc.edges.append((qs[0], qs[1], nid))
            claimed: set[int] = set()
            for nid in sorted(max_matching(gc)):
                node = g.nodes[nid]
                if node.duration is None:
                    raise ScheduleError(f"node {nid} has no duration")
                # wide nodes enter the matching as one edge; guard the rest
                if any(q in claimed for q in node.qubits):
                    continue
                claimed.update(node.qubits)
                entries.append((nid, now))
                unscheduled.discard(nid)
                for q in node.qubits:
                    busy_until[q] = now + node.duration
                    current[q].discard(nid)
        if unscheduled:
            future = [t for t in busy_until.values() if t > now + 1e-12]
            if not future:
                if candidates:
                    continue  # zero-duration progress; groups may refill
                frontier = sorted(unscheduled)[:10]
                raise ScheduleError(
                    f"scheduling deadlock; stuck frontier (first 10): {frontier}")
            now = min(future)
    makespan = max(busy_until.values(), default=0.0)
    return Schedule(entries, makespan)


def cls_schedule(g: GDG, groups: CommutationGroupTable) -> Schedule:
    """Commutativity-aware schedule; durations must already be set on g."""
    return _run(g, groups)


def list_schedule(g: GDG) -> Schedule:
    """ASAP baseline: same loop with every node in its own commutation group."""
    return _run(g, singleton_groups(g))
