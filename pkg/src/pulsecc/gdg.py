"""Gate dependence graph: per-qubit chains, virtual identity root, contraction,
and critical-path queries.

Each node holds an instruction (a single gate is the degenerate case).  For
every qubit an instruction touches, parents[q]/children[q] link the node into
that qubit's chain; the virtual root (id 0, duration 0) precedes every chain.
A missing children[q] entry marks the chain's end (virtual sink).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .gates import Circuit, Gate, gates_unitary


class GDGError(ValueError):
    """Structural violation or illegal mutation of a GDG."""


@dataclass
class AggregatedInstruction:
    """A contiguous sub-circuit on a bounded qubit set with one target unitary."""
    gates: list[Gate] = field(default_factory=list)
    seq: int = 0  # min original gate index, for deterministic ordering
    _unitary: np.ndarray | None = field(default=None, repr=False)

    @property
    def qubits(self) -> tuple[int, ...]:
        """Operand qubits in order of first appearance."""
        seen: list[int] = []
        for g in self.gates:
            for q in g.qubits:
                if q not in seen:
                    seen.append(q)
        return tuple(seen)

    @property
    def width(self) -> int:
        return len(self.qubits)

    @property
    def target_unitary(self) -> np.ndarray:
        """Unitary of the gate list on the instruction's own qubit context."""
        if self._unitary is None:
            ctx = sorted(self.qubits)
            self._unitary = gates_unitary(self.gates, ctx)
        return self._unitary

    @property
    def context(self) -> list[int]:
        return sorted(self.qubits)

    def remap(self, perm: dict[int, int]) -> "AggregatedInstruction":
        return AggregatedInstruction([g.remap(perm) for g in self.gates], self.seq)

    def label(self) -> str:
        if not self.gates:
            return "root"
        if len(self.gates) == 1:
            return repr(self.gates[0])
        return f"[{len(self.gates)} gates on {','.join(map(str, self.qubits))}]"


@dataclass
class GDGNode:
    id: int
    instruction: AggregatedInstruction
    parents: dict[int, int] = field(default_factory=dict)
    children: dict[int, int] = field(default_factory=dict)
    duration: float | None = None

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.instruction.qubits

    @property
    def is_root(self) -> bool:
        return self.id == 0


class GDG:
    """Dependence DAG of instructions with per-qubit parent/child chains."""

    ROOT = 0

    def __init__(self, num_qubits: int):
        self.num_qubits = num_qubits
        root = GDGNode(self.ROOT, AggregatedInstruction([], seq=-1), duration=0.0)
        self.nodes: dict[int, GDGNode] = {self.ROOT: root}
        self._next_id = 1

    # -- construction ------------------------------------------------------

    def add_instruction(self, ins: AggregatedInstruction,
                        last_on: dict[int, int]) -> GDGNode:
        node = GDGNode(self._next_id, ins)
        self._next_id += 1
        for q in ins.qubits:
            prev = last_on.get(q, self.ROOT)
            node.parents[q] = prev
            self.nodes[prev].children[q] = node.id
            last_on[q] = node.id
        self.nodes[node.id] = node
        return node

    # -- queries -----------------------------------------------------------

    @property
    def root(self) -> GDGNode:
        return self.nodes[self.ROOT]

    def real_nodes(self) -> list[GDGNode]:
        return [n for i, n in sorted(self.nodes.items()) if i != self.ROOT]

    def qubit_path(self, q: int) -> list[int]:
        """Node ids on qubit q's chain, root excluded, in chain order."""
        path = []
        cur = self.root.children.get(q)
        while cur is not None:
            path.append(cur)
            cur = self.nodes[cur].children.get(q)
        return path

    def qubit_paths(self) -> dict[int, list[int]]:
        return {q: self.qubit_path(q) for q in range(self.num_qubits)
                if q in self.root.children}

    def successors(self, nid: int) -> set[int]:
        return set(self.nodes[nid].children.values())

    def predecessors(self, nid: int) -> set[int]:
        return set(self.nodes[nid].parents.values())

    def topological_order(self) -> list[int]:
        """Kahn order over real nodes, ties broken by instruction seq then id."""
        indeg = {i: 0 for i in self.nodes}
        for n in self.nodes.values():
            for c in set(n.children.values()):
                indeg[c] += 1
        ready = [i for i, d in indeg.items() if d == 0]
        order = []
        while ready:
            ready.sort(key=lambda i: (self.nodes[i].instruction.seq, i))
            nid = ready.pop(0)
            order.append(nid)
            for c in self.successors(nid):
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self.nodes):
            raise GDGError("cycle detected in GDG")
        return [i for i in order if i != self.ROOT]

    def flatten(self) -> Circuit:
        """Circuit reading every node's gates in topological order."""
        c = Circuit(self.num_qubits)
        for nid in self.topological_order():
            for g in self.nodes[nid].instruction.gates:
                c.append(g)
        return c

    def audit(self):
        """Raise GDGError on any parent/child map inconsistency."""
        for nid, node in self.nodes.items():
            for q, cid in node.children.items():
                child = self.nodes.get(cid)
                if child is None or child.parents.get(q) != nid:
                    raise GDGError(f"child link {nid}-[q{q}]->{cid} not mirrored")
            for q, pid in node.parents.items():
                parent = self.nodes.get(pid)
                if parent is None or parent.children.get(q) != nid:
                    raise GDGError(f"parent link {nid}<-[q{q}]-{pid} not mirrored")
            if not node.is_root:
                for q in node.qubits:
                    if q not in node.parents:
                        raise GDGError(f"node {nid} missing parent on q{q}")
        self.topological_order()  # raises on cycles

    # -- mutation ----------------------------------------------------------

    def copy(self) -> "GDG":
        g = GDG(self.num_qubits)
        g._next_id = self._next_id
        g.nodes = {}
        for nid, node in self.nodes.items():
            ins = AggregatedInstruction(list(node.instruction.gates),
                                        node.instruction.seq,
                                        node.instruction._unitary)
            g.nodes[nid] = GDGNode(nid, ins, dict(node.parents),
                                   dict(node.children), node.duration)
        return g

    def can_contract(self, node_ids: set[int]) -> tuple[bool, str]:
        """Contiguity on every touched qubit chain plus acyclicity."""
        members = set(node_ids)
        if self.ROOT in members:
            return False, "cannot contract the virtual root"
        for nid in members:
            if nid not in self.nodes:
                return False, f"unknown node {nid}"
        qubits = set()
        for nid in members:
            qubits.update(self.nodes[nid].qubits)
        for q in qubits:
            path = self.qubit_path(q)
            idx = [i for i, nid in enumerate(path) if nid in members]
            if idx and idx[-1] - idx[0] + 1 != len(idx):
                return False, f"members not contiguous on q{q} chain"
        # an outside path from one member back into another would close a cycle
        outside_starts = {c for nid in members for c in self.successors(nid)
                          if c not in members}
        stack, seen = list(outside_starts), set(outside_starts)
        while stack:
            cur = stack.pop()
            if cur in members:
                return False, "contraction would create a cycle"
            for c in self.successors(cur):
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return True, ""

    def contract(self, node_ids: set[int], max_width: int | None = None) -> GDGNode:
        """Replace node_ids by one node concatenating their gates topologically."""
        members = set(node_ids)
        if len(members) == 1:
            return self.nodes[next(iter(members))]
        ok, why = self.can_contract(members)
        if not ok:
            raise GDGError(why)
        order = [nid for nid in self.topological_order() if nid in members]
        gates = [g for nid in order for g in self.nodes[nid].instruction.gates]
        seq = min(self.nodes[nid].instruction.seq for nid in members)
        merged = AggregatedInstruction(gates, seq)
        if max_width is not None and merged.width > max_width:
            raise GDGError(f"contracted width {merged.width} exceeds limit {max_width}")

        node = GDGNode(self._next_id, merged)
        self._next_id += 1
        # boundary links: per qubit, the first member's parent and last member's child
        for q in merged.qubits:
            path = self.qubit_path(q)
            on_q = [nid for nid in path if nid in members]
            first, last = on_q[0], on_q[-1]
            pid = self.nodes[first].parents[q]
            node.parents[q] = pid
            self.nodes[pid].children[q] = node.id
            cid = self.nodes[last].children.get(q)
            if cid is not None:
                node.children[q] = cid
                self.nodes[cid].parents[q] = node.id
        for nid in members:
            del self.nodes[nid]
        self.nodes[node.id] = node
        return node

    # -- weighting ---------------------------------------------------------

    def set_durations(self, dur_fn):
        """Assign durations from a callable node -> ns (root stays 0)."""
        for node in self.real_nodes():
            node.duration = float(dur_fn(node))

    def critical_path(self) -> tuple[float, list[int]]:
        """Longest duration-weighted root-to-sink path.

        Ties resolved toward the lexicographically smallest witness by node id.
        """
        finish: dict[int, float] = {self.ROOT: 0.0}
        best_parent: dict[int, int | None] = {self.ROOT: None}
        for nid in [self.ROOT] + self.topological_order():
            if nid == self.ROOT:
                continue
            node = self.nodes[nid]
            if node.duration is None:
                raise GDGError(f"node {nid} has no duration")
            start, bp = 0.0, self.ROOT
            for pid in sorted(self.predecessors(nid)):
                if finish[pid] > start + 1e-12:
                    start, bp = finish[pid], pid
            finish[nid] = start + node.duration
            best_parent[nid] = bp
        total, end = 0.0, None
        for nid in sorted(finish):
            if nid != self.ROOT and finish[nid] > total + 1e-12:
                total, end = finish[nid], nid
        path: list[int] = []
        while end is not None and end != self.ROOT:
            path.append(end)
            end = best_parent[end]
        return total, list(reversed(path))

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "num_qubits": self.num_qubits,
            "nodes": [
                {
                    "id": n.id,
                    "label": n.instruction.label(),
                    "qubits": list(n.qubits),
                    "gates": [repr(g) for g in n.instruction.gates],
                    "duration_ns": n.duration,
                }
                for _, n in sorted(self.nodes.items())
            ],
            "edges_by_qubit": {
                str(q): [[n.id, n.children[q]] for _, n in sorted(self.nodes.items())
                         if q in n.children]
                for q in range(self.num_qubits)
            },
        }
        return json.dumps(doc, indent=2)


def build_gdg(c: Circuit) -> GDG:
    """One node per gate; per-qubit chains; virtual root ahead of every chain."""
    g = GDG(c.num_qubits)
    last: dict[int, int] = {}
    for i, gate in enumerate(c.gates):
        g.add_instruction(AggregatedInstruction([gate], seq=i), last)
    return g
