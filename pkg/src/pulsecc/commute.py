"""Matrix-oracle commutation checking and diagonal-block detection.

The matrix oracle is the single source of truth: no symbolic Pauli-algebra
shortcuts.  Two operators commute iff max|AB - BA| on their joint context is
within tolerance; operators on disjoint supports commute trivially.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import gates_unitary
from .gdg import GDG, AggregatedInstruction, GDGError

TOL_COMMUTE = 1e-8
TOL_DIAG = 1e-8
DIAG_WINDOW_CAP = 10  # gates per 2-qubit detection window


@dataclass(frozen=True)
class CommutationVerdict:
    commutes: bool
    residual: float


def _as_instruction(x) -> AggregatedInstruction:
    if isinstance(x, AggregatedInstruction):
        return x
    return AggregatedInstruction([x])


def commutes(a, b, tol: float = TOL_COMMUTE,
             max_width: int = 12) -> CommutationVerdict:
    """Embed both operators on the union context and compare AB with BA."""
    ia, ib = _as_instruction(a), _as_instruction(b)
    qa, qb = set(ia.qubits), set(ib.qubits)
    if not qa & qb:
        return CommutationVerdict(True, 0.0)
    ctx = sorted(qa | qb)
    if len(ctx) > max_width:
        raise GDGError(f"joint support {len(ctx)} qubits exceeds width limit")
    ua = gates_unitary(ia.gates, ctx)
    ub = gates_unitary(ib.gates, ctx)
    residual = float(np.max(np.abs(ua @ ub - ub @ ua)))
    return CommutationVerdict(residual <= tol, residual)


def is_diagonal(u: np.ndarray, tol: float = TOL_DIAG) -> bool:
    off = u - np.diag(np.diag(u))
    return bool(np.max(np.abs(off)) <= tol)


class CommutationGroupTable:
    """Per qubit, an ordered list of groups of mutually commuting node ids."""

    def __init__(self, groups: dict[int, list[list[int]]]):
        self.groups = groups
        self._index: dict[int, dict[int, int]] = {
            q: {nid: gi for gi, grp in enumerate(lst) for nid in grp}
            for q, lst in groups.items()
        }

    def group_index(self, qubit: int, nid: int) -> int:
        return self._index[qubit][nid]

    def co_grouped(self, a: int, b: int, shared_qubits) -> bool:
        """Two gates commute iff co-grouped on every qubit they share."""
        return all(self.group_index(q, a) == self.group_index(q, b)
                   for q in shared_qubits)


def build_commutation_groups(g: GDG, tol: float = TOL_COMMUTE) -> CommutationGroupTable:
    """Greedy left-to-right grouping per qubit.

    A gate joins the current group iff it commutes (on the joint context)
    with every member; otherwise a new group starts.
    """
    groups: dict[int, list[list[int]]] = {}
    for q, path in g.qubit_paths().items():
        qgroups: list[list[int]] = []
        for nid in path:
            ins = g.nodes[nid].instruction
            if qgroups and all(
                    commutes(g.nodes[m].instruction, ins, tol).commutes
                    for m in qgroups[-1]):
                qgroups[-1].append(nid)
            else:
                qgroups.append([nid])
        groups[q] = qgroups
    return CommutationGroupTable(groups)


def singleton_groups(g: GDG) -> CommutationGroupTable:
    """Every node in its own group: plain dependence-DAG scheduling."""
    return CommutationGroupTable(
        {q: [[nid] for nid in path] for q, path in g.qubit_paths().items()})


def _interacting_pairs(g: GDG) -> list[tuple[int, int]]:
    pairs = set()
    for node in g.real_nodes():
        qs = node.qubits
        if len(qs) == 2:
            pairs.add(tuple(sorted(qs)))
    return sorted(pairs)


def _pair_runs(g: GDG, pair: tuple[int, int]) -> list[list[int]]:
    """Maximal contiguous (contract-legal) runs of nodes supported on pair."""
    a, b = pair
    support = {a, b}
    candidates = [nid for nid in g.topological_order()
                  if set(g.nodes[nid].qubits) <= support]
    runs: list[list[int]] = []
    current: list[int] = []
    for nid in candidates:
        trial = current + [nid]
        if current and g.can_contract(set(trial))[0]:
            current = trial
        else:
            if len(current) >= 2:
                runs.append(current)
            current = [nid]
    if len(current) >= 2:
        runs.append(current)
    return runs


def detect_diagonal_blocks(g: GDG, window_cap: int = DIAG_WINDOW_CAP,
                           tol: float = TOL_DIAG) -> GDG:
    """Contract maximal runs of 2-qubit-supported gates with diagonal product.

    For each interacting qubit pair, contiguous runs (capped at window_cap
    gates) whose product is diagonal become single nodes; overlapping
    candidates resolve left-to-right greedily.  Mutates and returns g.
    """
    for pair in _interacting_pairs(g):
        ctx = sorted(pair)
        changed = True
        while changed:
            changed = False
            for run in _pair_runs(g, pair):
                i = 0
                while i < len(run):
                    hi = min(len(run), i + window_cap)
                    found = None
                    for j in range(hi, i + 1, -1):  # longest window first
                        members = run[i:j]
                        gates = [gt for nid in members
                                 for gt in g.nodes[nid].instruction.gates]
                        if len(gates) > window_cap:
                            continue
                        u = gates_unitary(gates, ctx)
                        if is_diagonal(u, tol) and g.can_contract(set(members))[0]:
                            found = members
                            break
                    if found and len(found) >= 2:
                        g.contract(set(found))
                        changed = True
                        break  # run node ids are stale; rescan this pair
                    i += 1
                if changed:
                    break
    return g
