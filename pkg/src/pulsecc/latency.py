"""Gate-duration accounting shared by baseline and aggregated pipelines.

TABLE mode looks single gates up in a named-gate table (defaults match the
published per-gate times for the worked example); ORACLE mode asks the
optimal-control unit for the true minimum pulse time of any instruction.
"""
from __future__ import annotations

import json
from importlib import resources

from .gdg import GDGNode


class LatencyError(ValueError):
    pass


def default_table() -> dict[str, float]:
    text = resources.files("pulsecc.data").joinpath("latency_table.json").read_text()
    return {k: float(v) for k, v in json.loads(text).items()}


class LatencyModel:
    """mode='table' with a name -> ns map, or mode='oracle' with a callable."""

    def __init__(self, mode: str = "table",
                 table: dict[str, float] | None = None,
                 oracle=None):
        if mode not in ("table", "oracle"):
            raise LatencyError(f"unknown latency mode {mode!r}")
        if mode == "oracle" and oracle is None:
            raise LatencyError("oracle mode requires an oracle callable")
        self.mode = mode
        self.table = dict(default_table())
        if table:
            self.table.update({k.lower(): float(v) for k, v in table.items()})
        self.oracle = oracle

    def duration(self, node: GDGNode) -> float:
        ins = node.instruction
        if not ins.gates:
            return 0.0  # virtual root
        if self.mode == "oracle":
            return float(self.oracle(ins))
        if len(ins.gates) > 1:
            raise LatencyError(
                f"TABLE mode cannot price multi-gate node {ins.label()}; "
                "use ORACLE mode")
        return self._gate_time(ins.gates[0])

    def _gate_time(self, gate) -> float:
        name = gate.name.value
        if name not in self.table:
            raise LatencyError(f"no table entry for gate {name!r}")
        return self.table[name]

    def estimate(self, node: GDGNode) -> float:
        """Sum of member gate table times; pre-routing scheduling estimate."""
        return sum(self._gate_time(g) for g in node.instruction.gates)
