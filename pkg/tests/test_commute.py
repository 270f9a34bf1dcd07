import numpy as np
import pytest

from pulsecc.bench import qaoa_triangle
from pulsecc.commute import (build_commutation_groups, commutes,
                             detect_diagonal_blocks, is_diagonal,
                             singleton_groups)
from pulsecc.gates import (Gate, GateName, circuit_unitary, embed,
                           phases_equal)
from pulsecc.gdg import build_gdg

from conftest import random_gate


def brute_commutes(a: Gate, b: Gate) -> bool:
    ctx = sorted(set(a.qubits) | set(b.qubits))
    ua, ub = embed(a, ctx), embed(b, ctx)
    return np.max(np.abs(ua @ ub - ub @ ua)) <= 1e-8


def test_disjoint_supports_commute_without_matrices():
    v = commutes(Gate(GateName.H, (0,)), Gate(GateName.CNOT, (5, 9)))
    assert v.commutes and v.residual == 0.0


def test_named_relations():
    # Rz(a) q0 with CNOT q0 q1: control-side diagonal commutes
    assert commutes(Gate(GateName.RZ, (0,), (1.3,)),
                    Gate(GateName.CNOT, (0, 1))).commutes
    # Rx(a) q1 with CNOT q0 q1: target-side X-axis commutes
    assert commutes(Gate(GateName.RX, (1,), (0.7,)),
                    Gate(GateName.CNOT, (0, 1))).commutes
    # CNOTs sharing a control commute
    assert commutes(Gate(GateName.CNOT, (0, 1)),
                    Gate(GateName.CNOT, (0, 2))).commutes
    # CNOTs sharing a target commute
    assert commutes(Gate(GateName.CNOT, (0, 2)),
                    Gate(GateName.CNOT, (1, 2))).commutes
    # and the classic non-commuting cases
    assert not commutes(Gate(GateName.RX, (0,), (0.7,)),
                        Gate(GateName.CNOT, (0, 1))).commutes
    assert not commutes(Gate(GateName.H, (0,)),
                        Gate(GateName.RZ, (0,), (1.0,))).commutes


def test_matrix_oracle_agrees_with_brute_force(rng):
    for _ in range(200):
        a, b = random_gate(3, rng), random_gate(3, rng)
        assert commutes(a, b).commutes == brute_commutes(a, b)


def test_groups_partition_each_chain():
    g = build_gdg(qaoa_triangle())
    t = build_commutation_groups(g)
    for q, path in g.qubit_paths().items():
        flat = [nid for grp in t.groups[q] for nid in grp]
        assert flat == path  # order-preserving partition


def test_groups_members_mutually_commute():
    g = build_gdg(qaoa_triangle())
    t = build_commutation_groups(g)
    for q, grps in t.groups.items():
        for grp in grps:
            for i, a in enumerate(grp):
                for b in grp[i + 1:]:
                    assert commutes(g.nodes[a].instruction,
                                    g.nodes[b].instruction).commutes


def test_singleton_groups_are_all_size_one():
    g = build_gdg(qaoa_triangle())
    t = singleton_groups(g)
    assert all(len(grp) == 1 for grps in t.groups.values() for grps2 in [grps]
               for grp in grps2)


def test_diagonal_block_detection_on_worked_example():
    g = build_gdg(qaoa_triangle())
    before = circuit_unitary(g.flatten())
    detect_diagonal_blocks(g)
    g.audit()
    # three CNOT-Rz-CNOT blocks collapse: 16 gates -> 10 nodes
    assert len(g.real_nodes()) == 10
    blocks = [n for n in g.real_nodes() if len(n.instruction.gates) == 3]
    assert len(blocks) == 3
    for n in blocks:
        assert is_diagonal(n.instruction.target_unitary)
    assert phases_equal(before, circuit_unitary(g.flatten()))


def test_diagonal_blocks_co_grouped():
    g = build_gdg(qaoa_triangle())
    detect_diagonal_blocks(g)
    t = build_commutation_groups(g)
    # the two ZZ blocks sharing qubit 1 land in one commutation group
    blocks = sorted(n.id for n in g.real_nodes()
                    if len(n.instruction.gates) == 3 and 1 in n.qubits)[:2]
    assert t.co_grouped(blocks[0], blocks[1], [1])


def test_detection_preserves_semantics_random(rng):
    from conftest import random_circuit
    for _ in range(10):
        c = random_circuit(3, 12, rng)
        g = build_gdg(c)
        before = circuit_unitary(g.flatten())
        detect_diagonal_blocks(g)
        g.audit()
        assert phases_equal(before, circuit_unitary(g.flatten()))


def test_window_cap_limits_block_size(rng):
    from pulsecc.gates import Circuit
    c = Circuit(2)
    for _ in range(30):
        c.add(GateName.CPHASE, 0, 1, params=(0.3,))
    g = build_gdg(c)
    detect_diagonal_blocks(g)
    assert all(len(n.instruction.gates) <= 10 for n in g.real_nodes())
