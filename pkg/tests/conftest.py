import numpy as np
import pytest

from pulsecc.gates import Circuit, Gate, GateName


ONE_QUBIT = [
    lambda q, rng: Gate(GateName.H, (q,)),
    lambda q, rng: Gate(GateName.X, (q,)),
    lambda q, rng: Gate(GateName.Y, (q,)),
    lambda q, rng: Gate(GateName.Z, (q,)),
    lambda q, rng: Gate(GateName.RX, (q,), (float(rng.uniform(0, 2 * np.pi)),)),
    lambda q, rng: Gate(GateName.RY, (q,), (float(rng.uniform(0, 2 * np.pi)),)),
    lambda q, rng: Gate(GateName.RZ, (q,), (float(rng.uniform(0, 2 * np.pi)),)),
]

TWO_QUBIT = [
    lambda a, b, rng: Gate(GateName.CNOT, (a, b)),
    lambda a, b, rng: Gate(GateName.SWAP, (a, b)),
    lambda a, b, rng: Gate(GateName.CPHASE, (a, b), (float(rng.uniform(0, 2 * np.pi)),)),
    lambda a, b, rng: Gate(GateName.ISWAP, (a, b)),
    lambda a, b, rng: Gate(GateName.XX, (a, b), (float(rng.uniform(0, 2 * np.pi)),)),
]


def random_gate(n: int, rng) -> Gate:
    if n >= 2 and rng.random() < 0.5:
        a, b = rng.choice(n, size=2, replace=False)
        return TWO_QUBIT[rng.integers(len(TWO_QUBIT))](int(a), int(b), rng)
    q = int(rng.integers(n))
    return ONE_QUBIT[rng.integers(len(ONE_QUBIT))](q, rng)


def random_circuit(n: int, num_gates: int, rng, name: str = "") -> Circuit:
    c = Circuit(n, name=name)
    for _ in range(num_gates):
        c.append(random_gate(n, rng))
    return c


@pytest.fixture
def rng():
    return np.random.default_rng(20240825)
