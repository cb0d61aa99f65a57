import math

import numpy as np
import pytest

from qops.bench import BENCHMARKS, generate, qft, random_circuit
from qops.errors import UnknownBenchmark
from qops.ir import GateKind, emit_qasm
from qops.verify import dense_oracle


def test_qft_columns_are_fourier_modes():
    n = 4
    N = 1 << n
    c = qft(n)
    from qops.verify import expand_operator
    u = np.eye(N, dtype=complex)
    for g in c.gates:
        u = expand_operator(n, g.kind, g.qubits, g.params) @ u
    dft = np.exp(2j * np.pi * np.outer(np.arange(N), np.arange(N)) / N) / math.sqrt(N)
    np.testing.assert_allclose(u, dft, atol=1e-12)


def test_qft_gate_counts():
    n = 18
    full = qft(n)
    assert full.count(GateKind.H) == n
    assert full.count(GateKind.CPHASE) == n * (n - 1) // 2
    assert full.count(GateKind.SWAP) == n // 2
    dec = qft(n, decomposed=True)
    assert dec.gate_count() == 801
    assert dec.count(GateKind.MEASURE) == n


def test_decomposed_qft_equivalent():
    from qops.verify import circuits_equivalent
    c = qft(5)
    dec = qft(5, decomposed=True)
    # the decomposed form omits the bit-reversal swaps
    from qops.ir import Circuit
    swaps = Circuit(5, dec.unitary_part().gates + [g for g in c.gates if g.kind is GateKind.SWAP])
    assert circuits_equivalent(c, swaps)


def test_first_gate_is_h_on_top_qubit():
    c = qft(4)
    assert c.gates[0].kind is GateKind.H and c.gates[0].qubits == (3,)
    assert c.gates[1].kind is GateKind.CPHASE and c.gates[1].qubits == (2, 3)


def test_t_chain_unit_pattern():
    c = generate("t-chain", 20)
    head = [(g.kind, g.qubits) for g in c.gates[:12]]
    T, TDG, H, CX = GateKind.T, GateKind.TDG, GateKind.H, GateKind.CX
    assert head == [(T, (9,)), (T, (19,)), (H, (19,)), (CX, (5, 9)), (T, (5,)), (TDG, (9,)),
                    (CX, (5, 9)), (T, (9,)), (CX, (5, 9)), (T, (5,)), (TDG, (9,)), (CX, (5, 9))]
    assert c.count(T, TDG) / len(c.gates) >= 0.10


@pytest.mark.parametrize("name", BENCHMARKS)
@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_generators_deterministic_and_valid(name, n):
    a, b = generate(name, n), generate(name, n)
    assert emit_qasm(a) == emit_qasm(b)
    assert abs(np.linalg.norm(dense_oracle(a.unitary_part())) - 1) < 1e-12


def test_unknown_benchmark():
    with pytest.raises(UnknownBenchmark):
        generate("grover", 4)
    with pytest.raises(ValueError):
        generate("qft", 1)


def test_random_circuit_seeded():
    assert random_circuit(4, 20, 9) == random_circuit(4, 20, 9)
    assert random_circuit(4, 20, 9) != random_circuit(4, 20, 10)
