"""Deterministic benchmark circuit generators and seeded random circuits."""
from __future__ import annotations

import math

import numpy as np

from .errors import UnknownBenchmark
from .ir import Circuit, Gate, GateKind

BENCHMARKS = ("qft", "ising", "bell", "ghz", "fig3-synthetic", "t-chain")


def qft(n: int, decomposed=False) -> Circuit:
    """QFT starting with H on the top qubit, so the first records read H(n-1), CPhase(n-2, n-1).

    With ``decomposed=True`` every controlled phase is expanded into
    u1/cx/u1/cx/u1, the bit-reversal swaps are dropped and all qubits are
    measured; for n=18 that is the 801-gate benchmark size.
    """
    c = Circuit(n)
    for j in reversed(range(n)):
        c.h(j)
        for k in reversed(range(j)):
            lam = math.pi / (1 << (j - k))
            if decomposed:
                c.append(GateKind.U1, (k,), (lam / 2,))
                c.cx(k, j)
                c.append(GateKind.U1, (j,), (-lam / 2,))
                c.cx(k, j)
                c.append(GateKind.U1, (j,), (lam / 2,))
            else:
                c.cp(lam, k, j)
    if decomposed:
        c.measure_all()
    else:
        for i in range(n // 2):
            c.swap(i, n - 1 - i)
    return c


def ising(n: int, steps=4, run_len=5, dt=0.1, coupling=1.0, field=0.7) -> Circuit:
    """Trotterized transverse-field Ising chain.

    Each step puts a block of `run_len` alternating RZ/RX rotations on every
    qubit (mergeable runs), then a CX-RZ-CX-RX-CZ ladder over neighbouring bonds.
    """
    c = Circuit(n)
    for s in range(steps):
        for q in range(n):
            for r in range(run_len):
                angle = dt * field * (1 + 0.1 * q) * (r + 1 + s)
                if r % 2 == 0:
                    c.rz(angle, q)
                else:
                    c.rx(angle, q)
        for q in range(n - 1):
            c.cx(q, q + 1)
            c.rz(2 * coupling * dt * (1 + 0.05 * q), q + 1)
            c.cx(q, q + 1)
            c.rx(2 * field * dt, q + 1)
            c.append(GateKind.CZ, (q, q + 1))
    return c


def bell(n: int = 2) -> Circuit:
    c = Circuit(n)
    c.h(0)
    c.cx(0, 1)
    return c


def ghz(n: int) -> Circuit:
    c = Circuit(n)
    c.h(0)
    for q in range(n - 1):
        c.cx(q, q + 1)
    return c


def fig3_synthetic(n: int, rounds=8) -> Circuit:
    """Pauli bursts on the top qubit (a file-segment bit under the identity
    layout), each followed by a CPhase onto it from a low qubit."""
    c = Circuit(n)
    top = n - 1
    for q in range(n):
        c.h(q)
    for r in range(rounds):
        c.x(top)
        c.append(GateKind.Y, (top,))
        c.append(GateKind.Z, (top,))
        c.cp(math.pi / (2 + r), r % (n - 1), top)
    return c


def _t_unit(c: Circuit, ctl, tgt, aux=None):
    c.t(tgt)
    if aux is not None:
        c.t(aux)
        c.h(aux)
    c.cx(ctl, tgt)
    c.t(ctl)
    c.tdg(tgt)
    c.cx(ctl, tgt)
    c.t(tgt)
    c.cx(ctl, tgt)
    c.t(ctl)
    c.tdg(tgt)
    c.cx(ctl, tgt)


def t_chain(n: int) -> Circuit:
    """Layer of T/CX units on disjoint qubit triples (c, t, a):

        t q[t]; t q[a]; h q[a]; cx q[c],q[t]; t q[c]; tdg q[t]; cx q[c],q[t];
        t q[t]; cx q[c],q[t]; t q[c]; tdg q[t]; cx q[c],q[t];

    For n >= 10 the first unit is (5, 9, n-1); the remaining qubits form
    further units in ascending order (a trailing pair gets no aux qubit).
    """
    c = Circuit(n)
    first = (5, 9, n - 1) if n >= 10 else tuple(range(min(n, 3)))
    _t_unit(c, *first)
    rest = [q for q in range(n) if q not in first]
    for i in range(0, len(rest) - 1, 3):
        _t_unit(c, *rest[i:i + 3])
    return c


def generate(name: str, n: int, **kwargs) -> Circuit:
    if n < 2:
        raise ValueError(f"benchmarks need n >= 2, got {n}")
    makers = {"qft": qft, "ising": ising, "bell": bell, "ghz": ghz,
              "fig3-synthetic": fig3_synthetic, "t-chain": t_chain}
    if name not in makers:
        raise UnknownBenchmark(f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}")
    return makers[name](n, **kwargs)


UNITARY_KINDS = tuple(k for k in GateKind if k.is_unitary)


def random_gate(n, rng, kinds=UNITARY_KINDS):
    while True:
        kind = kinds[rng.integers(len(kinds))]
        if kind.arity <= n:
            break
    qubits = tuple(int(q) for q in rng.choice(n, size=kind.arity, replace=False))
    params = tuple(float(p) for p in rng.uniform(-2 * math.pi, 2 * math.pi, kind.num_params))
    return Gate(kind, qubits, params)


def random_circuit(n, depth, seed_or_rng=None, kinds=UNITARY_KINDS) -> Circuit:
    rng = np.random.default_rng(seed_or_rng)
    return Circuit(n, [random_gate(n, rng, kinds) for _ in range(depth)])
