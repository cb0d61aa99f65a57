"""Gate-by-gate circuit execution with profiling hooks."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import UnsupportedGate
from ..ir import Circuit, GateKind
from .layout import SegmentLayout
from .statevector import (DEFAULT_MAX_QUBITS, BlockAccessStats, StateVector, apply_gate,
                          get_amplitudes, init_state)


@dataclass
class SimResult:
    state: StateVector
    stats: BlockAccessStats
    probabilities: np.ndarray | None = None
    per_gate: list[BlockAccessStats] = field(default_factory=list)
    wall_ns: int = 0
    gates_applied: int = 0

    def amplitudes(self) -> np.ndarray:
        return get_amplitudes(self.state)


def run_circuit(c: Circuit, layout: SegmentLayout | None = None, *, profilers=(),
                virtual_swap=True, spill_threshold=None, workers=1,
                max_qubits=DEFAULT_MAX_QUBITS, keep_per_gate=False) -> SimResult:
    """Simulate `c` from |0...0>.

    Each profiler gets ``begin(num_qubits, start_ns)`` once, then
    ``record_gate(gate, timestamp_ns)`` for every non-barrier gate, with the
    timestamp read right after that gate's kernel returns.
    """
    if layout is None:
        layout = SegmentLayout.default(c.num_qubits)
    layout.check(c.num_qubits)
    if any(g.kind is GateKind.RESET for g in c.gates):
        raise UnsupportedGate("reset is not supported by the simulator")
    state = init_state(c.num_qubits, layout, spill_threshold, max_qubits=max_qubits,
                       workers=workers)
    total = BlockAccessStats()
    per_gate = []
    measured = False
    clock = time.monotonic_ns
    t0 = clock()
    for p in profilers:
        p.begin(c.num_qubits, t0)
    applied = 0
    for g in c.gates:
        if g.kind is GateKind.BARRIER:
            continue
        s = apply_gate(state, g, virtual_swap=virtual_swap)
        if profilers:
            ts = clock()
            for p in profilers:
                p.record_gate(g, ts)
        total += s
        applied += 1
        if keep_per_gate:
            per_gate.append(s)
        measured |= g.kind is GateKind.MEASURE
    wall = clock() - t0
    probs = np.abs(get_amplitudes(state)) ** 2 if measured else None
    return SimResult(state, total, probs, per_gate, wall, applied)
