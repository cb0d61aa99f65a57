"""Segmented Schrödinger-style simulator."""
from .layout import SegmentLayout
from .runner import SimResult, run_circuit
from .statevector import (BlockAccessStats, StateVector, apply_gate, get_amplitudes,
                          init_state, modeled_stats)

__all__ = ["SegmentLayout", "StateVector", "BlockAccessStats", "SimResult", "init_state",
           "apply_gate", "get_amplitudes", "modeled_stats", "run_circuit"]
