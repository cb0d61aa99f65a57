"""Circuit model, OpenQASM 2.0 reader/writer and gate matrices."""
from .circuit import Circuit, Gate
from .gates import NUM_KINDS, GateKind, gate_matrix, target_matrix
from .qasm import emit_qasm, parse_qasm

__all__ = ["Circuit", "Gate", "GateKind", "NUM_KINDS", "gate_matrix", "target_matrix",
           "emit_qasm", "parse_qasm"]
