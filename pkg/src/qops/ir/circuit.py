"""Gate applications and circuits, the unit every pass rewrites."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import InvalidCircuit, ParamMismatch
from .gates import GateKind

# angle tolerance for structural equality; printed angles carry 16 significant digits
_ANGLE_RTOL = 1e-14


def _angles_close(a, b):
    return abs(a - b) <= _ANGLE_RTOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True, eq=False)
class Gate:
    """One gate application. Controls come before targets, as in OpenQASM."""

    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.qubits) != self.kind.arity:
            raise InvalidCircuit(
                f"{self.kind.name} acts on {self.kind.arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidCircuit(f"{self.kind.name} has repeated operands {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise InvalidCircuit(f"negative qubit index in {self.qubits}")
        if len(self.params) != self.kind.num_params:
            raise ParamMismatch(
                f"{self.kind.name} takes {self.kind.num_params} parameter(s), "
                f"got {len(self.params)}")
        if not all(math.isfinite(p) for p in self.params):
            raise ParamMismatch(f"non-finite angle in {self.kind.name}{self.params}")

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        return (self.kind == other.kind and self.qubits == other.qubits
                and all(_angles_close(a, b) for a, b in zip(self.params, other.params)))

    def __hash__(self):
        return hash((self.kind, self.qubits))

    def __repr__(self):
        args = ", ".join(str(q) for q in self.qubits)
        if self.params:
            ps = ", ".join(f"{p:.6g}" for p in self.params)
            return f"{self.kind.name}({ps})[{args}]"
        return f"{self.kind.name}({args})"


_SUFFIX_KINDS = (GateKind.MEASURE, GateKind.RESET)


@dataclass(eq=False)
class Circuit:
    """Ordered gate list over `num_qubits` logical qubits.

    `perm`, when set, records where each original logical qubit ended up after
    a relayout (see passes.vswap); None means identity.
    """

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    perm: tuple[int, ...] | None = None

    def __post_init__(self):
        self.gates = list(self.gates)
        if self.perm is not None:
            self.perm = tuple(int(p) for p in self.perm)
        self.validate()

    def validate(self):
        n = self.num_qubits
        if n < 1:
            raise InvalidCircuit(f"num_qubits must be positive, got {n}")
        in_suffix = False
        for i, g in enumerate(self.gates):
            if max(g.qubits) >= n:
                raise InvalidCircuit(f"gate {i} {g!r} addresses a qubit >= {n}")
            if g.kind in _SUFFIX_KINDS:
                in_suffix = True
            elif in_suffix and g.kind is not GateKind.BARRIER:
                raise InvalidCircuit(
                    f"gate {i} {g!r} follows a measurement; only a terminal "
                    "measure/reset suffix is supported")
        if self.perm is not None and sorted(self.perm) != list(range(n)):
            raise InvalidCircuit(f"perm {self.perm} is not a bijection on {n} qubits")

    @property
    def permutation(self) -> tuple[int, ...]:
        return self.perm if self.perm is not None else tuple(range(self.num_qubits))

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.num_qubits == other.num_qubits
                and self.permutation == other.permutation
                and self.gates == other.gates)

    def copy(self, gates=None, perm=None) -> "Circuit":
        return Circuit(self.num_qubits,
                       list(self.gates) if gates is None else gates,
                       self.perm if perm is None else perm)

    def count(self, *kinds) -> int:
        return sum(1 for g in self.gates if g.kind in kinds)

    def gate_count(self, include_barriers=False) -> int:
        if include_barriers:
            return len(self.gates)
        return sum(1 for g in self.gates if g.kind is not GateKind.BARRIER)

    def unitary_part(self) -> "Circuit":
        """Drop the terminal measurement suffix and barriers."""
        return Circuit(self.num_qubits, [g for g in self.gates if g.kind.is_unitary], self.perm)

    def append(self, kind, qubits, params=()) -> "Circuit":
        self.gates.append(Gate(kind, tuple(qubits), tuple(params)))
        return self

    # builder shortcuts used by generators and tests
    def h(self, q): return self.append(GateKind.H, (q,))
    def x(self, q): return self.append(GateKind.X, (q,))
    def t(self, q): return self.append(GateKind.T, (q,))
    def tdg(self, q): return self.append(GateKind.TDG, (q,))
    def rz(self, theta, q): return self.append(GateKind.RZ, (q,), (theta,))
    def rx(self, theta, q): return self.append(GateKind.RX, (q,), (theta,))
    def cx(self, c, t): return self.append(GateKind.CX, (c, t))
    def cp(self, lam, c, t): return self.append(GateKind.CPHASE, (c, t), (lam,))
    def swap(self, a, b): return self.append(GateKind.SWAP, (a, b))
    def measure_all(self):
        for q in range(self.num_qubits):
            self.append(GateKind.MEASURE, (q,))
        return self
