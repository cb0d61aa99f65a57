"""
Rotation folding: merge Z-type phase gates whose Pauli terms coincide once
pushed through the Clifford gates between them.

Every phase gate exp(-i theta/2 Z_q) opens a tracked rotation. As later
Cliffords C are swept past, its term is kept as C Z_q C^dagger = sign * P.
A new phase gate on Z_r with P == Z_r is equal to a rotation by sign*phi at
the earlier gate's position, so the angles add there and the later gate goes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from ..ir import Circuit, Gate, GateKind, gate_matrix
from .report import PassReport

TWO_PI = 2 * math.pi
ANGLE_TOL = 1e-12

PHASE_ANGLES = {
    GateKind.T: math.pi / 4,
    GateKind.TDG: -math.pi / 4,
    GateKind.S: math.pi / 2,
    GateKind.SDG: -math.pi / 2,
    GateKind.Z: math.pi,
}
PHASE_KINDS = frozenset(PHASE_ANGLES) | {GateKind.RZ, GateKind.U1}

# S, Sdg and Z are phase gates and enter as rotations; everything here only
# conjugates.
CONJUGATORS = frozenset({GateKind.H, GateKind.X, GateKind.Y, GateKind.SX, GateKind.SXDG,
                         GateKind.CX, GateKind.CZ, GateKind.SWAP})

SELF_INVERSE = frozenset({GateKind.CX, GateKind.H, GateKind.X, GateKind.CZ, GateKind.SWAP,
                          GateKind.Z, GateKind.Y})

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _pauli_matrix(letters):
    m = np.ones((1, 1), dtype=complex)
    for ch in letters:  # first letter = most significant operand
        m = np.kron(m, _PAULI[ch])
    return m


@lru_cache(maxsize=None)
def conjugate_local(kind: GateKind, letters: str):
    """U P U^dagger for a Pauli on the gate's operands, as (sign, letters)."""
    u = gate_matrix(kind)
    m = u @ _pauli_matrix(letters) @ u.conj().T
    for cand in product("IXYZ", repeat=len(letters)):
        p = _pauli_matrix(cand)
        coeff = np.trace(p @ m) / len(m)
        if abs(abs(coeff) - 1) < 1e-9:
            sign = 1 if coeff.real > 0 else -1
            return sign, "".join(cand)
    raise ValueError(f"{kind.name} is not a Clifford")


def phase_angle(g: Gate) -> float:
    if g.kind in PHASE_ANGLES:
        return PHASE_ANGLES[g.kind]
    return g.params[0]


@dataclass
class TrackedRotation:
    origin: int
    qubit: int
    angle: float
    pauli: dict  # qubit -> "X" | "Y" | "Z"
    sign: int = 1
    merged: bool = False

    def key(self):
        return tuple(sorted(self.pauli.items()))

    def conjugate(self, g: Gate):
        local = "".join(self.pauli.get(q, "I") for q in g.qubits)
        if local.count("I") == len(local):
            return
        s, out = conjugate_local(g.kind, local)
        self.sign *= s
        for q, ch in zip(g.qubits, out):
            if ch == "I":
                self.pauli.pop(q, None)
            else:
                self.pauli[q] = ch


def canonical_gate(angle: float, q: int):
    """Cheapest gate for exp-phase `angle` on q, or None for identity."""
    a = angle % TWO_PI
    for target, kind in ((0.0, None), (math.pi / 4, GateKind.T), (math.pi / 2, GateKind.S),
                         (math.pi, GateKind.Z), (3 * math.pi / 2, GateKind.SDG),
                         (7 * math.pi / 4, GateKind.TDG), (TWO_PI, None)):
        if abs(a - target) <= ANGLE_TOL:
            return None if kind is None else Gate(kind, (q,))
    return Gate(GateKind.RZ, (q,), (a,))


def _sweep(gates):
    open_rots: list[TrackedRotation] = []
    rots = []
    dropped = set()
    for i, g in enumerate(gates):
        kind = g.kind
        if kind in PHASE_KINDS:
            q = g.qubits[0]
            key = ((q, "Z"),)
            hit = next((r for r in open_rots if r.key() == key), None)
            if hit is not None:
                hit.angle += hit.sign * phase_angle(g)
                hit.merged = True
                dropped.add(i)
                continue
            # a rotation anticommuting with Z_q cannot be moved past this gate
            open_rots = [r for r in open_rots if r.pauli.get(q, "Z") == "Z"]
            r = TrackedRotation(i, q, phase_angle(g), {q: "Z"})
            open_rots.append(r)
            rots.append(r)
        elif kind in CONJUGATORS:
            for r in open_rots:
                r.conjugate(g)
        else:
            qs = set(g.qubits)
            open_rots = [r for r in open_rots if not qs & r.pauli.keys()]
    out = []
    folded = 0
    by_origin = {r.origin: r for r in rots if r.merged}
    for i, g in enumerate(gates):
        if i in dropped:
            folded += 1
            continue
        r = by_origin.get(i)
        if r is None:
            out.append(g)
            continue
        new = canonical_gate(r.angle, r.qubit)
        if new is not None:
            out.append(new)
    return out, folded


def cancel_adjacent(gates):
    """Drop wire-adjacent pairs of identical self-inverse gates, repeatedly."""
    alive = [True] * len(gates)
    stacks = {}
    removed = 0
    for i, g in enumerate(gates):
        qs = g.qubits
        tops = [stacks[q][-1] if stacks.get(q) else None for q in qs]
        j = tops[0]
        if (g.kind in SELF_INVERSE and j is not None and all(t == j for t in tops)
                and _same_action(gates[j], g)):
            alive[j] = alive[i] = False
            removed += 2
            for q in qs:
                stacks[q].pop()
            continue
        for q in qs:
            stacks.setdefault(q, []).append(i)
    return [g for g, a in zip(gates, alive) if a], removed


def _same_action(a: Gate, b: Gate) -> bool:
    if a.kind is not b.kind:
        return False
    if a.kind in (GateKind.CZ, GateKind.SWAP):
        return sorted(a.qubits) == sorted(b.qubits)
    return a.qubits == b.qubits


def pass_rotation_fold(c: Circuit):
    gates = list(c.gates)
    folded = cancelled = 0
    while True:
        gates, f = _sweep(gates)
        gates, x = cancel_adjacent(gates)
        folded += f
        cancelled += x
        if f == 0 and x == 0:
            break
    opt = c.copy(gates=gates)
    return opt, PassReport("rotfold", len(c.gates), len(gates),
                           {"rotations_folded": folded, "gates_cancelled": cancelled})
