"""
Gate kinds and their canonical OpenQASM 2.0 matrices.

The ordinal of a GateKind is its column in the counter profile and its
gate-type code in the context profile.

Matrix convention: for a k-qubit gate with operands (q0, q1, ...), the row
index is b = bit(q0) * 2**(k-1) + bit(q1) * 2**(k-2) + ..., i.e. the first
operand is the most significant bit. Controlled kinds list their controls
first, so their matrices are block-diag(I, U_target).
"""
from __future__ import annotations

import cmath
import math
from enum import IntEnum
from functools import lru_cache

import numpy as np

from ..errors import ParamMismatch


class GateKind(IntEnum):
    H = 0
    S = 1
    T = 2
    X = 3
    Y = 4
    Z = 5
    SDG = 6
    TDG = 7
    RX = 8
    RY = 9
    RZ = 10
    CPHASE = 11
    CU1 = 12
    SWAP = 13
    U1 = 14
    U2 = 15
    U3 = 16
    CX = 17
    CZ = 18
    CY = 19
    CH = 20
    CRX = 21
    CRY = 22
    CRZ = 23
    CU3 = 24
    CCX = 25
    CSWAP = 26
    ID = 27
    SX = 28
    SXDG = 29
    MEASURE = 30
    RESET = 31
    BARRIER = 32

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def num_params(self) -> int:
        return _NPARAMS.get(self, 0)

    @property
    def num_controls(self) -> int:
        return _NCONTROLS.get(self, 0)

    @property
    def qasm_name(self) -> str:
        return QASM_NAMES[self]

    @property
    def is_unitary(self) -> bool:
        return self not in NON_UNITARY


NUM_KINDS = len(GateKind)

_TWO_QUBIT = {
    GateKind.CPHASE, GateKind.CU1, GateKind.SWAP, GateKind.CX, GateKind.CZ,
    GateKind.CY, GateKind.CH, GateKind.CRX, GateKind.CRY, GateKind.CRZ, GateKind.CU3,
}
_THREE_QUBIT = {GateKind.CCX, GateKind.CSWAP}
_ARITY = {k: 3 if k in _THREE_QUBIT else 2 if k in _TWO_QUBIT else 1 for k in GateKind}

_NPARAMS = {
    GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1, GateKind.CPHASE: 1, GateKind.CU1: 1,
    GateKind.U1: 1, GateKind.U2: 2, GateKind.U3: 3, GateKind.CRX: 1, GateKind.CRY: 1,
    GateKind.CRZ: 1, GateKind.CU3: 3,
}

_NCONTROLS = {
    GateKind.CPHASE: 1, GateKind.CU1: 1, GateKind.CX: 1, GateKind.CZ: 1, GateKind.CY: 1,
    GateKind.CH: 1, GateKind.CRX: 1, GateKind.CRY: 1, GateKind.CRZ: 1, GateKind.CU3: 1,
    GateKind.CCX: 2, GateKind.CSWAP: 1,
}

NON_UNITARY = frozenset({GateKind.MEASURE, GateKind.RESET, GateKind.BARRIER})

QASM_NAMES = {
    GateKind.H: "h", GateKind.S: "s", GateKind.T: "t", GateKind.X: "x", GateKind.Y: "y",
    GateKind.Z: "z", GateKind.SDG: "sdg", GateKind.TDG: "tdg", GateKind.RX: "rx",
    GateKind.RY: "ry", GateKind.RZ: "rz", GateKind.CPHASE: "cp", GateKind.CU1: "cu1",
    GateKind.SWAP: "swap", GateKind.U1: "u1", GateKind.U2: "u2", GateKind.U3: "u3",
    GateKind.CX: "cx", GateKind.CZ: "cz", GateKind.CY: "cy", GateKind.CH: "ch",
    GateKind.CRX: "crx", GateKind.CRY: "cry", GateKind.CRZ: "crz", GateKind.CU3: "cu3",
    GateKind.CCX: "ccx", GateKind.CSWAP: "cswap", GateKind.ID: "id", GateKind.SX: "sx",
    GateKind.SXDG: "sxdg", GateKind.MEASURE: "measure", GateKind.RESET: "reset",
    GateKind.BARRIER: "barrier",
}

# Accepted spellings beyond the canonical ones; lookup is case-insensitive.
QASM_ALIASES = {
    "cphase": GateKind.CPHASE, "u": GateKind.U3, "p": GateKind.U1, "cnot": GateKind.CX,
    "toffoli": GateKind.CCX, "fredkin": GateKind.CSWAP, "iden": GateKind.ID,
    "i": GateKind.ID, "cu": GateKind.CU3,
}

NAME_TO_KIND = {name: kind for kind, name in QASM_NAMES.items()}
NAME_TO_KIND.update(QASM_ALIASES)

SINGLE_QUBIT_UNITARY = frozenset(k for k in GateKind if k.arity == 1 and k.is_unitary)


def _u3(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([
        [c, -cmath.exp(1j * lam) * s],
        [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
    ], dtype=complex)


def _rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t):
    return np.array([[cmath.exp(-0.5j * t), 0], [0, cmath.exp(0.5j * t)]], dtype=complex)


def _phase(lam):
    return np.array([[1, 0], [0, cmath.exp(1j * lam)]], dtype=complex)


def _controlled(u, controls=1):
    d = u.shape[0]
    full = np.eye(d << controls, dtype=complex)
    full[-d:, -d:] = u
    return full


_R2 = 1 / math.sqrt(2)
_FIXED_1Q = {
    GateKind.H: np.array([[_R2, _R2], [_R2, -_R2]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.T: _phase(math.pi / 4),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.TDG: _phase(-math.pi / 4),
    GateKind.ID: np.eye(2, dtype=complex),
    GateKind.SX: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    GateKind.SXDG: 0.5 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex),
    # no amplitude action; terminal measurement is read out, barriers are no-ops
    GateKind.MEASURE: np.eye(2, dtype=complex),
    GateKind.RESET: np.eye(2, dtype=complex),
    GateKind.BARRIER: np.eye(2, dtype=complex),
}

_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def _build(kind, params):
    if kind in _FIXED_1Q:
        return _FIXED_1Q[kind].copy()
    if kind is GateKind.RX:
        return _rx(*params)
    if kind is GateKind.RY:
        return _ry(*params)
    if kind is GateKind.RZ:
        return _rz(*params)
    if kind is GateKind.U1:
        return _phase(*params)
    if kind is GateKind.U2:
        return _u3(math.pi / 2, *params)
    if kind is GateKind.U3:
        return _u3(*params)
    if kind is GateKind.SWAP:
        return _SWAP.copy()
    if kind in (GateKind.CPHASE, GateKind.CU1):
        return _controlled(_phase(*params))
    if kind is GateKind.CX:
        return _controlled(_FIXED_1Q[GateKind.X])
    if kind is GateKind.CY:
        return _controlled(_FIXED_1Q[GateKind.Y])
    if kind is GateKind.CZ:
        return _controlled(_FIXED_1Q[GateKind.Z])
    if kind is GateKind.CH:
        return _controlled(_FIXED_1Q[GateKind.H])
    if kind is GateKind.CRX:
        return _controlled(_rx(*params))
    if kind is GateKind.CRY:
        return _controlled(_ry(*params))
    if kind is GateKind.CRZ:
        return _controlled(_rz(*params))
    if kind is GateKind.CU3:
        return _controlled(_u3(*params))
    if kind is GateKind.CCX:
        return _controlled(_FIXED_1Q[GateKind.X], controls=2)
    if kind is GateKind.CSWAP:
        return _controlled(_SWAP)
    raise AssertionError(kind)


def gate_matrix(kind: GateKind, params=()) -> np.ndarray:
    """Return the unitary of `kind` as a fresh complex array."""
    kind = GateKind(kind)
    params = tuple(float(p) for p in params)
    if len(params) != kind.num_params:
        raise ParamMismatch(
            f"{kind.name} takes {kind.num_params} parameter(s), got {len(params)}")
    return _cached_matrix(kind, params).copy()


@lru_cache(maxsize=4096)
def _cached_matrix(kind, params):
    m = _build(kind, params)
    m.setflags(write=False)
    return m


def target_matrix(kind: GateKind, params=()) -> np.ndarray:
    """The block acting on the targets when every control is 1."""
    kind = GateKind(kind)
    m = gate_matrix(kind, params)
    if kind.num_controls == 0:
        return m
    d = 1 << (kind.arity - kind.num_controls)
    return m[-d:, -d:].copy()
