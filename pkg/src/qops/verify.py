"""
Dense reference simulation and circuit equivalence checks.

The oracle builds each gate's full 2**n operator as P^T (I (x) U) P with
scipy.sparse, where P is the qubit permutation that moves the operands to the
low bits. It shares nothing with the segmented simulator except gate_matrix.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .errors import LengthMismatch, TooLarge, UnsupportedGate
from .ir import Circuit, GateKind, gate_matrix

MAX_DENSE_QUBITS = 12
NUM_RANDOM_INPUTS = 8


def _qubit_permutation(n, order):
    """Sparse P with P|i> = |i'>, bit j of i' = bit order[j] of i."""
    idx = np.arange(1 << n)
    out = np.zeros_like(idx)
    for j, q in enumerate(order):
        out |= ((idx >> q) & 1) << j
    return sp.csr_matrix((np.ones(1 << n), (out, idx)), shape=(1 << n, 1 << n))


def expand_operator(n, kind, qubits, params=()):
    """Full 2**n x 2**n sparse operator for one gate."""
    u = sp.csr_matrix(gate_matrix(kind, params))
    a = len(qubits)
    # first operand is the most significant bit of u, so it goes to bit a-1
    low = list(reversed(qubits))
    order = low + [q for q in range(n) if q not in qubits]
    p = _qubit_permutation(n, order)
    local = sp.kron(sp.identity(1 << (n - a), format="csr"), u, format="csr")
    return p.T @ local @ p


def dense_oracle(c: Circuit, initial=None) -> np.ndarray:
    """Final state(s) in logical order. `initial` may be a vector or a
    (2**n, k) matrix of column states; default |0...0>."""
    n = c.num_qubits
    if n > MAX_DENSE_QUBITS:
        raise TooLarge(f"dense oracle handles at most {MAX_DENSE_QUBITS} qubits, got {n}")
    if initial is None:
        psi = np.zeros(1 << n, dtype=complex)
        psi[0] = 1
    else:
        psi = np.array(initial, dtype=complex)
    for g in c.gates:
        if g.kind is GateKind.RESET:
            raise UnsupportedGate("reset has no unitary action")
        if not g.kind.is_unitary or g.kind is GateKind.ID:
            continue
        psi = expand_operator(n, g.kind, g.qubits, g.params) @ psi
    return psi


def equal_up_to_global_phase(a, b, tol=1e-9):
    """(equal, residual) with the phase fixed by b's largest-magnitude entry."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise LengthMismatch(f"state shapes differ: {a.shape} vs {b.shape}")
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) == 0:
        residual = float(np.max(np.abs(a))) if a.size else 0.0
        return residual <= tol, residual
    ratio = a[k] / b[k]
    phase = ratio / abs(ratio) if abs(ratio) > 0 else 1.0
    residual = float(np.max(np.abs(a - phase * b)))
    return residual <= tol, residual


def unpermute(state, perm):
    """Reorder a logical-order state whose original qubit q sits at perm[q]."""
    state = np.asarray(state)
    n = len(perm)
    if tuple(perm) == tuple(range(n)):
        return state
    idx = np.arange(1 << n)
    src = np.zeros_like(idx)
    for q, p in enumerate(perm):
        src |= ((idx >> q) & 1) << p
    return state[src]


def random_product_states(n, count=NUM_RANDOM_INPUTS, seed=0):
    """Columns are tensor products of Haar-random single-qubit states."""
    rng = np.random.default_rng(seed)
    cols = []
    for _ in range(count):
        psi = np.ones(1, dtype=complex)
        for _q in range(n):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v /= np.linalg.norm(v)
            psi = np.kron(v, psi)  # qubit q ends up at bit q
        cols.append(psi)
    return np.stack(cols, axis=1)


def _inputs(n, seed):
    zero = np.zeros((1 << n, 1), dtype=complex)
    zero[0, 0] = 1
    return np.hstack([zero, random_product_states(n, NUM_RANDOM_INPUTS, seed)])


def circuits_equivalent(c1: Circuit, c2: Circuit, perm=None, tol=1e-9, seed=0,
                        return_residual=False):
    """Compare c1 and c2 on |0...0> and 8 seeded random product inputs.

    c2's outputs are un-permuted through `perm` (default: c2.perm) before the
    comparison up to global phase.
    """
    if c1.num_qubits != c2.num_qubits:
        raise LengthMismatch(f"{c1.num_qubits} vs {c2.num_qubits} qubits")
    n = c1.num_qubits
    if n > MAX_DENSE_QUBITS:
        raise TooLarge(f"equivalence check handles at most {MAX_DENSE_QUBITS} qubits")
    if perm is None:
        perm = c2.permutation
    inputs = _inputs(n, seed)
    out1 = dense_oracle(c1, inputs)
    out2 = dense_oracle(c2, inputs)
    worst = 0.0
    for j in range(inputs.shape[1]):
        _, r = equal_up_to_global_phase(out1[:, j], unpermute(out2[:, j], perm), tol)
        worst = max(worst, r)
    ok = worst <= tol
    return (ok, worst) if return_residual else ok


def statevector_equivalent(c1: Circuit, c2: Circuit, perm=None, tol=1e-9, seed=0,
                           layout=None, workers=1, return_residual=False):
    """Same check as circuits_equivalent but on the segmented simulator, for
    circuits too wide for the dense oracle. Random inputs are prepared by a
    U3 layer in front of both circuits."""
    from .ir import Gate
    from .sim import run_circuit

    if c1.num_qubits != c2.num_qubits:
        raise LengthMismatch(f"{c1.num_qubits} vs {c2.num_qubits} qubits")
    n = c1.num_qubits
    if perm is None:
        perm = c2.permutation
    rng = np.random.default_rng(seed)
    preps = [[]]
    for _ in range(NUM_RANDOM_INPUTS):
        layer = []
        for q in range(n):
            theta = 2 * np.arccos(np.sqrt(rng.uniform()))
            layer.append(Gate(GateKind.U3, (q,), (theta, rng.uniform(0, 2 * np.pi), 0.0)))
        preps.append(layer)
    worst = 0.0
    for prep in preps:
        a = run_circuit(Circuit(n, prep + c1.unitary_part().gates), layout,
                        workers=workers).amplitudes()
        b = run_circuit(Circuit(n, prep + c2.unitary_part().gates), layout,
                        workers=workers).amplitudes()
        _, r = equal_up_to_global_phase(a, unpermute(b, perm), tol)
        worst = max(worst, r)
    ok = worst <= tol
    return (ok, worst) if return_residual else ok
