"""Fuse long runs of single-qubit gates into one U3 (or nothing)."""
from __future__ import annotations

import cmath
import math

import numpy as np

from ..ir import Circuit, Gate, GateKind, gate_matrix
from .report import PassReport

IDENTITY_TOL = 1e-10


def zy_decompose(u):
    """(alpha, beta, gamma, delta) with u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    u = np.asarray(u, dtype=complex)
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = cmath.phase(det) / 2
    v = u * cmath.exp(-1j * alpha)
    gamma = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    # arg v11 = (beta+delta)/2, arg v10 = (beta-delta)/2
    s = cmath.phase(v[1, 1]) if abs(v[1, 1]) > 1e-12 else 0.0
    d = cmath.phase(v[1, 0]) if abs(v[1, 0]) > 1e-12 else 0.0
    return alpha, s + d, gamma, s - d


def is_identity_up_to_phase(u, tol=IDENTITY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    k = u[0, 0] if abs(u[0, 0]) > 0.5 else u[1, 1]
    if abs(k) < 0.5:
        return False
    return float(np.max(np.abs(u - (k / abs(k)) * np.eye(len(u))))) <= tol


def fuse(gates) -> np.ndarray:
    """Matrix product of single-qubit gates applied left to right."""
    m = np.eye(2, dtype=complex)
    for g in gates:
        m = gate_matrix(g.kind, g.params) @ m
    return m


def _mergeable(g: Gate) -> bool:
    return g.kind.arity == 1 and g.kind.is_unitary


def single_qubit_runs(c: Circuit):
    """Maximal runs (lists of gate indices) of consecutive single-qubit gates
    per qubit. Multi-qubit gates, measurements and barriers end a run."""
    open_runs = {}
    runs = []
    for i, g in enumerate(c.gates):
        if _mergeable(g):
            open_runs.setdefault(g.qubits[0], []).append(i)
            continue
        for q in g.qubits:
            run = open_runs.pop(q, None)
            if run:
                runs.append(run)
    runs.extend(r for r in open_runs.values() if r)
    runs.sort(key=lambda r: r[0])
    return runs


def longest_run(c: Circuit) -> int:
    return max((len(r) for r in single_qubit_runs(c)), default=0)


def pass_merge_single_qubit(c: Circuit, th=None):
    from .activator import Thresholds

    k = (th or Thresholds()).merge_run_len
    replace = {}
    drop = set()
    merged = deleted = 0
    for run in single_qubit_runs(c):
        if len(run) < k:
            continue
        gates = [c.gates[i] for i in run]
        u = fuse(gates)
        drop.update(run)
        if is_identity_up_to_phase(u):
            deleted += 1
            continue
        _, beta, gamma, delta = zy_decompose(u)
        replace[run[0]] = Gate(GateKind.U3, gates[0].qubits, (gamma, beta, delta))
        merged += 1
    out = []
    for i, g in enumerate(c.gates):
        if i in replace:
            out.append(replace[i])
        elif i not in drop:
            out.append(g)
    opt = c.copy(gates=out)
    return opt, PassReport("merge", len(c.gates), len(out),
                           {"runs_merged": merged, "runs_deleted": deleted})
