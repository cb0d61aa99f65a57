"""
Segmented full-state storage and gate kernels.

The 2**n amplitudes (physical index order) are split into 2**f blocks of
2**(m+c) amplitudes; block b holds indices [b * 2**(m+c), (b+1) * 2**(m+c)).
Blocks past the resident budget live in one memory-mapped file each.

Gate kernels work on groups of blocks: a gate touching k file bits needs the
2**k blocks that differ only in those bits, and different groups never share
a block, so groups are the unit handed to the worker pool.
"""
from __future__ import annotations

import os
import shutil
import tempfile
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import CapacityExceeded, LayoutMismatch, QubitOutOfRange, UnsupportedGate
from ..ir import Gate, GateKind, gate_matrix, target_matrix
from .layout import SegmentLayout

DEFAULT_MAX_QUBITS = 30

_NOOP_KINDS = (GateKind.ID, GateKind.BARRIER, GateKind.MEASURE)


@dataclass
class BlockAccessStats:
    """Block traffic in the pairwise-kernel cost model.

    Every kernel updates amplitudes in pairs along its target bit (in 4-tuples
    for two-target gates), restricted to amplitudes whose controls are 1. A pair
    whose members sit in different blocks is a cross-block pair.
    """

    blocks_touched: int = 0
    cross_block_pairs: int = 0

    def __iadd__(self, other):
        self.blocks_touched += other.blocks_touched
        self.cross_block_pairs += other.cross_block_pairs
        return self

    def __add__(self, other):
        return BlockAccessStats(self.blocks_touched + other.blocks_touched,
                                self.cross_block_pairs + other.cross_block_pairs)


class StateVector:
    def __init__(self, layout: SegmentLayout, spill_threshold=None, workers=1,
                 spill_dir=None):
        self.layout = layout
        self.perm = list(layout.perm)
        self.workers = max(1, int(workers))
        n_blocks, size = layout.num_blocks, layout.block_size
        resident = n_blocks if spill_threshold is None else max(0, int(spill_threshold))
        self._tmpdir = None
        self.blocks = []
        for b in range(n_blocks):
            if b < resident:
                self.blocks.append(np.zeros(size, dtype=np.complex128))
            else:
                if self._tmpdir is None:
                    self._tmpdir = tempfile.mkdtemp(prefix="qops-blocks-", dir=spill_dir)
                    self._finalizer = weakref.finalize(
                        self, shutil.rmtree, self._tmpdir, ignore_errors=True)
                path = os.path.join(self._tmpdir, f"block{b:06d}.bin")
                self.blocks.append(np.memmap(path, dtype=np.complex128, mode="w+",
                                             shape=(size,)))
        self.blocks[0][0] = 1.0
        # still exactly |0...0>, so qubit permutations are free
        self.pristine = True
        self._pool = None

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    @property
    def spilled_blocks(self) -> int:
        return sum(isinstance(b, np.memmap) for b in self.blocks)

    def current_layout(self) -> SegmentLayout:
        return self.layout.with_perm(self.perm)

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None
        if self._tmpdir is not None:
            self.blocks = [np.array(b) for b in self.blocks]
            self._finalizer()
            self._tmpdir = None

    def physical_amplitudes(self) -> np.ndarray:
        return np.concatenate([np.asarray(b) for b in self.blocks])

    def norm(self) -> float:
        return float(np.sqrt(sum(np.vdot(b, b).real for b in self.blocks)))

    def _map(self, fn, items):
        if self.workers == 1 or len(items) < 2:
            for it in items:
                fn(it)
            return
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.workers)
        list(self._pool.map(fn, items))

    def apply(self, controls, targets, u) -> BlockAccessStats:
        """Apply `u` to physical `targets` (first target = most significant
        bit of u) on the subspace where every physical control bit is 1."""
        lay = self.layout
        inner = lay.block_bits
        f = lay.file_bits
        n = lay.num_qubits

        file_ctrl = [p - inner for p in controls if p >= inner]
        file_tgt = sorted(p - inner for p in targets if p >= inner)
        k = len(file_tgt)
        ctrl_mask = sum(1 << b for b in file_ctrl)
        tgt_mask = sum(1 << b for b in file_tgt)
        bases = [g for g in range(1 << f)
                 if g & ctrl_mask == ctrl_mask and g & tgt_mask == 0]
        offsets = []
        for j in range(1 << k):
            off = 0
            for i, b in enumerate(file_tgt):
                if (j >> i) & 1:
                    off |= 1 << b
            offsets.append(off)

        def axis(p):
            if p >= inner:
                return k - 1 - file_tgt.index(p - inner)
            return k + inner - 1 - p

        ctrl_axes = sorted(axis(p) for p in controls if p < inner)
        index = [slice(None)] * (k + inner)
        for a in ctrl_axes:
            index[a] = 1
        index = tuple(index)
        tgt_axes = []
        for p in targets:
            a = axis(p)
            tgt_axes.append(a - sum(1 for ca in ctrl_axes if ca < a))
        t = len(targets)
        shape = (2,) * (k + inner)
        diag = t == 1 and u[0, 1] == 0 and u[1, 0] == 0

        def run(base):
            if k == 0:
                arr = self.blocks[base]
            else:
                arr = np.stack([self.blocks[base | off] for off in offsets])
            sub = arr.reshape(shape)[index]
            moved = np.moveaxis(sub, tgt_axes, list(range(t)))
            if diag:
                if u[0, 0] != 1:
                    moved[0] *= u[0, 0]
                if u[1, 1] != 1:
                    moved[1] *= u[1, 1]
            elif t == 1:
                a0 = moved[0].copy()
                a1 = moved[1]
                moved[0] = u[0, 0] * a0 + u[0, 1] * a1
                moved[1] = u[1, 0] * a0 + u[1, 1] * a1
            else:
                flat = moved.reshape((1 << t, -1))
                moved[...] = (u @ flat).reshape(moved.shape)
            if k:
                for i, off in enumerate(offsets):
                    self.blocks[base | off][:] = arr[i]

        self._map(run, bases)

        active = 1 << (n - len(controls))
        pairs = active >> t
        crossing = any(p >= inner for p in targets)
        return BlockAccessStats(
            blocks_touched=1 << (f - len(file_ctrl)),
            cross_block_pairs=pairs if crossing else 0,
        )


def init_state(n: int, layout: SegmentLayout | None = None, spill_threshold=None, *,
               max_qubits=DEFAULT_MAX_QUBITS, workers=1, spill_dir=None) -> StateVector:
    """|0...0> over `layout`; blocks with index >= spill_threshold go to files."""
    if layout is None:
        layout = SegmentLayout.default(n)
    if layout.num_qubits != n:
        raise LayoutMismatch(
            f"layout {layout.spec()} sums to {layout.num_qubits}, expected {n} qubits")
    if n > max_qubits:
        raise CapacityExceeded(f"{n} qubits exceeds the cap of {max_qubits}")
    return StateVector(layout, spill_threshold, workers, spill_dir)


_SWAP_U = gate_matrix(GateKind.SWAP)


def apply_gate(state: StateVector, g: Gate, virtual_swap=True) -> BlockAccessStats:
    """Apply one gate in place and return its block traffic."""
    n = state.num_qubits
    if any(q >= n for q in g.qubits):
        raise QubitOutOfRange(f"{g!r} addresses a qubit outside [0, {n})")
    kind = g.kind
    if kind in _NOOP_KINDS:
        return BlockAccessStats()
    if kind is GateKind.RESET:
        raise UnsupportedGate("reset is not supported by the simulator")
    phys = [state.perm[q] for q in g.qubits]
    if kind is GateKind.SWAP:
        a, b = g.qubits
        if state.pristine:
            # |0...0> is invariant under any qubit exchange
            return BlockAccessStats()
        if virtual_swap:
            state.perm[a], state.perm[b] = state.perm[b], state.perm[a]
            return BlockAccessStats()
        return state.apply([], phys, _SWAP_U)
    nc = kind.num_controls
    stats = state.apply(phys[:nc], phys[nc:], target_matrix(kind, g.params))
    state.pristine = False
    return stats


def get_amplitudes(state: StateVector) -> np.ndarray:
    """Amplitudes indexed by logical basis state (bit q of the index = qubit q)."""
    n = state.num_qubits
    phys = state.physical_amplitudes().reshape((2,) * n)
    # tensor axis n-1-p carries physical bit p
    axes = [n - 1 - state.perm[n - 1 - i] for i in range(n)]
    return np.ascontiguousarray(phys.transpose(axes)).reshape(-1)


def modeled_stats(c, layout: SegmentLayout | None = None, virtual_swap=True) -> BlockAccessStats:
    """Cumulative BlockAccessStats that run_circuit would report, computed
    from the cost model alone (no amplitudes are allocated)."""
    n = c.num_qubits
    if layout is None:
        layout = SegmentLayout.default(n)
    layout.check(n)
    inner, f = layout.block_bits, layout.file_bits
    perm = list(layout.perm)
    pristine = True
    total = BlockAccessStats()
    for g in c.gates:
        kind = g.kind
        if kind in _NOOP_KINDS or kind is GateKind.BARRIER:
            continue
        phys = [perm[q] for q in g.qubits]
        if kind is GateKind.SWAP:
            if pristine:
                continue
            if virtual_swap:
                a, b = g.qubits
                perm[a], perm[b] = perm[b], perm[a]
                continue
            controls, targets = [], phys
        else:
            nc = kind.num_controls
            controls, targets = phys[:nc], phys[nc:]
            pristine = False
        pairs = (1 << (n - len(controls))) >> len(targets)
        total += BlockAccessStats(
            1 << (f - sum(p >= inner for p in controls)),
            pairs if any(p >= inner for p in targets) else 0)
    return total
