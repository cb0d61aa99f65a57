import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qops.bench import generate, random_circuit
from qops.errors import DimensionMismatch
from qops.ir import Circuit, Gate, GateKind
from qops.passes import pass_virtual_swap, prologue_swaps
from qops.profiler import CounterProfile, profile_circuit
from qops.sim import SegmentLayout, modeled_stats, run_circuit
from qops.verify import circuits_equivalent, dense_oracle, unpermute

LAYOUT_111 = SegmentLayout(1, 1, 1)


def hotspot_circuit():
    c = Circuit(3)
    c.h(0)
    for _ in range(100):
        c.x(2)
    return c


def brute_force_best(counter, layout):
    """Permutation minimizing applications outside the chunk, then those in the file."""
    n = counter.num_qubits
    per_row = counter.counts.sum(axis=1)
    best = None
    for pos in itertools.permutations(range(n)):
        nonchunk = sum(int(per_row[q]) for q in range(n) if pos[q] >= layout.chunk_bits)
        infile = sum(int(per_row[q]) for q in range(n) if layout.is_file_bit(pos[q]))
        key = (nonchunk, infile)
        if best is None or key < best[0]:
            best = (key, [pos])
        elif key == best[0]:
            best[1].append(pos)
    return best


def test_hotspot_moves_to_chunk():
    c = hotspot_circuit()
    counter, _ = profile_circuit(c)
    key, optima = brute_force_best(counter, LAYOUT_111)
    assert key == (1, 0) and optima == [(1, 2, 0)]
    out, perm, rep = pass_virtual_swap(c, counter, LAYOUT_111)
    assert perm == (1, 2, 0)
    assert perm[2] == 0
    assert all(g.kind is GateKind.SWAP for g in out.gates[:2])
    assert len(out.gates) == len(c.gates) + 2
    assert circuits_equivalent(c, out)
    before = run_circuit(c, LAYOUT_111).stats.cross_block_pairs
    after = run_circuit(out, LAYOUT_111).stats.cross_block_pairs
    assert before == 100 * 4 and after == 0  # 2**(n-1) pairs per gate


def test_identity_when_hot_qubits_in_chunk():
    c = Circuit(3)
    for _ in range(10):
        c.x(0)
    counter, _ = profile_circuit(c)
    out, perm, rep = pass_virtual_swap(c, counter, LAYOUT_111)
    assert perm == (0, 1, 2)
    assert out == c
    assert rep.details["swaps_inserted"] == 0


def test_fig3_hotspot_relocated():
    c = generate("fig3-synthetic", 20)
    lay = SegmentLayout(7, 4, 9)
    counter, _ = profile_circuit(c)
    out, perm, rep = pass_virtual_swap(c, counter, lay)
    assert perm[19] < 9
    a = modeled_stats(c, lay).cross_block_pairs
    b = modeled_stats(out, lay).cross_block_pairs
    assert b <= 0.5 * a


def test_guard_keeps_identity_when_no_gain():
    # everything already in the block, so no relayout can lower the cost
    c = Circuit(3)
    c.x(2).x(2).x(1)
    counter, _ = profile_circuit(c)
    lay = SegmentLayout(0, 2, 1)
    out, perm, rep = pass_virtual_swap(c, counter, lay)
    assert out == c and perm == (0, 1, 2)
    assert rep.details["relayout_rejected"] == 1
    forced, fperm, _ = pass_virtual_swap(c, counter, lay, guard=False)
    assert fperm != (0, 1, 2)
    assert circuits_equivalent(c, forced)


@pytest.mark.parametrize("pi", list(itertools.permutations(range(4))))
def test_prologue_realizes_permutation(pi):
    swaps = prologue_swaps(pi)
    assert len(swaps) <= 3
    # |q0 q1 q2 q3> with distinct single-qubit states; after the SWAPs the state of
    # original qubit q sits at position pi[q]
    rng = np.random.default_rng(0)
    vecs = [v / np.linalg.norm(v) for v in rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))]
    psi = np.ones(1, complex)
    for v in vecs:
        psi = np.kron(v, psi)
    out = dense_oracle(Circuit(4, swaps), psi)
    np.testing.assert_allclose(unpermute(out, pi), psi, atol=1e-14)


def test_prologue_cycle_order():
    assert [g.qubits for g in prologue_swaps((1, 2, 0, 3))] == [(0, 1), (0, 2)]
    assert [g.qubits for g in prologue_swaps((1, 0, 3, 2))] == [(0, 1), (2, 3)]


def test_respects_initial_layout_perm():
    c = hotspot_circuit()
    counter, _ = profile_circuit(c)
    lay = SegmentLayout(1, 1, 1, (2, 0, 1))  # q2 already on physical 1 (middle)
    out, perm, _ = pass_virtual_swap(c, counter, lay)
    res = run_circuit(out, lay)
    assert res.stats.cross_block_pairs == 0
    assert res.state.perm[perm[2]] == 0  # hot qubit on the chunk bit
    assert circuits_equivalent(c, out)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        pass_virtual_swap(Circuit(3), CounterProfile.zeros(2), LAYOUT_111)


def test_composes_with_existing_perm():
    c = hotspot_circuit()
    c = Circuit(3, [Gate(GateKind.SWAP, (0, 1))] +
                [Gate(g.kind, tuple({0: 1, 1: 0}.get(q, q) for q in g.qubits)) for g in c.gates],
                (1, 0, 2))
    counter, _ = profile_circuit(c)
    out, perm, _ = pass_virtual_swap(c, counter, LAYOUT_111)
    assert circuits_equivalent(hotspot_circuit(), out)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 40), st.integers(0, 2**32 - 1))
def test_sound_bounded_never_worse(n, depth, seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(n, depth, rng)
    f = int(rng.integers(0, n))
    cb = int(rng.integers(1, n - f + 1))
    lay = SegmentLayout(f, n - f - cb, cb, tuple(int(p) for p in rng.permutation(n)))
    counter, _ = profile_circuit(c)
    out, perm, _ = pass_virtual_swap(c, counter, lay)
    assert len(out.gates) - len(c.gates) <= n - 1
    assert circuits_equivalent(c, out)
    assert modeled_stats(out, lay).cross_block_pairs <= modeled_stats(c, lay).cross_block_pairs
