"""
Virtual swap: move frequently-targeted qubits into the chunk segment.

The optimized circuit is a prologue of SWAPs realizing a permutation pi,
followed by the original gates with every qubit q renamed to pi(q). On the
simulator's |0...0> start state the prologue costs nothing, so the hot
qubits are chunk-resident for the whole run. The output state has original
qubit q at logical position pi(q); `Circuit.perm` records pi so verifiers
can un-permute it.
"""
from __future__ import annotations

from ..errors import DimensionMismatch
from ..ir import Circuit, Gate, GateKind
from ..sim import SegmentLayout, modeled_stats
from .report import PassReport

_UNSCORED = (GateKind.SWAP, GateKind.ID, GateKind.MEASURE, GateKind.RESET, GateKind.BARRIER)


def qubit_scores(counter) -> list[int]:
    """Per-qubit heat: 1 per single-qubit application, 2 per multi-qubit
    target appearance (SWAPs and no-op kinds are not counted)."""
    scores = []
    for row in counter.counts:
        s = 0
        for kind in GateKind:
            if kind in _UNSCORED:
                continue
            s += int(row[kind]) * (1 if kind.arity == 1 else 2)
        scores.append(s)
    return scores


def control_counts(c: Circuit) -> list[int]:
    out = [0] * c.num_qubits
    for g in c.gates:
        for q in g.qubits[:g.kind.num_controls]:
            out[q] += 1
    return out


def _pick(candidates, size, key, fallback):
    chosen = sorted(candidates, key=key)[:size]
    if len(chosen) < size:
        # slots nobody needs stay with their current residents
        chosen += [q for q in fallback if q not in chosen][:size - len(chosen)]
    return chosen


def target_positions(scores, controls, layout: SegmentLayout) -> list[int]:
    """Physical position for every logical qubit after relayout.

    The c hottest qubits (ties: lower index) take the chunk, the next m the
    middle segment, with heavy controls ranked last so they end up in file
    positions. A qubit that stays in its segment keeps its position;
    newcomers fill the vacated positions of that segment in rank order.
    """
    n = layout.num_qubits
    cur = list(layout.perm)
    cb, inner = layout.chunk_bits, layout.block_bits
    seg = [0 if cur[q] < cb else 1 if cur[q] < inner else 2 for q in range(n)]
    hot = [q for q in range(n) if scores[q] > 0]
    by_pos = sorted(range(n), key=lambda q: cur[q])
    chunk = _pick(hot, cb, lambda q: (-scores[q], q), [q for q in by_pos if seg[q] == 0])
    rest = [q for q in hot if q not in chunk]
    spare = ([q for q in by_pos if seg[q] == 1 and q not in chunk]
             + [q for q in by_pos if seg[q] == 0 and q not in chunk]
             + [q for q in by_pos if seg[q] == 2])
    middle = _pick(rest, inner - cb, lambda q: (-scores[q], controls[q], q), spare)
    taken = set(chunk) | set(middle)
    outer = [q for q in range(n) if q not in taken]
    target = list(cur)
    for s, members in enumerate((chunk, middle, outer)):
        staying = {q for q in members if seg[q] == s}
        free = sorted(cur[q] for q in range(n) if seg[q] == s and q not in staying)
        for q, p in zip([q for q in members if q not in staying], free):
            target[q] = p
    return target


def prologue_swaps(pi) -> list[Gate]:
    """SWAPs that move the content of qubit q to position pi[q], cycle by
    cycle in increasing order of each cycle's smallest element."""
    seen = [False] * len(pi)
    out = []
    for a in range(len(pi)):
        if seen[a]:
            continue
        seen[a] = True
        b = pi[a]
        while b != a:
            seen[b] = True
            out.append(Gate(GateKind.SWAP, (a, b)))
            b = pi[b]
    return out


def apply_relabel(c: Circuit, pi) -> Circuit:
    gates = prologue_swaps(pi)
    gates += [Gate(g.kind, tuple(pi[q] for q in g.qubits), g.params) for g in c.gates]
    old = c.permutation
    return Circuit(c.num_qubits, gates, tuple(pi[old[q]] for q in range(c.num_qubits)))


def pass_virtual_swap(c: Circuit, counter, layout: SegmentLayout | None = None, *,
                      virtual_swap=True, guard=True):
    """Returns (optimized circuit, permutation, report).

    With `guard`, the relayout is kept only if it strictly lowers the modeled
    cross-block pair count of the run; otherwise the circuit is unchanged.
    """
    n = c.num_qubits
    if counter.num_qubits != n:
        raise DimensionMismatch(f"profile has {counter.num_qubits} rows, circuit has {n} qubits")
    if layout is None:
        layout = SegmentLayout.default(n)
    layout.check(n)
    target = target_positions(qubit_scores(counter), control_counts(c), layout)
    inv = [0] * n
    for q, p in enumerate(layout.perm):
        inv[p] = q
    pi = tuple(inv[target[q]] for q in range(n))
    before = modeled_stats(c, layout, virtual_swap).cross_block_pairs
    identity = tuple(range(n))
    if pi == identity:
        return c, c.permutation, _report(c, c, before, before, identity)
    opt = apply_relabel(c, pi)
    after = modeled_stats(opt, layout, virtual_swap).cross_block_pairs
    if guard and after >= before:
        return c, c.permutation, _report(c, c, before, before, identity, rejected=True)
    return opt, opt.perm, _report(c, opt, before, after, pi)


def _report(c, opt, before, after, pi, rejected=False):
    return PassReport("swap", len(c.gates), len(opt.gates), {
        "swaps_inserted": len(opt.gates) - len(c.gates),
        "modeled_cross_before": before,
        "modeled_cross_after": after,
        "relayout_rejected": int(rejected),
        "relayout": ",".join(str(p) for p in pi),
    })
