"""End-to-end acceptance checks, one test per criterion.

Each test prints a single "[criterion N] PASS|FAIL ..." line straight to the
terminal (bypassing capture) before asserting.
"""
import math
import statistics
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from qops.bench import BENCHMARKS, generate, qft, random_circuit
from qops.cli import main
from qops.ir import Circuit, Gate, GateKind, emit_qasm, parse_qasm
from qops.passes import (ROTATION_FOLDING, SINGLE_QUBIT_MERGE, VIRTUAL_SWAP, Thresholds,
                         activate, pass_merge_single_qubit, pass_rotation_fold,
                         pass_virtual_swap)
from qops.profiler import (ContextProfile, ContextProfiler, ContextRecord, CounterProfile,
                           CounterProfiler, format_context_profile, format_counter_profile,
                           parse_context_profile, parse_counter_profile, profile_circuit)
from qops.sim import SegmentLayout, run_circuit
from qops.verify import circuits_equivalent, dense_oracle, statevector_equivalent

CLIFFORD_T = (GateKind.H, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.X,
              GateKind.Y, GateKind.Z, GateKind.CX, GateKind.CZ, GateKind.SWAP, GateKind.RZ,
              GateKind.U1, GateKind.SX, GateKind.SXDG)


@pytest.fixture
def announce(capsys):
    def _say(num, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {num}] {'PASS' if ok else 'FAIL'} {detail}")
    return _say


def random_layout(n, rng):
    f = int(rng.integers(0, n))
    c = int(rng.integers(1, n - f + 1))
    return SegmentLayout(f, n - f - c, c, tuple(int(p) for p in rng.permutation(n)))


def test_1_oracle_equivalence(announce):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(2, 11))
        c = random_circuit(n, int(rng.integers(0, 61)), rng)
        res = run_circuit(c, random_layout(n, rng))
        worst = max(worst, float(np.max(np.abs(res.amplitudes() - dense_oracle(c)))))
        res.state.close()
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and dt <= 120
    announce(1, ok, f"500 circuits, max |diff|={worst:.2e}, {dt:.1f}s")
    assert ok


def test_2_pass_soundness(announce):
    t0 = time.perf_counter()
    failures = {"rotfold": 0, "merge": 0, "swap": 0}
    for seed in range(200):
        rng = np.random.default_rng(10_000 + seed)
        n = int(rng.integers(1, 11))
        depth = int(rng.integers(0, 61))
        kinds = CLIFFORD_T if seed % 2 else None
        c = random_circuit(n, depth, rng, kinds) if kinds else random_circuit(n, depth, rng)
        out, _ = pass_rotation_fold(c)
        failures["rotfold"] += not circuits_equivalent(c, out, out.perm, 1e-9)
        out, _ = pass_merge_single_qubit(c, Thresholds(merge_run_len=int(rng.integers(2, 6))))
        failures["merge"] += not circuits_equivalent(c, out, out.perm, 1e-9)
        counter, _ = profile_circuit(c)
        out, perm, _ = pass_virtual_swap(c, counter, random_layout(n, rng))
        failures["swap"] += not circuits_equivalent(c, out, perm, 1e-9)
    dt = time.perf_counter() - t0
    ok = not any(failures.values()) and dt <= 180
    announce(2, ok, f"3 passes x 200 circuits, failures={failures}, {dt:.1f}s")
    assert ok


def test_3_rotation_folding_t_chain(announce):
    c = generate("t-chain", 20)
    out, rep = pass_rotation_fold(c)
    head = [(g.kind, g.qubits) for g in out.gates[:7]]
    want = [(GateKind.S, (9,)), (GateKind.T, (19,)), (GateKind.H, (19,)),
            (GateKind.CX, (5, 9)), (GateKind.S, (5,)), (GateKind.SDG, (9,)),
            (GateKind.CX, (5, 9))]
    equal = statevector_equivalent(c, out, out.perm, 1e-9)
    ok = head == want and len(out.gates) < len(c.gates) and equal
    announce(3, ok, f"t-chain-20 {len(c.gates)}->{len(out.gates)} gates, "
                    f"prefix {'matches' if head == want else 'differs'}, equivalent={equal}")
    assert ok


def test_4_merge_ising_and_qft(announce):
    c = generate("ising", 10)
    out, _ = pass_merge_single_qubit(c)
    frac = 1 - len(out.gates) / len(c.gates)
    merges = 0
    for n in range(2, 13):
        for k in (2, 5):
            _, rep = pass_merge_single_qubit(qft(n), Thresholds(merge_run_len=k))
            merges += rep.details["runs_merged"] + rep.details["runs_deleted"]
    ok = abs(frac - 0.40) <= 0.10 and merges == 0 and circuits_equivalent(c, out)
    announce(4, ok, f"ising-10 reduction {100 * frac:.1f}%, qft merges={merges}")
    assert ok


def _run_ratio(tmp_path, capsys, name, n, layout):
    path = tmp_path / f"{name}{n}.qasm"
    path.write_text(emit_qasm(generate(name, n)))
    code = main(["run", str(path), "--layout", layout, "--profile-out", str(tmp_path),
                 "--out", str(tmp_path / f"{name}{n}.opt.qasm")])
    out = dict(l.split("=", 1) for l in capsys.readouterr().out.splitlines() if "=" in l)
    return code, float(out["cross_block_pairs_ratio"]), float(out["wall_ratio"])


def test_5_virtual_swap_locality(announce, tmp_path, capsys):
    code_a, fig3, wall_a = _run_ratio(tmp_path, capsys, "fig3-synthetic", 20, "7,4,9")
    code_b, qft20, wall_b = _run_ratio(tmp_path, capsys, "qft", 20, "7,4,9")
    ok = code_a == code_b == 0 and fig3 <= 0.5 and qft20 <= 1.0
    announce(5, ok, f"fig3 cross ratio {fig3:.3f} (wall {wall_a:.2f}x, not gated), "
                    f"qft20 cross ratio {qft20:.3f} (wall {wall_b:.2f}x, not gated)")
    assert ok


def _counter(n, entries):
    p = CounterProfile.zeros(n)
    for (q, kind), v in entries.items():
        p.counts[q, kind] = v
    return p


def test_6_activator_thresholds(announce):
    lay = SegmentLayout(0, 0, 2)
    empty = Circuit(2)
    at = activate(_counter(2, {(0, GateKind.T): 10, (1, GateKind.H): 90}), None, empty, lay)
    below = activate(_counter(2, {(0, GateKind.T): 999, (1, GateKind.H): 9001}), None, empty,
                     lay)
    runs = {}
    for length in (5, 4):
        c = Circuit(2)
        for i in range(length):
            c.append(GateKind.H if i % 2 else GateKind.X, (1,))
        runs[length] = activate(profile_circuit(c)[0], None, c, lay)
    th = Thresholds()
    ok = (ROTATION_FOLDING in at and ROTATION_FOLDING not in below
          and SINGLE_QUBIT_MERGE in runs[5] and SINGLE_QUBIT_MERGE not in runs[4]
          and th.t_ratio == Fraction(1, 10) and th.merge_run_len == 5
          and at.stats["t_ratio"] == Fraction(1, 10))
    announce(6, ok, "t_ratio 0.10 on / 0.0999 off, run 5 on / 4 off")
    assert ok


def _random_context(rng):
    recs = []
    t = int(rng.integers(0, 10**12))
    start = t
    n = int(rng.integers(1, 30))
    for _ in range(int(rng.integers(0, 40))):
        t += int(rng.integers(0, 10**6))
        meta = int(rng.integers(0, 3 if n > 1 else 1))
        if meta == 0:
            recs.append(ContextRecord(0, (int(rng.integers(n)),), int(rng.integers(33)), t))
        else:
            a, b = (int(x) for x in rng.choice(n, 2, replace=False))
            recs.append(ContextRecord(1 if meta == 1 else 3, (a, b),
                                      int(rng.integers(33)) if meta == 1 else None, t))
    return ContextProfile(start, recs)


def test_7_profile_formats(announce):
    rng = np.random.default_rng(7)
    lossy = 0
    for _ in range(1000):
        n = int(rng.integers(1, 30))
        counts = rng.integers(0, 10**6, size=(n, 33)) * (rng.random((n, 33)) < 0.3)
        p = CounterProfile(counts.astype(np.int64))
        lossy += parse_counter_profile(format_counter_profile(p)) != p
        x = _random_context(rng)
        lossy += parse_context_profile(format_context_profile(x)) != x
    c = Circuit(4).h(3).cp(math.pi / 2, 2, 3)
    _, ctx = profile_circuit(c, timestamps=[111, 222])
    lines = format_context_profile(ctx).splitlines()[1:]
    ok = lossy == 0 and lines == ["0 3 0 111", "1 2 3 11 222"]
    announce(7, ok, f"2000 round trips, lossy={lossy}, qft prefix lines {lines}")
    assert ok


def test_8_profiling_overhead(announce):
    c = qft(18, decomposed=True)
    lay = SegmentLayout(7, 4, 7)
    run_circuit(c, lay).state.close()  # warmup
    times = {"off": [], "counter": [], "context": []}
    for _ in range(5):
        for mode in times:
            profs = {"off": [], "counter": [CounterProfiler()],
                     "context": [ContextProfiler()]}[mode]
            t0 = time.perf_counter()
            run_circuit(c, lay, profilers=profs).state.close()
            times[mode].append(time.perf_counter() - t0)
    base = statistics.median(times["off"])
    rc = statistics.median(times["counter"]) / base
    rx = statistics.median(times["context"]) / base
    ok = rc <= 1.10 and rx <= 1.15
    announce(8, ok, f"qft18 median slowdown counter {rc:.3f}x, context {rx:.3f}x")
    assert ok


def test_9_counter_conservation(announce):
    bad = []
    cases = [(name, n, {}) for name in BENCHMARKS for n in (2, 5, 9)]
    cases += [("qft", 9, {"decomposed": True})]
    for name, n, kw in cases:
        c = generate(name, n, **kw)
        barriers = [Gate(GateKind.BARRIER, (q,)) for q in range(n)]
        c = Circuit(c.num_qubits, c.gates[:1] + barriers + c.gates[1:], c.perm)
        counter, context = CounterProfiler(), ContextProfiler()
        run_circuit(c, profilers=[counter, context]).state.close()
        non_barrier = sum(g.kind is not GateKind.BARRIER for g in c.gates)
        if not counter.profile.total == len(context.profile.records) == non_barrier:
            bad.append(f"{name}-{n}")
    ok = not bad
    announce(9, ok, f"{len(cases)} benchmark runs, mismatches={bad}")
    assert ok


def test_10_end_to_end(announce, tmp_path):
    t0 = time.perf_counter()
    cli = [sys.executable, "-m", "qops.cli"]
    src = tmp_path / "t-chain-20.qasm"
    src.write_text(emit_qasm(generate("t-chain", 20)))
    opt = tmp_path / "t-chain-20.opt.qasm"
    run = subprocess.run(cli + ["run", str(src), "--profile-out", str(tmp_path),
                                "--out", str(opt)], capture_output=True, text=True)
    fewer = False
    if run.returncode == 0:
        fewer = len(parse_qasm(opt.read_text()).gates) < len(parse_qasm(src.read_text()).gates)
    ver = subprocess.run(cli + ["verify", str(src), str(opt)], capture_output=True, text=True)
    dt = time.perf_counter() - t0
    ok = run.returncode == 0 and fewer and ver.returncode == 0 and dt <= 60
    announce(10, ok, f"run exit {run.returncode}, fewer gates={fewer}, "
                     f"verify exit {ver.returncode}, {dt:.1f}s")
    assert ok
