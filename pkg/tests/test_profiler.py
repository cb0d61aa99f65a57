import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qops.bench import qft
from qops.errors import DimensionMismatch, FormatError, NonMonotonicTimestamps
from qops.ir import NUM_KINDS, Circuit, Gate, GateKind
from qops.profiler import (ContextProfile, ContextProfiler, ContextRecord, CounterProfile,
                           CounterProfiler, context_record, format_context_profile,
                           format_counter_profile, gate_durations, parse_context_profile,
                           parse_counter_profile, profile_circuit, read_context_profile,
                           read_counter_profile, record_gate, write_context_profile,
                           write_counter_profile)
from qops.sim import SegmentLayout, run_circuit


def test_h_record():
    p = CounterProfile.zeros(4)
    record_gate(p, Gate(GateKind.H, (3,)))
    assert p.counts[3, 0] == 1 and p.total == 1
    assert " ".join(map(str, context_record(Gate(GateKind.H, (3,)), 77).fields())) == "0 3 0 77"


def test_cphase_record():
    g = Gate(GateKind.CPHASE, (2, 3), (0.5,))
    p = CounterProfile.zeros(4)
    record_gate(p, g)
    assert p.counts[3, 11] == 1
    assert context_record(g, 5).fields() == [1, 2, 3, 11, 5]


def test_swap_record():
    g = Gate(GateKind.SWAP, (1, 4))
    assert context_record(g, 9).fields() == [3, 1, 4, 9]
    p = CounterProfile.zeros(5)
    record_gate(p, g)
    assert p.counts[1, GateKind.SWAP] == 1


def test_three_qubit_records():
    g = Gate(GateKind.CCX, (0, 1, 2))
    assert context_record(g, 1).fields() == [1, 0, 2, int(GateKind.CCX), 1]
    p = CounterProfile.zeros(3)
    record_gate(p, g)
    assert p.counts[2, GateKind.CCX] == 1


def test_counter_text_format():
    p = CounterProfile.zeros(1)
    record_gate(p, Gate(GateKind.H, (0,)))
    text = format_counter_profile(p)
    assert text == "1" + " 0" * (NUM_KINDS - 1) + "\n"
    assert parse_counter_profile("1 0 0\n") == p


def test_counter_reader_errors():
    with pytest.raises(FormatError):
        parse_counter_profile("1 x\n")
    with pytest.raises(FormatError):
        parse_counter_profile(" ".join(["0"] * (NUM_KINDS + 1)) + "\n")
    with pytest.raises(FormatError):
        parse_counter_profile("-1\n")
    with pytest.raises(DimensionMismatch):
        CounterProfile(np.zeros((2, 5), dtype=int))


def test_qft_prefix_lines():
    p = ContextProfile(100, [context_record(Gate(GateKind.H, (3,)), 110),
                             context_record(Gate(GateKind.CPHASE, (2, 3), (1.0,)), 130)])
    assert format_context_profile(p).splitlines() == ["# start 100", "0 3 0 110", "1 2 3 11 130"]


def test_empty_context_profile():
    assert format_context_profile(ContextProfile(5)) == "# start 5\n"
    assert parse_context_profile("# start 5\n") == ContextProfile(5, [])


@pytest.mark.parametrize("text", [
    "# start 0\n2 0 1 5 7\n",
    "# start 0\n0 1 2\n",
    "# start 0\n1 0 1 5\n",
    "# start 0\n3 0 1 2 3\n",
    "0 1 0 5\n",
    "# start x\n",
    "# start 0\n0 a 0 5\n",
])
def test_context_reader_errors(text):
    with pytest.raises(FormatError):
        parse_context_profile(text)


def test_durations():
    recs = [ContextRecord(0, (0,), 0, t) for t in (10, 15, 40)]
    assert gate_durations(ContextProfile(0, recs)) == [(0, 10), (1, 5), (2, 25)]
    assert gate_durations(ContextProfile(7, [ContextRecord(0, (0,), 0, 7)])) == [(0, 0)]
    with pytest.raises(NonMonotonicTimestamps):
        gate_durations(ContextProfile(0, [ContextRecord(0, (0,), 0, 5),
                                          ContextRecord(0, (0,), 0, 4)]))
    with pytest.raises(NonMonotonicTimestamps):
        gate_durations(ContextProfile(10, [ContextRecord(0, (0,), 0, 5)]))


def test_file_round_trip(tmp_path):
    c = qft(4)
    counter, context = profile_circuit(c)
    write_counter_profile(counter, tmp_path / "a.counter.prof")
    write_context_profile(context, tmp_path / "a.context.prof")
    assert read_counter_profile(tmp_path / "a.counter.prof") == counter
    assert read_context_profile(tmp_path / "a.context.prof") == context
    raw = (tmp_path / "a.counter.prof").read_bytes()
    assert b"\r" not in raw


def test_simulator_hooks_conserve_counts():
    c = qft(5)
    c.append(GateKind.BARRIER, (0,))
    c.measure_all()
    cp, xp = CounterProfiler(), ContextProfiler()
    run_circuit(c, SegmentLayout(2, 1, 2), profilers=[cp, xp])
    assert cp.profile.total == len(xp.profile.records) == c.gate_count()
    ts = [r.timestamp_ns for r in xp.profile.records]
    assert ts == sorted(ts) and ts[0] >= xp.profile.start_ns
    assert all(d >= 0 for _, d in gate_durations(xp.profile))
    static, _ = profile_circuit(c)
    assert static == cp.profile


def test_qft_prefix_records_from_simulator():
    c = qft(4)
    xp = ContextProfiler()
    run_circuit(c, SegmentLayout(1, 1, 2), profilers=[xp])
    lines = format_context_profile(xp.profile).splitlines()
    assert lines[1].rsplit(" ", 1)[0] == "0 3 0"
    assert lines[2].rsplit(" ", 1)[0] == "1 2 3 11"


counts = st.lists(st.lists(st.integers(0, 10**12), min_size=NUM_KINDS, max_size=NUM_KINDS),
                  min_size=0, max_size=6)


@settings(max_examples=100, deadline=None)
@given(counts)
def test_counter_round_trip_property(rows):
    p = CounterProfile(np.array(rows, dtype=np.int64).reshape(len(rows), NUM_KINDS))
    buf = io.StringIO()
    write_counter_profile(p, buf)
    buf.seek(0)
    assert read_counter_profile(buf) == p
