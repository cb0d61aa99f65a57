"""
Counter- and context-based gate profiles and their text formats.

Counter file: line i is qubit i, NUM_KINDS space-separated counts in GateKind
order. The reader pads short lines with zeros.

Context file: ``# start <ns>`` then one record per line:

    0 <target> <kind> <ts>            single-qubit gate
    1 <control> <target> <kind> <ts>  two-qubit gate (three-qubit: first control)
    3 <q1> <q2> <ts>                  SWAP
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, FormatError, NonMonotonicTimestamps
from .ir import NUM_KINDS, Gate, GateKind

META_SINGLE = 0
META_TWO = 1
META_SWAP = 3
_META_FIELDS = {META_SINGLE: 4, META_TWO: 5, META_SWAP: 4}


def attribution_row(g: Gate) -> int:
    """Counter row of a gate: its target (last operand), or q1 for SWAP."""
    if g.kind is GateKind.SWAP:
        return g.qubits[0]
    return g.qubits[-1]


@dataclass
class CounterProfile:
    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 2 or self.counts.shape[1] != NUM_KINDS:
            raise DimensionMismatch(
                f"counter matrix must be n x {NUM_KINDS}, got {self.counts.shape}")
        if (self.counts < 0).any():
            raise FormatError("counts must be non-negative")

    @classmethod
    def zeros(cls, n: int) -> "CounterProfile":
        return cls(np.zeros((n, NUM_KINDS), dtype=np.int64))

    @property
    def num_qubits(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def kind_total(self, *kinds) -> int:
        return int(sum(self.counts[:, int(k)].sum() for k in kinds))

    def record(self, g: Gate):
        self.counts[attribution_row(g), int(g.kind)] += 1

    def __eq__(self, other):
        if not isinstance(other, CounterProfile):
            return NotImplemented
        return self.counts.shape == other.counts.shape and bool((self.counts == other.counts).all())


@dataclass(frozen=True)
class ContextRecord:
    meta: int
    operands: tuple[int, ...]
    gate_type: int | None
    timestamp_ns: int

    def fields(self):
        out = [self.meta, *self.operands]
        if self.meta != META_SWAP:
            out.append(self.gate_type)
        out.append(self.timestamp_ns)
        return out

    @property
    def target(self) -> int:
        return self.operands[-1] if self.meta != META_SWAP else self.operands[0]

    @property
    def control(self) -> int | None:
        if self.meta == META_TWO:
            return self.operands[0]
        if self.meta == META_SWAP:
            return self.operands[1]
        return None

    @property
    def label(self) -> str:
        if self.meta == META_SWAP:
            return "SWAP"
        try:
            return GateKind(self.gate_type).name
        except ValueError:
            return str(self.gate_type)


def context_record(g: Gate, timestamp_ns: int) -> ContextRecord:
    if g.kind is GateKind.SWAP:
        return ContextRecord(META_SWAP, g.qubits, None, timestamp_ns)
    if g.kind.arity == 1:
        return ContextRecord(META_SINGLE, g.qubits, int(g.kind), timestamp_ns)
    return ContextRecord(META_TWO, (g.qubits[0], g.qubits[-1]), int(g.kind), timestamp_ns)


@dataclass
class ContextProfile:
    start_ns: int = 0
    records: list[ContextRecord] = field(default_factory=list)


class CounterProfiler:
    """Simulator hook filling a CounterProfile."""

    def __init__(self):
        self.profile = None

    def begin(self, num_qubits, start_ns):
        self.profile = CounterProfile.zeros(num_qubits)

    def record_gate(self, g, timestamp_ns=None):
        self.profile.counts[attribution_row(g), g.kind] += 1


class ContextProfiler:
    """Simulator hook filling a ContextProfile."""

    def __init__(self):
        self.profile = None

    def begin(self, num_qubits, start_ns):
        self.profile = ContextProfile(start_ns, [])

    def record_gate(self, g, timestamp_ns):
        self.profile.records.append(context_record(g, timestamp_ns))


def record_gate(profile, g: Gate, timestamp_ns: int = 0):
    """Fold one gate into a CounterProfile or ContextProfile in place."""
    if isinstance(profile, CounterProfile):
        profile.record(g)
    elif isinstance(profile, ContextProfile):
        profile.records.append(context_record(g, timestamp_ns))
    else:
        raise TypeError(f"not a profile: {type(profile).__name__}")
    return profile


def profile_circuit(c, timestamps=None):
    """Both profiles of a circuit without simulating it (barriers skipped)."""
    counter = CounterProfile.zeros(c.num_qubits)
    context = ContextProfile(0, [])
    gates = [g for g in c.gates if g.kind is not GateKind.BARRIER]
    for i, g in enumerate(gates):
        counter.record(g)
        context.records.append(context_record(g, i if timestamps is None else timestamps[i]))
    return counter, context


# -- text formats -------------------------------------------------------------

def format_counter_profile(p: CounterProfile) -> str:
    return "".join(" ".join(str(int(v)) for v in row) + "\n" for row in p.counts)


def write_counter_profile(p: CounterProfile, sink):
    _write(sink, format_counter_profile(p))


def parse_counter_profile(text: str) -> CounterProfile:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = line.split()
        if len(tokens) > NUM_KINDS:
            raise FormatError(f"line {lineno}: {len(tokens)} columns, at most {NUM_KINDS}")
        try:
            vals = [int(t) for t in tokens]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer count") from None
        if any(v < 0 for v in vals):
            raise FormatError(f"line {lineno}: negative count")
        rows.append(vals + [0] * (NUM_KINDS - len(vals)))
    counts = np.array(rows, dtype=np.int64).reshape(len(rows), NUM_KINDS)
    return CounterProfile(counts)


def read_counter_profile(source) -> CounterProfile:
    return parse_counter_profile(_read(source))


def format_context_profile(p: ContextProfile) -> str:
    lines = [f"# start {p.start_ns}"]
    lines.extend(" ".join(str(v) for v in r.fields()) for r in p.records)
    return "\n".join(lines) + "\n"


def write_context_profile(p: ContextProfile, sink):
    _write(sink, format_context_profile(p))


def parse_context_profile(text: str) -> ContextProfile:
    start = None
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "start" and start is None and not records:
                try:
                    start = int(parts[1])
                except ValueError:
                    raise FormatError(f"line {lineno}: bad start timestamp") from None
                continue
            raise FormatError(f"line {lineno}: unexpected header {line!r}")
        try:
            vals = [int(t) for t in line.split()]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer field") from None
        meta = vals[0]
        if meta not in _META_FIELDS:
            raise FormatError(f"line {lineno}: undefined meta value {meta}")
        if len(vals) != _META_FIELDS[meta]:
            raise FormatError(
                f"line {lineno}: meta {meta} needs {_META_FIELDS[meta]} fields, got {len(vals)}")
        if meta == META_SWAP:
            records.append(ContextRecord(meta, (vals[1], vals[2]), None, vals[3]))
        elif meta == META_TWO:
            records.append(ContextRecord(meta, (vals[1], vals[2]), vals[3], vals[4]))
        else:
            records.append(ContextRecord(meta, (vals[1],), vals[2], vals[3]))
    if start is None:
        raise FormatError("missing '# start <ns>' header")
    return ContextProfile(start, records)


def read_context_profile(source) -> ContextProfile:
    return parse_context_profile(_read(source))


def gate_durations(p: ContextProfile) -> list[tuple[int, int]]:
    """Elapsed time of each record; gates run serially, so deltas are kernel times."""
    out = []
    prev = p.start_ns
    for i, r in enumerate(p.records):
        if r.timestamp_ns < prev:
            raise NonMonotonicTimestamps(
                f"record {i} at {r.timestamp_ns} ns precedes {prev} ns")
        out.append((i, r.timestamp_ns - prev))
        prev = r.timestamp_ns
    return out


def _write(sink, text):
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _read(source):
    if hasattr(source, "read"):
        return source.read()
    with open(source, encoding="utf-8") as fh:
        return fh.read()
