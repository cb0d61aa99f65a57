"""Decide which passes to switch on from profile statistics."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import DimensionMismatch
from ..ir import GateKind
from ..profiler import CounterProfile
from ..sim import SegmentLayout
from .merge import longest_run

VIRTUAL_SWAP = "VirtualSwap"
ROTATION_FOLDING = "RotationFolding"
SINGLE_QUBIT_MERGE = "SingleQubitMerge"
PASS_ORDER = (ROTATION_FOLDING, SINGLE_QUBIT_MERGE, VIRTUAL_SWAP)


def _fraction(x) -> Fraction:
    # Fraction(str) keeps 0.1 as exactly 1/10
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class Thresholds:
    merge_run_len: int = 5
    t_ratio: Fraction = Fraction(1, 10)
    nonchunk_fraction: Fraction = Fraction(1, 4)

    def __post_init__(self):
        object.__setattr__(self, "t_ratio", _fraction(self.t_ratio))
        object.__setattr__(self, "nonchunk_fraction", _fraction(self.nonchunk_fraction))
        if int(self.merge_run_len) < 2:
            raise ValueError(f"merge_run_len must be >= 2, got {self.merge_run_len}")
        for name in ("t_ratio", "nonchunk_fraction"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")


@dataclass
class PgoDecision:
    enabled: tuple[str, ...] = ()
    stats: dict = field(default_factory=dict)

    def __contains__(self, name):
        return name in self.enabled


def trigger_statistics(counter: CounterProfile, c, layout: SegmentLayout | None):
    total = counter.total
    t = counter.kind_total(GateKind.T, GateKind.TDG)
    if layout is None:
        layout = SegmentLayout.default(c.num_qubits)
    file_rows = [q for q in range(counter.num_qubits) if layout.is_file_bit(layout.perm[q])]
    nonchunk = int(counter.counts[file_rows].sum()) if file_rows else 0
    return {
        "longest_run": longest_run(c),
        "t_ratio": Fraction(t, total) if total else Fraction(0),
        "nonchunk_fraction": Fraction(nonchunk, total) if total else Fraction(0),
    }


def activate(counter: CounterProfile, context, c, layout=None, th: Thresholds | None = None):
    """Passes whose triggering statistic reaches its threshold (>=).

    `context` is accepted for interface symmetry; every current trigger is
    computed from the counter profile and the circuit.
    """
    th = th or Thresholds()
    if counter.num_qubits != c.num_qubits:
        raise DimensionMismatch(
            f"profile has {counter.num_qubits} rows, circuit has {c.num_qubits} qubits")
    if layout is not None:
        layout.check(c.num_qubits)
    stats = trigger_statistics(counter, c, layout)
    on = set()
    if stats["t_ratio"] >= th.t_ratio:
        on.add(ROTATION_FOLDING)
    if stats["longest_run"] >= th.merge_run_len:
        on.add(SINGLE_QUBIT_MERGE)
    if stats["nonchunk_fraction"] >= th.nonchunk_fraction:
        on.add(VIRTUAL_SWAP)
    return PgoDecision(tuple(p for p in PASS_ORDER if p in on), stats)
