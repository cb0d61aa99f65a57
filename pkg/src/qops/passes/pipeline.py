"""Fixed-order pass pipeline driven by the activator."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..ir import Circuit
from ..profiler import CounterProfile, profile_circuit
from .activator import (PASS_ORDER, ROTATION_FOLDING, SINGLE_QUBIT_MERGE, VIRTUAL_SWAP,
                        PgoDecision, Thresholds, activate)
from .fold import pass_rotation_fold
from .merge import pass_merge_single_qubit
from .vswap import pass_virtual_swap

PASS_ALIASES = {"swap": VIRTUAL_SWAP, "rotfold": ROTATION_FOLDING, "merge": SINGLE_QUBIT_MERGE}


@dataclass
class PgoReport:
    n_ori: int
    n_opt: int
    decision: PgoDecision
    passes: list = field(default_factory=list)
    perm: tuple = ()

    def to_text(self) -> str:
        lines = [f"n_ori={self.n_ori}", f"n_opt={self.n_opt}",
                 "passes=" + ",".join(self.decision.enabled)]
        for p in self.passes:
            lines.append(f"delta_{p.name}={p.delta}")
            lines.extend(f"{p.name}.{k}={v}" for k, v in p.details.items())
        for k, v in self.decision.stats.items():
            lines.append(f"stat.{k}={_fmt(v)}")
        lines.append("perm=" + ",".join(str(p) for p in self.perm))
        return "\n".join(lines) + "\n"


def _fmt(v):
    if hasattr(v, "denominator") and not isinstance(v, int):
        return f"{float(v):.6g}"
    return str(v)


def parse_pass_list(text: str):
    """'auto' -> None, 'none' -> (), else a comma list of swap/rotfold/merge."""
    text = text.strip()
    if text == "auto":
        return None
    if text == "none":
        return ()
    out = set()
    for name in text.split(","):
        name = name.strip()
        if name not in PASS_ALIASES:
            raise ValueError(f"unknown pass {name!r}; use auto, none, swap, rotfold or merge")
        out.add(PASS_ALIASES[name])
    return tuple(p for p in PASS_ORDER if p in out)


def run_pgo(c: Circuit, profiles=None, layout=None, th: Thresholds | None = None, *,
            passes=None, virtual_swap=True):
    """Apply the activated passes in the order fold, merge, swap.

    `profiles` is a CounterProfile, a (counter, context) pair, or None to
    profile the circuit statically. `passes` overrides the activator with an
    explicit tuple of pass names.
    """
    th = th or Thresholds()
    if profiles is None:
        counter, context = profile_circuit(c)
    elif isinstance(profiles, CounterProfile):
        counter, context = profiles, None
    else:
        counter, context = profiles
    decision = activate(counter, context, c, layout, th)
    if passes is not None:
        decision = PgoDecision(tuple(p for p in PASS_ORDER if p in passes), decision.stats)
    cur = c
    reports = []
    for name in decision.enabled:
        if name == ROTATION_FOLDING:
            cur, rep = pass_rotation_fold(cur)
        elif name == SINGLE_QUBIT_MERGE:
            cur, rep = pass_merge_single_qubit(cur, th)
        else:
            # earlier passes change the gate mix, so the swap pass sees a fresh profile
            fresh = counter if cur is c else profile_circuit(cur)[0]
            cur, _, rep = pass_virtual_swap(cur, fresh, layout, virtual_swap=virtual_swap)
        reports.append(rep)
    return cur, decision, PgoReport(len(c.gates), len(cur.gates), decision, reports,
                                    cur.permutation)
