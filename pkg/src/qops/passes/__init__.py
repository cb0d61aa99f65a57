"""Profile-guided circuit passes and the activator that selects them."""
from .activator import (PASS_ORDER, ROTATION_FOLDING, SINGLE_QUBIT_MERGE, VIRTUAL_SWAP,
                        PgoDecision, Thresholds, activate)
from .fold import TrackedRotation, pass_rotation_fold
from .merge import longest_run, pass_merge_single_qubit, zy_decompose
from .pipeline import PgoReport, parse_pass_list, run_pgo
from .report import PassReport
from .vswap import pass_virtual_swap, prologue_swaps

__all__ = ["Thresholds", "PgoDecision", "activate", "PASS_ORDER", "VIRTUAL_SWAP",
           "ROTATION_FOLDING", "SINGLE_QUBIT_MERGE", "TrackedRotation", "pass_rotation_fold",
           "pass_merge_single_qubit", "zy_decompose", "longest_run", "pass_virtual_swap",
           "prologue_swaps", "run_pgo", "PgoReport", "PassReport", "parse_pass_list"]
