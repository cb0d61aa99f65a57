"""
qops command-line driver.

    qops gen qft 18 --decomposed --out qft18.qasm
    qops sim qft18.qasm --layout 7,4,7 --profile both
    qops opt qft18.qasm --out qft18.opt.qasm
    qops run circuit.qasm --layout 7,4,9
    qops verify circuit.qasm circuit.opt.qasm
    qops timeline qft18.context.prof --out qft18.svg

Exit codes: 0 ok, 1 bad input, 2 layout/capacity error, 3 I/O error,
4 verification failed.
"""
from __future__ import annotations

import argparse
import io
import os
import sys

from . import __version__
from .bench import BENCHMARKS, generate
from .errors import (CapacityExceeded, FormatError, LayoutMismatch, NonMonotonicTimestamps,
                     QopsError)
from .ir import emit_qasm, parse_qasm
from .passes import Thresholds, parse_pass_list, run_pgo
from .profiler import (ContextProfiler, CounterProfiler, read_context_profile,
                       read_counter_profile, write_context_profile, write_counter_profile)
from .sim import SegmentLayout, run_circuit
from .timeline import write_timeline
from .verify import MAX_DENSE_QUBITS, circuits_equivalent, statevector_equivalent

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_LAYOUT = 2
EXIT_IO = 3
EXIT_VERIFY = 4


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _stem(path):
    base = os.path.basename(path)
    return base[:-5] if base.endswith(".qasm") else os.path.splitext(base)[0]


def _read_text(path, what="file"):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        raise CliError(f"{what} not found: {path}") from None
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _load_circuit(path):
    return parse_qasm(_read_text(path, "circuit"))


def _layout(args, n):
    if not getattr(args, "layout", None):
        return SegmentLayout.default(n)
    lay = SegmentLayout.parse(args.layout)
    lay.check(n)
    return lay


def _thresholds(args):
    try:
        return Thresholds(args.merge_run_len, args.t_ratio, args.nonchunk_frac)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _profile_paths(args, stem):
    out = args.profile_out
    return (os.path.join(out, f"{stem}.counter.prof"),
            os.path.join(out, f"{stem}.context.prof"))


def _simulate(c, lay, args, profile_mode="off"):
    profilers = []
    counter = context = None
    if profile_mode in ("counter", "both"):
        counter = CounterProfiler()
        profilers.append(counter)
    if profile_mode in ("context", "both"):
        context = ContextProfiler()
        profilers.append(context)
    res = run_circuit(c, lay, profilers=profilers, virtual_swap=args.virtual_swap == "on",
                      spill_threshold=args.spill_blocks, workers=args.workers)
    return res, (counter.profile if counter else None), (context.profile if context else None)


def _save_profiles(args, stem, counter, context):
    cpath, xpath = _profile_paths(args, stem)
    try:
        os.makedirs(args.profile_out, exist_ok=True)
        if counter is not None:
            write_counter_profile(counter, cpath)
        if context is not None:
            write_context_profile(context, xpath)
    except OSError as exc:
        raise CliError(f"cannot write profiles to {args.profile_out}: {exc.strerror}",
                       EXIT_IO) from None
    return cpath, xpath


def _summary(prefix, c, res):
    s = res.stats
    return [f"{prefix}gates={c.gate_count()}", f"{prefix}norm={res.state.norm():.12f}",
            f"{prefix}blocks_touched={s.blocks_touched}",
            f"{prefix}cross_block_pairs={s.cross_block_pairs}",
            f"{prefix}wall_ms={res.wall_ns / 1e6:.3f}"]


def _ratio(a, b):
    if b == 0:
        return 1.0 if a == 0 else float("inf")
    return a / b


# -- subcommands --------------------------------------------------------------

def cmd_sim(args):
    c = _load_circuit(args.circuit)
    lay = _layout(args, c.num_qubits)
    res, counter, context = _simulate(c, lay, args, args.profile)
    lines = [f"layout={lay.spec()}"] + _summary("", c, res)
    if counter is not None or context is not None:
        cpath, xpath = _save_profiles(args, _stem(args.circuit), counter, context)
        if counter is not None:
            lines.append(f"counter_profile={cpath}")
        if context is not None:
            lines.append(f"context_profile={xpath}")
    if args.dump:
        try:
            res.amplitudes().astype("<c16").tofile(args.dump)
        except OSError as exc:
            raise CliError(f"cannot write {args.dump}: {exc.strerror}", EXIT_IO) from None
        lines.append(f"dump={args.dump}")
    res.state.close()
    print("\n".join(lines))
    return EXIT_OK


def _optimize(c, args, lay, counter, context):
    passes = parse_pass_list(args.passes)
    opt, decision, report = run_pgo(c, (counter, context), lay, _thresholds(args),
                                    passes=passes, virtual_swap=args.virtual_swap == "on")
    return opt, report


def _opt_out(args):
    return args.out or f"{_stem(args.circuit)}.opt.qasm"


def cmd_opt(args):
    c = _load_circuit(args.circuit)
    lay = _layout(args, c.num_qubits)
    cpath, xpath = _profile_paths(args, _stem(args.circuit))
    cpath = args.counter_prof or cpath
    if not os.path.exists(cpath):
        raise CliError(f"counter profile not found: {cpath} (run 'qops sim --profile counter')")
    counter = read_counter_profile(cpath)
    xpath = args.context_prof or xpath
    context = None
    if args.context_prof and not os.path.exists(xpath):
        raise CliError(f"context profile not found: {xpath}")
    if os.path.exists(xpath):
        context = read_context_profile(xpath)
    opt, report = _optimize(c, args, lay, counter, context)
    out = _opt_out(args)
    _write_text(out, emit_qasm(opt, always_perm=True))
    sys.stdout.write(report.to_text())
    print(f"out={out}")
    return EXIT_OK


def cmd_run(args):
    c = _load_circuit(args.circuit)
    lay = _layout(args, c.num_qubits)
    stem = _stem(args.circuit)
    res0, counter, context = _simulate(c, lay, args, "both")
    res0.state.close()
    _save_profiles(args, stem, counter, context)
    opt, report = _optimize(c, args, lay, counter, context)
    out = _opt_out(args)
    _write_text(out, emit_qasm(opt, always_perm=True))
    res1, _, _ = _simulate(opt, lay, args, "off")
    res1.state.close()
    sys.stdout.write(report.to_text())
    lines = [f"layout={lay.spec()}"] + _summary("original.", c, res0) + \
        _summary("optimized.", opt, res1)
    lines.append("cross_block_pairs_ratio="
                 f"{_ratio(res1.stats.cross_block_pairs, res0.stats.cross_block_pairs):.6f}")
    lines.append(f"wall_ratio={_ratio(res1.wall_ns, res0.wall_ns):.6f}")
    lines.append(f"out={out}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_verify(args):
    a = _load_circuit(args.original)
    b = _load_circuit(args.optimized)
    if a.num_qubits != b.num_qubits:
        print(f"equivalent=false\nreason=qubit counts differ ({a.num_qubits} vs {b.num_qubits})")
        return EXIT_VERIFY
    if a.num_qubits <= MAX_DENSE_QUBITS:
        method = "dense"
        ok, resid = circuits_equivalent(a, b, tol=args.tol, seed=args.seed,
                                        return_residual=True)
    else:
        method = "statevector"
        ok, resid = statevector_equivalent(a, b, tol=args.tol, seed=args.seed,
                                           workers=args.workers, return_residual=True)
    print(f"method={method}\nresidual={resid:.3e}\nequivalent={'true' if ok else 'false'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_timeline(args):
    prof = read_context_profile(io.StringIO(_read_text(args.profile, "context profile")))
    out = args.out or os.path.splitext(args.profile)[0] + ".svg"
    try:
        write_timeline(prof, out, args.qubits)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc.strerror}", EXIT_IO) from None
    print(f"records={len(prof.records)}\nout={out}")
    return EXIT_OK


def cmd_gen(args):
    kw = {}
    if args.decomposed:
        if args.name != "qft":
            raise CliError("--decomposed only applies to qft")
        kw["decomposed"] = True
    if args.steps is not None:
        if args.name != "ising":
            raise CliError("--steps only applies to ising")
        kw["steps"] = args.steps
    c = generate(args.name, args.n, **kw)
    text = emit_qasm(c)
    if args.out:
        _write_text(args.out, text)
        print(f"gates={c.gate_count()}\nout={args.out}")
    else:
        sys.stdout.write(text)
        print(f"// gates={c.gate_count()}", file=sys.stderr)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

def _add_sim_flags(p):
    p.add_argument("--layout", metavar="F,M,C", help="file,middle,chunk bit counts")
    p.add_argument("--workers", type=int, default=1, metavar="N")
    p.add_argument("--spill-blocks", type=int, default=None, metavar="B",
                   help="keep only the first B blocks in memory; the rest are file-backed")
    p.add_argument("--virtual-swap", choices=("on", "off"), default="on")
    p.add_argument("--profile-out", default=".", metavar="DIR")


def _add_opt_flags(p):
    p.add_argument("--passes", default="auto",
                   help="auto, none, or a comma list of swap,rotfold,merge")
    p.add_argument("--merge-run-len", type=int, default=5, metavar="K")
    p.add_argument("--t-ratio", default="0.10", metavar="R")
    p.add_argument("--nonchunk-frac", default="0.25", metavar="R")
    p.add_argument("--out", metavar="PATH")


def build_parser():
    ap = argparse.ArgumentParser(prog="qops", description="Profile-guided circuit simulation.")
    ap.add_argument("--version", action="version", version=f"qops {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sim", help="simulate a circuit, optionally writing profiles")
    p.add_argument("circuit")
    _add_sim_flags(p)
    p.add_argument("--profile", choices=("off", "counter", "context", "both"), default="off")
    p.add_argument("--dump", metavar="PATH",
                   help="write final amplitudes (logical order) as little-endian complex128")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("opt", help="optimize a circuit from its profiles")
    p.add_argument("circuit")
    _add_sim_flags(p)
    _add_opt_flags(p)
    p.add_argument("--counter-prof", metavar="PATH")
    p.add_argument("--context-prof", metavar="PATH")
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("run", help="profiling run, optimization, optimized run")
    p.add_argument("circuit")
    _add_sim_flags(p)
    _add_opt_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check two circuits for equivalence")
    p.add_argument("original")
    p.add_argument("optimized")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--workers", type=int, default=1, metavar="N")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("timeline", help="render a context profile as SVG")
    p.add_argument("profile")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--qubits", type=int, default=None, metavar="N",
                   help="number of lanes (default: highest qubit seen + 1)")
    p.set_defaults(func=cmd_timeline)

    p = sub.add_parser("gen", help="emit a benchmark circuit")
    p.add_argument("name", metavar="NAME", help=", ".join(BENCHMARKS))
    p.add_argument("n", type=int)
    p.add_argument("--decomposed", action="store_true",
                   help="qft: expand controlled phases into u1/cx and measure all")
    p.add_argument("--steps", type=int, default=None, help="ising: Trotter steps")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        code, msg = exc.code, str(exc)
    except (LayoutMismatch, CapacityExceeded) as exc:
        code, msg = EXIT_LAYOUT, str(exc)
    except (FormatError, NonMonotonicTimestamps) as exc:
        code, msg = EXIT_INPUT, str(exc)
    except QopsError as exc:
        code, msg = EXIT_INPUT, str(exc)
    except OSError as exc:
        code, msg = EXIT_IO, str(exc)
    except ValueError as exc:
        code, msg = EXIT_INPUT, str(exc)
    print(f"qops: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
