"""
OpenQASM 2.0 subset reader and writer.

Supported: the OPENQASM 2.0 header, `include`, exactly one `qreg`, optional
`creg`s, calls of the built-in gate set (any case), `barrier`, and a trailing
`measure`/`reset` suffix. Gate definitions, `opaque` and `if` are rejected.
A `// perm=a,b,...` comment restores Circuit.perm.
"""
from __future__ import annotations

import ast
import math
import operator
import re

from ..errors import (IndexOutOfRange, InvalidCircuit, ParamMismatch, QasmSyntaxError,
                      UnsupportedConstruct, UnsupportedGate)
from .circuit import Circuit, Gate
from .gates import NAME_TO_KIND, GateKind

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_REG_DECL = re.compile(rf"^(qreg|creg)\s+({_IDENT})\s*\[\s*(\d+)\s*\]$")
_ARG = re.compile(rf"^({_IDENT})\s*(?:\[\s*(\d+)\s*\])?$")
_PERM_COMMENT = re.compile(r"^\s*//\s*perm\s*=\s*([0-9,\s]*)$")

_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.Pow: operator.pow,
}
_FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
          "ln": math.log, "sqrt": math.sqrt}


def eval_angle(text: str, line=None) -> float:
    """Evaluate an OpenQASM parameter expression such as ``-3*pi/4``."""
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError:
        raise QasmSyntaxError(f"bad parameter expression {text!r}", line) from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise QasmSyntaxError(f"bad parameter expression {text!r}", line)

    try:
        value = ev(tree)
    except (ArithmeticError, ValueError):
        raise QasmSyntaxError(f"cannot evaluate {text!r}", line) from None
    if not math.isfinite(value):
        raise QasmSyntaxError(f"non-finite parameter {text!r}", line)
    return value


def _statements(text):
    """Yield (line, statement) pairs with comments removed."""
    buf = []
    start = None
    lineno = 1
    i = 0
    in_string = False
    while i < len(text):
        ch = text[i]
        if not in_string and text.startswith("//", i):
            j = text.find("\n", i)
            i = len(text) if j < 0 else j
            continue
        if ch == '"':
            in_string = not in_string
        if ch == "\n":
            lineno += 1
        if ch == ";" and not in_string:
            stmt = "".join(buf).strip()
            if not stmt:
                raise QasmSyntaxError("empty statement", lineno)
            yield start, stmt
            buf, start = [], None
        else:
            if start is None and not ch.isspace():
                start = lineno
            buf.append(ch)
        i += 1
    rest = "".join(buf).strip()
    if rest:
        if rest.split()[0] in ("gate", "opaque"):
            raise UnsupportedConstruct(f"'{rest.split()[0]}' definitions are not supported", start)
        raise QasmSyntaxError(f"missing ';' after {rest[:40]!r}", start)


def _split_top_level(s, sep=","):
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


class _Parser:
    def __init__(self):
        self.qreg = None
        self.size = 0
        self.cregs = {}
        self.gates = []
        self.seen_header = False
        self.in_suffix = False

    def operands(self, argtext, line, allow_broadcast):
        if not argtext.strip():
            raise QasmSyntaxError("missing operands", line)
        groups = []
        for arg in _split_top_level(argtext):
            m = _ARG.match(arg)
            if not m:
                raise QasmSyntaxError(f"bad operand {arg!r}", line)
            name, idx = m.group(1), m.group(2)
            if self.qreg is None or name != self.qreg:
                raise QasmSyntaxError(f"undeclared quantum register {name!r}", line)
            if idx is None:
                if not allow_broadcast:
                    raise UnsupportedConstruct(
                        f"register broadcast of multi-qubit gates ({arg!r})", line)
                groups.append(list(range(self.size)))
                continue
            i = int(idx)
            if i >= self.size:
                raise IndexOutOfRange(f"{name}[{i}] out of range for {name}[{self.size}]", line)
            groups.append([i])
        return groups

    def bit(self, argtext, line):
        m = _ARG.match(argtext.strip())
        if not m or m.group(1) not in self.cregs:
            raise QasmSyntaxError(f"bad classical operand {argtext.strip()!r}", line)
        if m.group(2) is not None and int(m.group(2)) >= self.cregs[m.group(1)]:
            raise IndexOutOfRange(f"classical bit {argtext.strip()} out of range", line)

    def add(self, kind, qubits, params, line):
        if kind in (GateKind.MEASURE, GateKind.RESET):
            self.in_suffix = True
        elif self.in_suffix and kind is not GateKind.BARRIER:
            raise UnsupportedConstruct("gate after measurement (mid-circuit measurement)", line)
        try:
            self.gates.append(Gate(kind, tuple(qubits), tuple(params)))
        except (InvalidCircuit, ParamMismatch) as exc:
            raise QasmSyntaxError(str(exc), line) from None

    def statement(self, line, stmt):
        head = stmt.split(None, 1)[0] if stmt.split() else ""
        word = re.match(_IDENT, stmt)
        word = word.group(0) if word else head
        if not self.seen_header:
            m = re.match(r"^OPENQASM\s+(\S+)$", stmt)
            if not m:
                raise QasmSyntaxError("expected 'OPENQASM 2.0;' header", line)
            if m.group(1) not in ("2.0", "2"):
                raise UnsupportedConstruct(f"OpenQASM version {m.group(1)}", line)
            self.seen_header = True
            return
        if word == "OPENQASM":
            raise QasmSyntaxError("duplicate header", line)
        if word == "include":
            if not re.match(r'^include\s+"[^"]+"$', stmt):
                raise QasmSyntaxError("malformed include", line)
            return
        if word in ("gate", "opaque"):
            raise UnsupportedConstruct(f"'{word}' definitions are not supported", line)
        if word == "if":
            raise UnsupportedConstruct("classical control ('if') is not supported", line)
        if word in ("qreg", "creg"):
            m = _REG_DECL.match(stmt)
            if not m:
                raise QasmSyntaxError(f"malformed {word} declaration", line)
            name, size = m.group(2), int(m.group(3))
            if word == "qreg":
                if self.qreg is not None:
                    raise UnsupportedConstruct("more than one qreg", line)
                if size < 1:
                    raise QasmSyntaxError("qreg size must be positive", line)
                self.qreg, self.size = name, size
            else:
                self.cregs[name] = size
            return
        if word == "measure":
            parts = stmt[len("measure"):].split("->")
            if len(parts) != 2:
                raise QasmSyntaxError("measure needs 'q -> c'", line)
            self.bit(parts[1], line)
            for q in self.operands(parts[0], line, allow_broadcast=True)[0]:
                self.add(GateKind.MEASURE, (q,), (), line)
            return
        if word in ("barrier", "reset"):
            kind = GateKind.BARRIER if word == "barrier" else GateKind.RESET
            for group in self.operands(stmt[len(word):], line, allow_broadcast=True):
                for q in group:
                    self.add(kind, (q,), (), line)
            return
        self.gate_call(line, stmt)

    def gate_call(self, line, stmt):
        m = re.match(_IDENT, stmt)
        if not m:
            raise QasmSyntaxError(f"cannot parse statement {stmt[:40]!r}", line)
        name = m.group(0)
        rest = stmt[m.end():].lstrip()
        params = []
        if rest.startswith("("):
            depth = 0
            for j, ch in enumerate(rest):
                depth += ch == "("
                depth -= ch == ")"
                if depth == 0:
                    break
            else:
                raise QasmSyntaxError("unbalanced parentheses", line)
            inner, rest = rest[1:j], rest[j + 1:]
            if inner.strip():
                params = [eval_angle(p, line) for p in _split_top_level(inner)]
        kind = NAME_TO_KIND.get(name.lower())
        if kind is None or kind in (GateKind.MEASURE, GateKind.RESET, GateKind.BARRIER):
            raise UnsupportedGate(f"unsupported gate {name!r}", line)
        if self.qreg is None:
            raise QasmSyntaxError("gate before qreg declaration", line)
        if len(params) != kind.num_params:
            raise QasmSyntaxError(
                f"{name} takes {kind.num_params} parameter(s), got {len(params)}", line)
        groups = self.operands(rest, line, allow_broadcast=kind.arity == 1)
        if len(groups) != kind.arity:
            raise QasmSyntaxError(f"{name} takes {kind.arity} operand(s), got {len(groups)}", line)
        if kind.arity == 1:
            for q in groups[0]:
                self.add(kind, (q,), params, line)
        else:
            qubits = [g[0] for g in groups]
            if len(set(qubits)) != len(qubits):
                raise QasmSyntaxError(f"repeated operand in {name}", line)
            self.add(kind, qubits, params, line)


def parse_qasm(text: str) -> Circuit:
    p = _Parser()
    for line, stmt in _statements(text):
        p.statement(line, stmt)
    if not p.seen_header:
        raise QasmSyntaxError("expected 'OPENQASM 2.0;' header", 1)
    if p.qreg is None:
        raise QasmSyntaxError("no qreg declared", None)
    perm = None
    for raw in text.splitlines():
        m = _PERM_COMMENT.match(raw)
        if m:
            perm = tuple(int(v) for v in m.group(1).replace(" ", "").split(",") if v)
    try:
        return Circuit(p.size, p.gates, perm)
    except InvalidCircuit as exc:
        raise QasmSyntaxError(str(exc), None) from None


def format_angle(value: float) -> str:
    return f"{value:.16g}"


def emit_qasm(c: Circuit, always_perm=False) -> str:
    """OpenQASM 2.0 text; a trailing ``// perm=`` line records c.perm when it
    is not the identity (or always, with `always_perm`)."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    if any(g.kind is GateKind.MEASURE for g in c.gates):
        lines.append(f"creg c[{c.num_qubits}];")
    for g in c.gates:
        if g.kind is GateKind.MEASURE:
            lines.append(f"measure q[{g.qubits[0]}] -> c[{g.qubits[0]}];")
            continue
        head = g.kind.qasm_name
        if g.params:
            head += "(" + ",".join(format_angle(p) for p in g.params) + ")"
        lines.append(f"{head} " + ",".join(f"q[{q}]" for q in g.qubits) + ";")
    if always_perm or c.permutation != tuple(range(c.num_qubits)):
        lines.append("// perm=" + ",".join(str(v) for v in c.permutation))
    return "\n".join(lines) + "\n"
