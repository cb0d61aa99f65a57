"""Exception hierarchy shared by every qops module."""


class QopsError(Exception):
    """Base class for all qops errors."""


# circuit-ir

class QasmError(QopsError):
    """Problem with an OpenQASM source; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class QasmSyntaxError(QasmError):
    pass


class UnsupportedGate(QasmError):
    pass


class UnsupportedConstruct(QasmError):
    pass


class IndexOutOfRange(QasmError):
    pass


class ParamMismatch(QopsError, ValueError):
    pass


class InvalidCircuit(QopsError, ValueError):
    pass


# sim-core

class LayoutMismatch(QopsError, ValueError):
    pass


class CapacityExceeded(QopsError):
    pass


class QubitOutOfRange(QopsError, IndexError):
    pass


# profiler

class FormatError(QopsError, ValueError):
    pass


class NonMonotonicTimestamps(QopsError, ValueError):
    pass


# pgo-passes

class DimensionMismatch(QopsError, ValueError):
    pass


# verifier

class TooLarge(QopsError):
    pass


class LengthMismatch(QopsError, ValueError):
    pass


# cli

class UnknownBenchmark(QopsError, ValueError):
    pass
