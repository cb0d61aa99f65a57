"""File/middle/chunk partition of the amplitude index bits."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import LayoutMismatch


@dataclass(frozen=True)
class SegmentLayout:
    """Physical bit p is chunk if p < c, middle if c <= p < c+m, file otherwise.

    `perm[q]` is the physical bit holding logical qubit q.
    """

    file_bits: int
    middle_bits: int
    chunk_bits: int
    perm: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.file_bits < 0 or self.middle_bits < 0 or self.chunk_bits < 1:
            raise LayoutMismatch(
                f"need f >= 0, m >= 0, c >= 1; got {self.file_bits},{self.middle_bits},"
                f"{self.chunk_bits}")
        n = self.num_qubits
        perm = tuple(range(n)) if self.perm is None else tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(n)):
            raise LayoutMismatch(f"perm {perm} is not a bijection on {n} qubits")
        object.__setattr__(self, "perm", perm)

    @property
    def num_qubits(self) -> int:
        return self.file_bits + self.middle_bits + self.chunk_bits

    @property
    def block_bits(self) -> int:
        """Bits addressing an amplitude inside one block (middle + chunk)."""
        return self.middle_bits + self.chunk_bits

    @property
    def num_blocks(self) -> int:
        return 1 << self.file_bits

    @property
    def block_size(self) -> int:
        return 1 << self.block_bits

    def segment(self, physical_bit: int) -> str:
        if physical_bit < self.chunk_bits:
            return "chunk"
        if physical_bit < self.block_bits:
            return "middle"
        return "file"

    def is_file_bit(self, physical_bit: int) -> bool:
        return physical_bit >= self.block_bits

    def with_perm(self, perm) -> "SegmentLayout":
        return SegmentLayout(self.file_bits, self.middle_bits, self.chunk_bits, tuple(perm))

    def spec(self) -> str:
        return f"{self.file_bits},{self.middle_bits},{self.chunk_bits}"

    @classmethod
    def parse(cls, text: str) -> "SegmentLayout":
        try:
            f, m, c = (int(v) for v in text.split(","))
        except ValueError:
            raise LayoutMismatch(f"layout must be 'f,m,c', got {text!r}") from None
        return cls(f, m, c)

    @classmethod
    def default(cls, n: int) -> "SegmentLayout":
        c = min(n, 11)
        m = min(n - c, 10)
        return cls(n - c - m, m, c)

    def check(self, n: int):
        if self.num_qubits != n:
            raise LayoutMismatch(
                f"layout {self.spec()} covers {self.num_qubits} qubits, circuit has {n}")
