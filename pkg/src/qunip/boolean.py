"""Boolean functions over {0,1}^d: dense truth tables and sparse pattern sets.

The two views make the exact-vs-restricted contrast explicit: a TruthTable
enumerates all 2^d values, a PatternSet holds only the (argument, value)
pairs available for training or database loading.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .statevec import check_capacity


class Classification(enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"
    NEITHER = "neither"


@dataclass(frozen=True)
class TruthTable:
    """values[x] = B(x) for every basis label x in [0, 2^d)."""

    d: int
    values: np.ndarray

    def __post_init__(self):
        check_capacity(self.d)
        vals = np.asarray(self.values, dtype=np.uint8)
        if vals.shape != (1 << self.d,):
            raise DomainError(f"truth table for d={self.d} needs {1 << self.d} values, got {vals.shape}")
        if np.any(vals > 1):
            raise DomainError("truth table values must be bits")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, x: int) -> int:
        return int(self.values[x])


@dataclass(frozen=True)
class PatternSet:
    """Distinct (argument label, bit) pairs; the restricted view of a function."""

    d: int
    pairs: tuple

    def __post_init__(self):
        check_capacity(self.d)
        pairs = tuple((int(x), int(b)) for x, b in self.pairs)
        if not 1 <= len(pairs) <= 1 << self.d:
            raise DomainError(f"pattern count {len(pairs)} outside [1, 2^{self.d}]")
        seen = set()
        for x, b in pairs:
            if not 0 <= x < 1 << self.d:
                raise DomainError(f"pattern argument {x} outside [0, 2^{self.d})")
            if b not in (0, 1):
                raise DomainError(f"pattern value {b} is not a bit")
            if x in seen:
                raise DomainError(f"duplicate pattern argument {x}")
            seen.add(x)
        object.__setattr__(self, "pairs", pairs)


def classify(t: TruthTable) -> Classification:
    """Constant, balanced (exactly half ones), or neither."""
    ones = int(t.values.sum())
    if ones == 0 or ones == t.values.size:
        return Classification.CONSTANT
    if 2 * ones == t.values.size:
        return Classification.BALANCED
    return Classification.NEITHER


def dot_parity(x: int, a: int, d: int) -> int:
    """(sum_i x_i a_i) mod 2."""
    if not 0 <= x < 1 << d:
        raise DomainError(f"label {x} outside [0, 2^{d})")
    if not 0 <= a < 1 << d:
        raise DomainError(f"label {a} outside [0, 2^{d})")
    return (x & a).bit_count() & 1


def linear_table(s: int, d: int) -> TruthTable:
    """Truth table of x -> x.s mod 2."""
    if not 0 <= s < 1 << d:
        raise DomainError(f"label {s} outside [0, 2^{d})")
    vals = np.zeros(1, dtype=np.uint8)
    for q in range(1, d + 1):
        contrib = np.array([0, 1] if (s >> (d - q)) & 1 else [0, 0], dtype=np.uint8)
        vals = (vals[:, None] ^ contrib[None, :]).ravel()
    return TruthTable(d, vals)


def full_pattern_set(t: TruthTable) -> PatternSet:
    """All 2^d pairs of a table; the exponential-cost database load."""
    return PatternSet(t.d, tuple((x, int(t.values[x])) for x in range(t.values.size)))


# -- file formats -------------------------------------------------------------
# truth table file: a single line of 2^d bits in basis order
# pattern file: one "bitstring<space>bit" line per pair


def save_truth_table(t: TruthTable, path) -> None:
    with open(path, "w") as fh:
        fh.write("".join(str(v) for v in t.values) + "\n")


def load_truth_table(path) -> TruthTable:
    with open(path) as fh:
        line = fh.read().strip()
    if not line or any(ch not in "01" for ch in line):
        raise DomainError(f"truth table file {path} must hold a single line of bits")
    n = len(line)
    if n & (n - 1) or n < 2:
        raise DomainError(f"truth table length {n} is not a power of two >= 2")
    d = n.bit_length() - 1
    return TruthTable(d, np.frombuffer(line.encode(), dtype=np.uint8) - ord("0"))


def save_patterns(p: PatternSet, path) -> None:
    with open(path, "w") as fh:
        for x, b in p.pairs:
            fh.write(f"{format(x, f'0{p.d}b')} {b}\n")


def load_patterns(path) -> PatternSet:
    pairs = []
    d = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2 or any(ch not in "01" for ch in parts[0]) or parts[1] not in "01":
                raise DomainError(f"{path}:{lineno}: expected 'bitstring bit', got {line!r}")
            if d is None:
                d = len(parts[0])
            elif len(parts[0]) != d:
                raise DomainError(f"{path}:{lineno}: bitstring width changed from {d}")
            pairs.append((int(parts[0], 2), int(parts[1])))
    if d is None:
        raise DomainError(f"pattern file {path} is empty")
    return PatternSet(d, tuple(pairs))
