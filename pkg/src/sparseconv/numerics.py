"""Core vector plumbing: validated dense vectors, the index-weighted
derivative, the brute-force convolution oracle, generalized norms and
support, and half-away-from-zero rounding.

Everything here is a pure function on immutable inputs; nothing mutates
its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DenseVector",
    "SparseResult",
    "dense_vector",
    "derivative",
    "naive_convolve",
    "norm_ge",
    "norm_le",
    "support_ge",
    "round_to_int",
    "lower_median",
]

# Dense vectors are plain float64 numpy arrays; dense_vector() is the
# validating constructor used at public entry points.
DenseVector = np.ndarray


def dense_vector(values) -> np.ndarray:
    """Validate and normalize a non-negative 1-D vector to float64.

    Raises ValueError on empty input, non-finite entries, or any
    negative entry.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError("vector must have length >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    if np.any(arr < 0):
        raise ValueError("vector entries must be non-negative")
    return arr.copy()


@dataclass
class SparseResult:
    """Sparse index -> value map produced by the recovery engines.

    Indices are 0-based positions in the length 2n-1 convolution output.
    Equality is plain dict equality, so two runs with the same seed can
    be compared bit for bit.
    """

    entries: dict[int, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, index: int) -> bool:
        return index in self.entries

    def __getitem__(self, index: int) -> float:
        return self.entries[index]

    def get(self, index: int, default: float = 0.0) -> float:
        return self.entries.get(index, default)

    def support(self) -> set[int]:
        return set(self.entries)

    def sorted_items(self) -> list[tuple[int, float]]:
        return sorted(self.entries.items())

    def to_dense(self, length: int) -> np.ndarray:
        out = np.zeros(length)
        for i, v in self.entries.items():
            if not 0 <= i < length:
                raise ValueError(f"index {i} out of range for length {length}")
            out[i] = v
        return out


def derivative(a: np.ndarray, index_base: int = 0) -> np.ndarray:
    """Index-weighted vector: entry i becomes (i + index_base) * a_i.

    Base 0 is the convention used by the recovery algorithms (the bucket
    ratio then returns the true array index directly); base 1 exists only
    to match the classic presentation of the operator.
    """
    if index_base not in (0, 1):
        raise ValueError("index_base must be 0 or 1")
    a = np.asarray(a, dtype=np.float64)
    return (np.arange(len(a), dtype=np.float64) + index_base) * a


def naive_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Direct-summation convolution, C_k = sum_i A_i * B_{k-i}.

    Quadratic time; this is the reference oracle every faster
    convolution path is tested against.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    out = np.zeros(2 * n - 1)
    for k in range(2 * n - 1):
        lo = max(0, k - n + 1)
        hi = min(n - 1, k)
        out[k] = np.dot(a[lo : hi + 1], b[k - hi : k - lo + 1][::-1])
    return out


def norm_ge(a: np.ndarray, threshold: float) -> int:
    """Count of entries >= threshold."""
    return int(np.count_nonzero(np.asarray(a) >= threshold))


def norm_le(a: np.ndarray, threshold: float) -> int:
    """Count of entries <= threshold."""
    return int(np.count_nonzero(np.asarray(a) <= threshold))


def support_ge(a: np.ndarray, threshold: float) -> set[int]:
    """Indices of entries >= threshold."""
    return {int(i) for i in np.flatnonzero(np.asarray(a) >= threshold)}


def round_to_int(x: float) -> int:
    """Nearest integer, ties rounding away from zero (2.5 -> 3)."""
    if not math.isfinite(x):
        raise ValueError(f"cannot round non-finite value {x!r}")
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def lower_median(values) -> float:
    """Median taking the lower of the two middle elements when the
    count is even; deterministic for repeatable recovery output."""
    ordered = sorted(values)
    if not ordered:
        raise ValueError("median of empty collection")
    return ordered[(len(ordered) - 1) // 2]
