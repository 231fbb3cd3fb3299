"""Edge-count parameters, balanced path partitions and the extremal construction."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ContractError, DomainError
from .graph import Graph, complement, complete_graph, disjoint_union, path_graph
from .phipsi import increment_deficit

__all__ = [
    "ExtremalSpec",
    "params_from_m",
    "balanced_partition",
    "build_extremal_graph",
    "extremal_complement",
    "rebalance_step",
    "rebalance",
    "balancing_gain",
    "partition_dominance",
]


def _c2(x):
    return x * (x - 1) // 2


def balanced_partition(N: int, c: int) -> list[int]:
    """``c`` parts of ``N``, each ``N // c`` or ``N // c + 1``, non-decreasing."""
    if c < 1:
        raise DomainError(f"need at least one part, got c={c}")
    if N < c:
        raise DomainError(f"cannot split N={N} into c={c} parts of size >= 1")
    q, r = divmod(N, c)
    return [q] * (c - r) + [q + 1] * r


@dataclass(frozen=True)
class ExtremalSpec:
    m: int
    n: int
    s: int
    parts: tuple

    @property
    def c(self) -> int:
        return self.s + 1

    @property
    def q(self) -> int:
        return self.n // self.c

    @property
    def r(self) -> int:
        return self.n - self.q * self.c

    @property
    def e(self) -> int:
        """Edges of the complement, ``n - 1 - s``."""
        return self.n - 1 - self.s

    @property
    def is_degenerate(self) -> bool:
        """``s == 0``: the minimiser is ``K_{n-1}``, not the complement of ``P_n``."""
        return self.s == 0

    @classmethod
    def from_ns(cls, n: int, s: int) -> ExtremalSpec:
        if not 0 <= s <= n - 1:
            raise DomainError(f"s must lie in [0, n-1], got n={n}, s={s}")
        m = _c2(n - 1) + s
        parts = tuple(balanced_partition(n, s + 1)) if s >= 1 else (n,)
        return cls(m, n, s, parts)

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "s": self.s, "c": self.c, "q": self.q,
                "r": self.r, "e": self.e, "parts": list(self.parts)}


def params_from_m(m: int) -> ExtremalSpec:
    """``n`` with ``C(n-1, 2) < m <= C(n, 2)`` and ``s = m - C(n-1, 2)``.

    The float ceiling formula only seeds an exact integer search.
    """
    if m < 3:
        raise DomainError(f"m must be >= 3, got {m}")
    n = max(2, math.ceil((1 + math.sqrt(8 * m + 1)) / 2))
    while _c2(n) < m:
        n += 1
    while _c2(n - 1) >= m:
        n -= 1
    return ExtremalSpec.from_ns(n, m - _c2(n - 1))


def extremal_complement(spec: ExtremalSpec) -> Graph:
    """The balanced union of ``s + 1`` paths on ``n`` vertices, consecutive labels."""
    if spec.is_degenerate:
        raise ContractError("s = 0 has no balanced-path complement; see build_extremal_graph")
    return disjoint_union(*(path_graph(k) for k in spec.parts))


def build_extremal_graph(spec: ExtremalSpec) -> Graph:
    """Complement of the balanced path union; ``K_{n-1}`` when ``s == 0``."""
    if spec.is_degenerate:
        return complete_graph(spec.n - 1)
    g = complement(extremal_complement(spec))
    assert g.m == spec.m
    return g


def _default_pair(parts):
    i = max(range(len(parts)), key=lambda j: (parts[j], -j))
    k = min(range(len(parts)), key=lambda j: (parts[j], j))
    return i, k


def rebalance_step(parts, i=None, i2=None) -> list[int]:
    """Move one vertex from part ``i`` to part ``i2`` (needs ``parts[i] >= parts[i2] + 2``).

    Without indices, the first largest and first smallest parts are used.
    """
    parts = list(parts)
    if any(p < 2 for p in parts):
        raise ContractError(f"all parts must be >= 2: {parts}")
    if i is None and i2 is None:
        i, i2 = _default_pair(parts)
    elif i is None or i2 is None:
        raise ContractError("give both indices or neither")
    if i == i2 or parts[i] < parts[i2] + 2:
        raise ContractError(f"parts[{i}]={parts[i]} is not >= parts[{i2}]+2={parts[i2] + 2}")
    parts[i] -= 1
    parts[i2] += 1
    return parts


def rebalance(parts) -> list[tuple[list[int], int, int]]:
    """Iterate :func:`rebalance_step` to the fixpoint.

    Returns the trajectory as ``(parts_before, i, i2)`` triples; the final
    state is ``rebalance_step`` applied to the last entry (or ``parts`` when
    already balanced).
    """
    parts = list(parts)
    steps = []
    while max(parts) - min(parts) >= 2:
        i, i2 = _default_pair(parts)
        steps.append((list(parts), i, i2))
        parts = rebalance_step(parts, i, i2)
    return steps


def balancing_gain(parts, lam: float) -> float:
    """``sum Phi_{P_k}(lam)`` over ``parts`` minus the same sum over the balanced partition.

    Accumulated step by step along :func:`rebalance`: moving a vertex from a
    part of size ``a`` to one of size ``b <= a - 2`` lowers the sum by
    ``(d(b) - d(a-1)) / (lam - 2)`` where ``d`` is :func:`increment_deficit`.
    Every term is a difference of two positives of different magnitude, so
    the total stays resolvable where the direct float difference of the two
    sums rounds to zero.
    """
    gain = 0.0
    for before, i, i2 in rebalance(parts):
        a, b = before[i], before[i2]
        gain += (increment_deficit(b, lam) - increment_deficit(a - 1, lam)) / (lam - 2.0)
    return gain


def partition_dominance(N1: int, N2: int, c: int) -> bool:
    """Is the sorted balanced partition of ``N1`` entrywise <= that of ``N2``?"""
    p1 = balanced_partition(N1, c)
    p2 = balanced_partition(N2, c)
    return all(a <= b for a, b in zip(p1, p2))

