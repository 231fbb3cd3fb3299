"""Vectorised helpers for labeled edge-subset enumeration.

A candidate complement on ``n`` vertices with ``e`` edges is a sorted row
of ``e`` indices into the ``C(n, 2)`` vertex pairs (lexicographic order).
Work is sharded by the first index of the row.
"""

from __future__ import annotations

from math import comb

import numpy as np

CHUNK = 4096


def pair_table(n: int) -> np.ndarray:
    """``(C(n,2), 2)`` array of vertex pairs ``(u, v)``, ``u < v``, lexicographic."""
    iu, ju = np.triu_indices(n, 1)
    return np.stack([iu, ju], axis=1).astype(np.int64)


def count_subsets(n: int, e: int) -> int:
    return comb(comb(n, 2), e)


def subset_table(n_items: int, k: int) -> np.ndarray:
    """All ``k``-subsets of ``range(n_items)`` as sorted rows, lexicographic order.

    Built recursively: the subsets whose first element is ``f`` are ``f``
    prepended to the contiguous tail of the ``(k-1)``-table whose first
    element exceeds ``f``.
    """
    if k == 0:
        return np.zeros((1, 0), dtype=np.int16)
    if k == 1:
        return np.arange(n_items, dtype=np.int16)[:, None]
    sub = subset_table(n_items, k - 1)
    firsts = sub[:, 0]
    blocks = []
    for f in range(n_items - k + 1):
        tail = sub[np.searchsorted(firsts, f + 1):]
        head = np.full((tail.shape[0], 1), f, dtype=np.int16)
        blocks.append(np.hstack([head, tail]))
    return np.vstack(blocks)


def shards(n: int, e: int) -> list[int]:
    """Leading pair indices that start at least one ``e``-subset (``[-1]`` when e = 0)."""
    if e == 0:
        return [-1]
    return list(range(comb(n, 2) - e + 1))


def shard_size(n: int, e: int, lead: int) -> int:
    if lead < 0:
        return 1
    return comb(comb(n, 2) - lead - 1, e - 1)


class SubsetSource:
    """Serves shards of the ``e``-subsets of the pairs of ``n`` vertices."""

    def __init__(self, n: int, e: int):
        self.n, self.e = n, e
        self.n_pairs = comb(n, 2)
        self._tail = subset_table(self.n_pairs, e - 1) if e >= 1 else None
        self._firsts = self._tail[:, 0] if e >= 2 else None

    def iter_shard(self, lead: int, chunk: int = CHUNK):
        """Yield ``(B, e)`` int64 blocks of rows whose first index is ``lead``."""
        if lead < 0:
            yield np.zeros((1, 0), dtype=np.int64)
            return
        if self.e == 1:
            yield np.array([[lead]], dtype=np.int64)
            return
        tail = self._tail[np.searchsorted(self._firsts, lead + 1):]
        for start in range(0, tail.shape[0], chunk):
            part = tail[start:start + chunk].astype(np.int64)
            head = np.full((part.shape[0], 1), lead, dtype=np.int64)
            yield np.hstack([head, part])


def iter_shard(n: int, e: int, lead: int, chunk: int = CHUNK):
    yield from SubsetSource(n, e).iter_shard(lead, chunk)


def endpoints(rows: np.ndarray, pairs: np.ndarray):
    """Endpoint arrays ``(B, e)`` for each row of pair indices."""
    return np.take(pairs[:, 0], rows), np.take(pairs[:, 1], rows)


def complement_adjacency(rows: np.ndarray, n: int, pairs: np.ndarray) -> np.ndarray:
    """Boolean ``(B, n, n)`` adjacency of ``G``, the complement of each row's graph."""
    b = rows.shape[0]
    adj = np.ones((b, n, n), dtype=bool)
    adj[:, np.arange(n), np.arange(n)] = False
    if rows.shape[1]:
        u, v = endpoints(rows, pairs)
        bi = np.repeat(np.arange(b), rows.shape[1])
        adj[bi, u.ravel(), v.ravel()] = False
        adj[bi, v.ravel(), u.ravel()] = False
    return adj


def bfs_distances(adj: np.ndarray):
    """Hop distances for a stack of adjacency matrices.

    Returns ``(dist, connected)`` where ``dist`` is float64 ``(B, n, n)``
    (entries for unreachable pairs are meaningless) and ``connected`` is a
    boolean ``(B,)`` mask.  Reach sets grow one hop per round via a batched
    boolean product; rounds stop when nothing new is reached.
    """
    b, n, _ = adj.shape
    eye = np.eye(n, dtype=bool)
    reached = adj | eye
    dist = adj.astype(np.float64)
    a32 = adj.astype(np.float32)
    hop = 1
    while hop < n - 1:
        nxt = np.matmul(reached.astype(np.float32), a32) > 0
        new = nxt & ~reached
        if not new.any():
            break
        hop += 1
        dist[new] = hop
        reached |= nxt
    return dist, reached.all(axis=(1, 2))


def degrees(rows: np.ndarray, n: int, pairs: np.ndarray) -> np.ndarray:
    b = rows.shape[0]
    if rows.shape[1] == 0:
        return np.zeros((b, n), dtype=np.int64)
    u, v = endpoints(rows, pairs)
    off = (np.arange(b) * n)[:, None]
    flat = np.concatenate([(u + off).ravel(), (v + off).ravel()])
    return np.bincount(flat, minlength=b * n).reshape(b, n)


def walk_profiles(rows: np.ndarray, n: int, pairs: np.ndarray, depth: int) -> np.ndarray:
    """``w_0..w_depth`` for each row's graph, as exact int64 ``(B, depth+1)``.

    With ``x_j = A^j 1``: ``w_{2j} = x_j . x_j`` and ``w_{2j+1} = x_j . x_{j+1}``,
    so ``ceil(depth/2)`` products suffice.  ``A x`` is applied edge by edge
    (scatter over both orientations); counts stay below 2**53 and are
    accumulated in float64, then checked and cast.
    """
    b, e = rows.shape
    out = np.zeros((b, depth + 1), dtype=np.float64)
    out[:, 0] = n
    if e == 0 or depth == 0:
        return out.astype(np.int64)
    u, v = endpoints(rows, pairs)
    off = (np.arange(b) * n)[:, None]
    src = np.concatenate([(v + off).ravel(), (u + off).ravel()])
    dst = np.concatenate([(u + off).ravel(), (v + off).ravel()])
    x = np.ones(b * n)
    j = 0
    while 2 * j + 1 <= depth:
        y = np.bincount(dst, weights=x[src], minlength=b * n)
        xb, yb = x.reshape(b, n), y.reshape(b, n)
        out[:, 2 * j + 1] = np.einsum("ij,ij->i", xb, yb)
        if 2 * j + 2 <= depth:
            out[:, 2 * j + 2] = np.einsum("ij,ij->i", yb, yb)
        x = y
        j += 1
    if out.max() >= 2.0 ** 53:
        raise OverflowError("walk counts exceed exact float64 range")
    return out.astype(np.int64)


def rows_to_edges(row, pairs) -> list[tuple[int, int]]:
    return [tuple(int(x) for x in pairs[i]) for i in row]
