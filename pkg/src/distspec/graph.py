"""Labeled simple graphs, text formats, complements, components and distances.

Vertices are ``0..n-1``; edges are stored as sorted pairs ``(u, v)`` with
``u < v``.  Every object here is immutable.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import ContractError, DisconnectedGraphError, ParseError

__all__ = [
    "Graph",
    "DistanceMatrix",
    "UNREACHABLE",
    "ShapeKind",
    "ComponentShape",
    "parse_graph",
    "serialize_graph",
    "to_graph6",
    "from_graph6",
    "complement",
    "components",
    "is_connected",
    "all_pairs_distances",
    "distance_matrix_via_complement",
    "complement_diameter_witness",
    "diameter",
    "adjacency_matrix",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "empty_graph",
    "disjoint_union",
    "as_graph",
]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise ValueError(f"order must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        norm = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside [0, {self.n})")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> Graph:
        """Build a graph, rejecting repeated pairs instead of merging them."""
        seen = set()
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(seen))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def relabel(self, perm) -> Graph:
        """Vertex ``v`` becomes ``perm[v]``."""
        return Graph(self.n, frozenset((perm[u], perm[v]) for u, v in self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


def path_graph(k: int, offset: int = 0, n: int | None = None) -> Graph:
    n = offset + k if n is None else n
    return Graph(n, frozenset((offset + i, offset + i + 1) for i in range(k - 1)))


def cycle_graph(ell: int, offset: int = 0, n: int | None = None) -> Graph:
    if ell < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    n = offset + ell if n is None else n
    edges = {(offset + i, offset + (i + 1) % ell) for i in range(ell)}
    return Graph(n, frozenset(edges))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def disjoint_union(*graphs: Graph) -> Graph:
    """Place the graphs side by side on consecutive label ranges."""
    edges = set()
    offset = 0
    for g in graphs:
        edges.update((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, frozenset(edges))


def adjacency_matrix(g: Graph, dtype=np.int64) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=dtype)
    if g.edges:
        idx = np.array(g.sorted_edges())
        a[idx[:, 0], idx[:, 1]] = 1
        a[idx[:, 1], idx[:, 0]] = 1
    return a


# ---------------------------------------------------------------- formats

_G6_HEADER = ">>graph6<<"


def to_graph6(g: Graph) -> str:
    """Short-form graph6 (n < 63)."""
    if g.n >= 63:
        raise ValueError("only the short graph6 form (n < 63) is supported")
    bits = [1 if (i, j) in g.edges else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    chars = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return "".join(chars)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    base = 0
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):]
        base = len(_G6_HEADER)
    if not s:
        raise ParseError("empty graph6 string", position=base)
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"invalid graph6 character {ch!r}", position=base + i)
    n = ord(s[0]) - 63
    if n == 63:
        raise ParseError("long-form graph6 (n >= 63) is not supported", position=base)
    nbits = n * (n - 1) // 2
    want = 1 + (nbits + 5) // 6
    if len(s) != want:
        raise ParseError(f"graph6 length {len(s)} does not match n={n} (expected {want})",
                         position=base + min(len(s), want))
    bits = []
    for ch in s[1:]:
        val = ord(ch) - 63
        bits.extend((val >> (5 - t)) & 1 for t in range(6))
    if any(bits[nbits:]):
        raise ParseError("non-zero graph6 padding bits", position=base + len(s) - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, frozenset(edges))


def _parse_edge_list(text: str) -> Graph:
    lines = text.split("\n")
    rows = [(no, ln.strip()) for no, ln in enumerate(lines, start=1) if ln.strip()]
    if not rows:
        raise ParseError("empty input", line=1)
    no, head = rows[0]
    try:
        n = int(head)
    except ValueError:
        raise ParseError(f"expected vertex count, got {head!r}", line=no) from None
    if n < 0:
        raise ParseError("vertex count must be non-negative", line=no)
    edges = set()
    for no, ln in rows[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {ln!r}", line=no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {ln!r}", line=no) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"endpoint out of range [0, {n}) in {ln!r}", line=no)
        if u == v:
            raise ParseError(f"loop at vertex {u}", line=no)
        key = (min(u, v), max(u, v))
        if key in edges:
            raise ParseError(f"duplicate edge {key}", line=no)
        edges.add(key)
    return Graph(n, frozenset(edges))


def parse_graph(text: str) -> Graph:
    """Parse an edge list (first line ``n``) or a graph6 string.

    The format is sniffed from the first non-blank byte: a decimal digit
    starts an edge list, anything else is read as graph6.
    """
    stripped = text.lstrip()
    if not stripped:
        raise ParseError("empty input", line=1)
    if stripped[0].isdigit():
        return _parse_edge_list(text)
    return from_graph6(stripped.split("\n", 1)[0])


def serialize_graph(g: Graph, fmt: str = "edgelist") -> str:
    if fmt == "graph6":
        return to_graph6(g)
    if fmt != "edgelist":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def as_graph(obj) -> Graph:
    """Coerce a Graph, graph text, or 0/1 symmetric adjacency array to a Graph."""
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, bytes):
        obj = obj.decode("ascii")
    if isinstance(obj, str):
        return parse_graph(obj)
    a = np.asarray(obj)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("adjacency matrix must be symmetric")
    if np.any(np.diag(a) != 0) or not np.all((a == 0) | (a == 1)):
        raise ValueError("adjacency matrix must be 0/1 with zero diagonal")
    iu, ju = np.nonzero(np.triu(a, 1))
    return Graph(a.shape[0], frozenset(zip(iu.tolist(), ju.tolist())))


# ---------------------------------------------------------------- structure

def complement(g: Graph) -> Graph:
    return Graph(g.n, frozenset(p for p in combinations(range(g.n), 2) if p not in g.edges))


class ShapeKind(str, enum.Enum):
    PATH = "path"
    CYCLE = "cycle"
    OTHER = "other"


@dataclass(frozen=True)
class ComponentShape:
    kind: ShapeKind
    size: int

    def __post_init__(self):
        if self.kind is ShapeKind.PATH and self.size < 1:
            raise ValueError("a path has at least one vertex")
        if self.kind is ShapeKind.CYCLE and self.size < 3:
            raise ValueError("a cycle has at least three vertices")

    def __str__(self):
        return {"path": "P", "cycle": "C", "other": "X"}[self.kind.value] + str(self.size)


def components(g: Graph) -> list[tuple[frozenset, ComponentShape]]:
    """Connected components ordered by smallest vertex, each classified.

    2-regular components are cycles; connected components with max degree
    at most 2 and ``size - 1`` edges are paths; everything else is Other.
    """
    adj = g.neighbors()
    seen = [False] * g.n
    out = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = []
        seen[start] = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        size = len(comp)
        degs = [len(adj[u]) for u in comp]
        n_edges = sum(degs) // 2
        if size >= 3 and all(d == 2 for d in degs):
            shape = ComponentShape(ShapeKind.CYCLE, size)
        elif max(degs) <= 2 and n_edges == size - 1:
            shape = ComponentShape(ShapeKind.PATH, size)
        else:
            shape = ComponentShape(ShapeKind.OTHER, size)
        out.append((frozenset(comp), shape))
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


class _Unreachable:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNREACHABLE"

    def __reduce__(self):
        return (_Unreachable, ())


UNREACHABLE = _Unreachable()


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Hop distances; unreachable pairs are held in a separate mask.

    ``d[u, v]`` returns an ``int`` or the :data:`UNREACHABLE` marker.
    ``to_array()`` refuses to produce numbers when any pair is unreachable.
    """

    n: int
    values: np.ndarray
    unreachable: np.ndarray
    basis: str | None = None

    def __getitem__(self, key):
        u, v = key
        if self.unreachable[u, v]:
            return UNREACHABLE
        return int(self.values[u, v])

    @property
    def connected(self) -> bool:
        return not self.unreachable.any()

    def to_array(self) -> np.ndarray:
        if not self.connected:
            u, v = (int(x) for x in np.argwhere(self.unreachable)[0])
            raise DisconnectedGraphError(f"vertices {u} and {v} are not connected")
        return self.values.copy()

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return (self.n == other.n
                and np.array_equal(self.unreachable, other.unreachable)
                and np.array_equal(np.where(self.unreachable, 0, self.values),
                                   np.where(other.unreachable, 0, other.values)))

    def tolist(self):
        return [[self[u, v] for v in range(self.n)] for u in range(self.n)]


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    adj = g.neighbors()
    vals = np.zeros((g.n, g.n), dtype=np.int64)
    unreach = np.ones((g.n, g.n), dtype=bool)
    for s in range(g.n):
        unreach[s, s] = False
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if unreach[s, w]:
                    unreach[s, w] = False
                    vals[s, w] = vals[s, u] + 1
                    queue.append(w)
    return DistanceMatrix(g.n, vals, unreach)


def complement_diameter_witness(h0: Graph):
    """Return a pair at distance > 2 in the complement of ``h0``, or None.

    ``u, v`` are at complement distance <= 2 iff they are non-adjacent in
    ``h0`` or some third vertex is adjacent in ``h0`` to neither.
    """
    adj = h0.neighbors()
    for u, v in h0.sorted_edges():
        blocked = adj[u] | adj[v] | {u, v}
        if len(blocked) == h0.n:
            return (u, v)
    return None


def distance_matrix_via_complement(h0: Graph) -> DistanceMatrix:
    """``J - I + A(h0)``, the distance matrix of the complement when its diameter is <= 2.

    ``basis`` records which hypothesis admitted the identity: ``"cycles-and-paths"``
    (at least two components, all cycles or paths, n >= 4) or ``"diameter-2"``.
    """
    bad = complement_diameter_witness(h0)
    if bad is not None:
        raise ContractError(
            f"complement has diameter > 2: vertices {bad[0]} and {bad[1]} have no common neighbour")
    comps = components(h0)
    if (h0.n >= 4 and len(comps) >= 2
            and all(shape.kind is not ShapeKind.OTHER for _, shape in comps)):
        basis = "cycles-and-paths"
    else:
        basis = "diameter-2"
    d = np.ones((h0.n, h0.n), dtype=np.int64) - np.eye(h0.n, dtype=np.int64) + adjacency_matrix(h0)
    return DistanceMatrix(h0.n, d, np.zeros((h0.n, h0.n), dtype=bool), basis=basis)


def diameter(g: Graph) -> int:
    dist = all_pairs_distances(g)
    if not dist.connected:
        u, v = (int(x) for x in np.argwhere(dist.unreachable)[0])
        raise DisconnectedGraphError(f"graph is disconnected: {u} cannot reach {v}")
    return int(dist.values.max()) if g.n else 0
