"""Undirected graphs, instance parsing and the pairwise-connectivity objective."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

REMOVED = -1

_INT = re.compile(r"^[+-]?\d+$")


class GraphFormatError(ValueError):
    """Raised when an instance file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    ``labels[i]`` is the external id node ``i`` was read under; ``dropped``
    counts self-loops and duplicate edges discarded while building.
    """

    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...] = ()
    dropped: int = 0
    edge_count: int = field(init=False)

    def __post_init__(self):
        total = sum(len(nbrs) for nbrs in self.adjacency)
        if total % 2:
            raise ValueError("adjacency is not symmetric")
        object.__setattr__(self, "edge_count", total // 2)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.adjacency))))

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    n = node_count

    @property
    def m(self) -> int:
        return self.edge_count

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def edges(self) -> Iterable[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[int] = ()
    ) -> "Graph":
        """Build a graph from 0-based edges, dropping loops and duplicates."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        dropped = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
            if u == v or v in nbrs[u]:
                dropped += 1
                continue
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(adjacency, tuple(labels), dropped)


@dataclass
class ComponentDecomposition:
    """Connected components of the residual graph ``G[V \\ removed]``.

    ``labels[u]`` is ``REMOVED`` for removed nodes, otherwise an integer
    component label; ``sizes`` maps each live label to its component size.
    Labels need not be contiguous.
    """

    labels: list[int]
    sizes: dict[int, int]
    next_label: int = -1

    def __post_init__(self):
        if self.next_label < 0:
            self.next_label = max(self.sizes, default=-1) + 1

    @property
    def component_sizes(self) -> list[int]:
        return list(self.sizes.values())

    @property
    def component_count(self) -> int:
        return len(self.sizes)

    def members(self, label: int) -> list[int]:
        return [u for u, lab in enumerate(self.labels) if lab == label]

    def copy(self) -> "ComponentDecomposition":
        return ComponentDecomposition(self.labels[:], dict(self.sizes), self.next_label)


def pair_count(size: int) -> int:
    """Number of unordered node pairs inside a component of ``size`` nodes."""
    return size * (size - 1) // 2


def decompose(g: Graph, removed: Iterable[int] = ()) -> ComponentDecomposition:
    """Label the connected components of ``g`` after deleting ``removed``."""
    n = g.node_count
    labels = [0] * n
    for u in removed:
        if not 0 <= u < n:
            raise ValueError(f"removed node {u} outside node range 0..{n - 1}")
        labels[u] = REMOVED
    # 0 = unvisited; components are numbered from 1 during the sweep
    adj = g.adjacency
    sizes: dict[int, int] = {}
    label = 0
    for root in range(n):
        if labels[root] != 0:
            continue
        label += 1
        labels[root] = label
        stack = [root]
        count = 1
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if labels[w] == 0:
                    labels[w] = label
                    stack.append(w)
                    count += 1
        sizes[label] = count
    # renumber to 0..T-1
    out = [lab - 1 if lab != REMOVED else REMOVED for lab in labels]
    return ComponentDecomposition(out, {lab - 1: s for lab, s in sizes.items()}, label)


def pairwise_connectivity(decomp: ComponentDecomposition | Iterable[int]) -> int:
    """Sum of ``|C|(|C|-1)/2`` over components; also accepts raw sizes."""
    sizes = decomp.sizes.values() if isinstance(decomp, ComponentDecomposition) else decomp
    return sum(s * (s - 1) // 2 for s in sizes)


def objective(g: Graph, removed: Iterable[int]) -> int:
    return pairwise_connectivity(decompose(g, removed))


def _ints(tokens: list[str], lineno: int) -> list[int]:
    for tok in tokens:
        if not _INT.match(tok):
            raise GraphFormatError(f"expected integer node id, got {tok!r}", lineno)
    return [int(t) for t in tokens]


def _data_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        out.append((lineno, line))
    return out


def _parse_adjacency_lists(lines: list[tuple[int, str]]) -> Graph:
    # "n" header, then "u: v w ..." rows with 0-based ids
    lineno, first = lines[0]
    declared = None
    if ":" not in first:
        tokens = first.split()
        if len(tokens) != 1:
            raise GraphFormatError("expected a single node count header", lineno)
        (declared,) = _ints(tokens, lineno)
        lines = lines[1:]
    rows: list[tuple[int, list[int]]] = []
    for lineno, line in lines:
        head, sep, tail = line.partition(":")
        if not sep:
            raise GraphFormatError("expected 'node: neighbours'", lineno)
        (u,) = _ints([head.strip()], lineno)
        rows.append((u, _ints(tail.replace(",", " ").split(), lineno)))
    ids = [u for u, _ in rows] + [v for _, vs in rows for v in vs]
    if not ids:
        raise GraphFormatError("no nodes found")
    base = min(ids)
    if base not in (0, 1):
        raise GraphFormatError(f"adjacency-list ids must start at 0 or 1, got {base}")
    n = max(ids) - base + 1
    if declared is not None:
        if declared < n:
            raise GraphFormatError(f"header declares {declared} nodes but ids reach {n}")
        n = declared
    # each undirected edge is normally listed from both endpoints
    edges = {(min(u, v) - base, max(u, v) - base) for u, vs in rows for v in vs if u != v}
    loops = sum(1 for u, vs in rows for v in vs if u == v)
    g = Graph.from_edges(n, sorted(edges), range(base, base + n))
    if loops:
        object.__setattr__(g, "dropped", loops)
    return g


def parse_edge_list(text: str, header: str = "auto") -> Graph:
    """Parse an instance given as text.

    Two layouts are understood. A plain edge list holds one ``u v`` pair per
    line; ids are shifted by the smallest id when that is 0 or 1 and densely
    remapped otherwise. The adjacency-list layout (an ``n`` line followed by
    ``u: v w ...`` rows, as shipped with the classic CNP benchmark sets) is
    detected by the colons. Lines starting with ``#`` or ``%`` are comments.

    ``header`` controls a leading ``n m`` line in edge lists: ``"yes"`` always
    consumes it, ``"no"`` never does, and ``"auto"`` consumes it only when
    ``m`` equals the number of remaining edge lines and ``n`` covers every id.
    """
    if header not in ("auto", "yes", "no"):
        raise ValueError(f"header must be auto, yes or no, not {header!r}")
    lines = _data_lines(text)
    if not lines:
        raise GraphFormatError("empty instance")
    if any(":" in line for _, line in lines):
        return _parse_adjacency_lists(lines)

    pairs: list[tuple[int, int, int]] = []
    for lineno, line in lines:
        tokens = line.split()
        if len(tokens) < 2:
            raise GraphFormatError("expected two node ids", lineno)
        # extra columns (weights, timestamps) are ignored
        u, v = _ints(tokens[:2], lineno)
        pairs.append((lineno, u, v))

    declared = None
    if header == "yes" or (header == "auto" and _looks_like_header(pairs)):
        _, declared, _ = pairs[0]
        pairs = pairs[1:]
        if not pairs and declared == 0:
            raise GraphFormatError("empty instance")

    ids = sorted({x for _, u, v in pairs for x in (u, v)})
    if not ids:
        n = declared or 0
        if n <= 0:
            raise GraphFormatError("empty instance")
        return Graph.from_edges(n, [])
    if ids[0] in (0, 1):
        base = ids[0]
        n = ids[-1] - base + 1
        if declared is not None and declared > n:
            n = declared
        index = {x: x - base for x in ids}
        labels: Sequence[int] = range(base, base + n)
    else:
        index = {x: i for i, x in enumerate(ids)}
        n = len(ids)
        labels = ids
    g = Graph.from_edges(n, ((index[u], index[v]) for _, u, v in pairs), labels)
    if g.dropped:
        log.info("dropped %d self-loops/duplicate edges", g.dropped)
    return g


def _looks_like_header(pairs: list[tuple[int, int, int]]) -> bool:
    if len(pairs) < 2:
        return False
    _, n, m = pairs[0]
    rest = pairs[1:]
    if m != len(rest) or n <= 0:
        return False
    ids = {x for _, u, v in rest for x in (u, v)}
    lo, hi = min(ids), max(ids)
    if lo in (0, 1):
        return hi - lo < n
    return len(ids) <= n


def read_graph(path: str | PathLike, header: str = "auto") -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read(), header=header)


def removal_gains(g: Graph, decomp: ComponentDecomposition) -> list[int]:
    """Objective decrease obtained by additionally removing each live node.

    One iterative articulation-point DFS over the residual graph: a DFS child
    ``c`` of ``x`` with ``low[c] >= disc[x]`` becomes its own component when
    ``x`` goes, everything else in ``x``'s component stays together. Removed
    nodes get a gain of 0.
    """
    n = g.node_count
    adj = g.adjacency
    labels = decomp.labels
    disc = [0] * n
    low = [0] * n
    sub = [1] * n
    cut_nodes = [0] * n
    cut_pairs = [0] * n
    clock = 1
    for root in range(n):
        if labels[root] == REMOVED or disc[root]:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            x, parent, it = stack[-1]
            for w in it:
                if labels[w] == REMOVED:
                    continue
                if not disc[w]:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, x, iter(adj[w])))
                    break
                if w != parent and disc[w] < low[x]:
                    low[x] = disc[w]
            else:
                stack.pop()
                if parent >= 0:
                    sub[parent] += sub[x]
                    if low[x] < low[parent]:
                        low[parent] = low[x]
                    if low[x] >= disc[parent]:
                        cut_nodes[parent] += sub[x]
                        cut_pairs[parent] += sub[x] * (sub[x] - 1) // 2
    sizes = decomp.sizes
    gains = [0] * n
    for x in range(n):
        lab = labels[x]
        if lab == REMOVED:
            continue
        size = sizes[lab]
        rest = size - 1 - cut_nodes[x]
        gains[x] = size * (size - 1) // 2 - cut_pairs[x] - rest * (rest - 1) // 2
    return gains
