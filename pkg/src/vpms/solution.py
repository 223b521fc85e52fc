"""Candidate solutions and the component-based swap neighbourhood."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable

from .graph import REMOVED, ComponentDecomposition, Graph, decompose, pairwise_connectivity


class Solution:
    """A set of critical nodes together with its residual decomposition.

    Treated as a value: operations build new solutions instead of mutating.
    Equality and hashing only look at the node set.
    """

    __slots__ = ("graph", "nodes", "decomposition", "objective")

    def __init__(
        self,
        graph: Graph,
        nodes: Iterable[int],
        decomposition: ComponentDecomposition | None = None,
        objective: int | None = None,
    ):
        self.graph = graph
        self.nodes = frozenset(nodes)
        if decomposition is None:
            decomposition = decompose(graph, self.nodes)
        self.decomposition = decomposition
        if objective is None:
            objective = pairwise_connectivity(decomposition)
        self.objective = objective

    @property
    def k(self) -> int:
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return self.nodes == other.nodes

    def __hash__(self):
        return hash(self.nodes)

    def __repr__(self):
        return f"Solution(k={self.k}, objective={self.objective})"

    def sorted_nodes(self) -> list[int]:
        return sorted(self.nodes)

    def is_coherent(self) -> bool:
        """Recompute the decomposition from scratch and compare with the cache."""
        fresh = decompose(self.graph, self.nodes)
        if pairwise_connectivity(fresh) != self.objective:
            return False
        if sorted(fresh.sizes.values()) != sorted(self.decomposition.sizes.values()):
            return False
        # same partition: label maps must be bijective
        forward: dict[int, int] = {}
        for a, b in zip(fresh.labels, self.decomposition.labels):
            if (a == REMOVED) != (b == REMOVED):
                return False
            if forward.setdefault(a, b) != b:
                return False
        return len(set(forward.values())) == len(forward)


def search_space_size(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return math.comb(n, k)


@dataclass(frozen=True)
class CandidateSet:
    nodes: list[int]
    threshold: int


def default_threshold(sol: Solution) -> int:
    """Large-component threshold: the mean residual component size, at least 2."""
    dec = sol.decomposition
    if not dec.sizes:
        return 2
    live = sol.graph.node_count - sol.k
    return max(2, -(-live // len(dec.sizes)))


def candidate_set(sol: Solution, threshold: int | None = None) -> CandidateSet:
    """Nodes lying in components of size at least ``threshold``.

    Falls back to the largest component when no component qualifies.
    """
    dec = sol.decomposition
    L = default_threshold(sol) if threshold is None else threshold
    sizes = dec.sizes
    big = {lab for lab, s in sizes.items() if s >= L}
    if not big and sizes:
        # ties resolved by lowest label so the choice is deterministic
        biggest = max(sizes.values())
        big = {min(lab for lab, s in sizes.items() if s == biggest)}
    nodes = [u for u, lab in enumerate(dec.labels) if lab in big]
    return CandidateSet(nodes, L)


def _split(g: Graph, dec: ComponentDecomposition, v: int) -> int:
    """Delete live node ``v`` from ``dec`` in place; return the objective change."""
    labels = dec.labels
    old = labels[v]
    old_size = dec.sizes.pop(old)
    labels[v] = REMOVED
    adj = g.adjacency
    delta = -(old_size * (old_size - 1) // 2)
    for start in adj[v]:
        if labels[start] != old:
            continue
        lab = dec.next_label
        dec.next_label += 1
        labels[start] = lab
        stack = [start]
        count = 1
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if labels[w] == old:
                    labels[w] = lab
                    stack.append(w)
                    count += 1
        dec.sizes[lab] = count
        delta += count * (count - 1) // 2
    return delta


def _merge(g: Graph, dec: ComponentDecomposition, u: int) -> int:
    """Re-insert removed node ``u`` into ``dec`` in place; return the objective change."""
    labels = dec.labels
    sizes = dec.sizes
    adj = g.adjacency
    around = {labels[w] for w in adj[u] if labels[w] != REMOVED}
    if not around:
        lab = dec.next_label
        dec.next_label += 1
        labels[u] = lab
        sizes[lab] = 1
        return 0
    # keep the biggest neighbouring component's label, relabel the rest
    target = max(around, key=lambda lab: (sizes[lab], -lab))
    around.discard(target)
    delta = 0
    total = sizes[target] + 1
    delta -= sizes[target] * (sizes[target] - 1) // 2
    for lab in around:
        s = sizes.pop(lab)
        delta -= s * (s - 1) // 2
        total += s
        for start in adj[u]:
            if labels[start] != lab:
                continue
            labels[start] = target
            stack = [start]
            while stack:
                x = stack.pop()
                for w in adj[x]:
                    if labels[w] == lab:
                        labels[w] = target
                        stack.append(w)
    labels[u] = target
    sizes[target] = total
    return delta + total * (total - 1) // 2


def insertion_cost(g: Graph, dec: ComponentDecomposition, u: int) -> int:
    """Objective increase caused by putting removed node ``u`` back."""
    labels = dec.labels
    sizes = dec.sizes
    seen = set()
    total = 1
    before = 0
    for w in g.adjacency[u]:
        lab = labels[w]
        if lab == REMOVED or lab in seen:
            continue
        seen.add(lab)
        s = sizes[lab]
        total += s
        before += s * (s - 1) // 2
    return total * (total - 1) // 2 - before


def _check_move(sol: Solution, v: int, u: int | None = None) -> None:
    if not 0 <= v < sol.graph.node_count:
        raise ValueError(f"node {v} outside the graph")
    if v in sol.nodes:
        raise ValueError(f"node {v} is already critical")
    if u is not None and u not in sol.nodes:
        raise ValueError(f"node {u} is not critical")


def score_removals(sol: Solution, v: int) -> tuple[ComponentDecomposition, int, dict[int, int]]:
    """Remove ``v`` once, then price swapping it with every ``u`` in the set.

    Returns the post-removal decomposition (a private copy), its objective and
    a map ``u -> f(S + v - u)``.
    """
    _check_move(sol, v)
    g = sol.graph
    dec = sol.decomposition.copy()
    f_split = sol.objective + _split(g, dec, v)
    scores = {u: f_split + insertion_cost(g, dec, u) for u in sol.nodes}
    return dec, f_split, scores


def evaluate_swap_delta(sol: Solution, v: int, u: int) -> int:
    """Objective of ``S + v - u`` without touching ``sol``."""
    _check_move(sol, v, u)
    g = sol.graph
    dec = sol.decomposition.copy()
    return sol.objective + _split(g, dec, v) + insertion_cost(g, dec, u)


def swap(sol: Solution, v: int, rng: random.Random) -> Solution:
    """Bring ``v`` into the set and drop the member whose return hurts least.

    Ties between equally good members are broken uniformly with ``rng``.
    """
    dec, f_split, scores = score_removals(sol, v)
    best = min(scores.values())
    # sorted for reproducibility: frozenset order is not stable across runs
    ties = sorted(u for u, f in scores.items() if f == best)
    u = ties[0] if len(ties) == 1 else rng.choice(ties)
    _merge(sol.graph, dec, u)
    nodes = set(sol.nodes)
    nodes.remove(u)
    nodes.add(v)
    return Solution(sol.graph, nodes, dec, best)


def random_swap(sol: Solution, rng: random.Random, threshold: int | None = None) -> Solution:
    """Draw ``v`` uniformly from the large components, then apply :func:`swap`."""
    W = candidate_set(sol, threshold)
    if not W.nodes:
        raise ValueError("no live node left to swap in")
    return swap(sol, rng.choice(W.nodes), rng)
