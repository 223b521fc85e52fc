"""Initial solutions and the double-backbone crossover."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import partial

from .dlas import DEFAULT_HISTORY_LENGTH, dlas
from .graph import Graph, decompose, pairwise_connectivity, removal_gains
from .solution import Solution, _merge, _split, insertion_cost, random_swap


class IdenticalParentsError(ValueError):
    """Both parents hold the same node set; there is nothing to recombine."""


@dataclass
class CrossoverConfig:
    exclusive_probability: float = 0.5
    rng: random.Random | None = None

    def __post_init__(self):
        if not 0.0 <= self.exclusive_probability <= 1.0:
            raise ValueError("exclusive_probability must lie in [0, 1]")


@dataclass
class RepairLog:
    removed: list[int]
    added: list[int]


def random_solution(g: Graph, k: int, rng: random.Random) -> Solution:
    if not 1 <= k < g.node_count:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={g.node_count}")
    return Solution(g, rng.sample(range(g.node_count), k))


def build_solution(
    g: Graph,
    k: int,
    max_idle_iters: int,
    rng: random.Random,
    hl: int = DEFAULT_HISTORY_LENGTH,
    threshold: int | None = None,
    should_stop=None,
) -> Solution:
    """Random k-subset polished by DLAS."""
    start = random_solution(g, k, rng)
    return improve(start, max_idle_iters, rng, hl, threshold, should_stop)


def improve(
    sol: Solution,
    max_idle_iters: int,
    rng: random.Random,
    hl: int = DEFAULT_HISTORY_LENGTH,
    threshold: int | None = None,
    should_stop=None,
) -> Solution:
    neighbor = None if threshold is None else partial(random_swap, threshold=threshold)
    outcome = dlas(sol, max_idle_iters, hl, rng, neighbor=neighbor, should_stop=should_stop)
    return outcome.best_solution


def _pick(rng: random.Random, ties: list[int]) -> int:
    return ties[0] if len(ties) == 1 else rng.choice(ties)


def double_backbone_crossover(
    s1: Solution, s2: Solution, cfg: CrossoverConfig, log: RepairLog | None = None
) -> Solution:
    """Recombine two parents around their shared nodes.

    The shared nodes are always kept, each node owned by exactly one parent
    joins with probability ``cfg.exclusive_probability``, and the result is
    repaired greedily to exactly ``k`` nodes: surplus nodes are dropped in
    order of cheapest re-insertion, missing nodes are taken from outside
    both parents in order of largest objective decrease.
    """
    if s1.k != s2.k:
        raise ValueError(f"parents differ in size: {s1.k} vs {s2.k}")
    if s1.nodes == s2.nodes:
        raise IdenticalParentsError("parents hold the same node set")
    g = s1.graph
    k = s1.k
    rng = cfg.rng if cfg.rng is not None else random.Random()
    p = cfg.exclusive_probability

    backbone = s1.nodes & s2.nodes
    partial = set(backbone)
    for u in sorted(s1.nodes ^ s2.nodes):
        if rng.random() < p:
            partial.add(u)

    dec = decompose(g, partial)
    f = pairwise_connectivity(dec)
    while len(partial) > k:
        costs = {u: insertion_cost(g, dec, u) for u in partial}
        cheapest = min(costs.values())
        u = _pick(rng, sorted(u for u, c in costs.items() if c == cheapest))
        f += _merge(g, dec, u)
        partial.remove(u)
        if log is not None:
            log.removed.append(u)

    if len(partial) < k:
        union = s1.nodes | s2.nodes
        pool = [u for u in range(g.node_count) if u not in union]
        if len(pool) < k - len(partial):
            # k close to n: fall back to parent nodes left out in step b
            pool += sorted(union - partial)
        while len(partial) < k:
            gains = removal_gains(g, dec)
            top = max(gains[u] for u in pool)
            u = _pick(rng, [u for u in pool if gains[u] == top])
            f += _split(g, dec, u)
            partial.add(u)
            pool.remove(u)
            if log is not None:
                log.added.append(u)

    return Solution(g, partial, dec, f)
