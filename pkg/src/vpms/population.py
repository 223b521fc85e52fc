"""Elite population management and the variable-population memetic driver."""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .construction import CrossoverConfig, build_solution, double_backbone_crossover, improve
from .graph import Graph
from .records import RunConfig, RunRecord, SizingParams, success
from .solution import Solution

log = logging.getLogger(__name__)

DUPLICATE_RETRIES = 10


@dataclass
class Population:
    members: list[Solution]
    best_ever: Solution
    ps: int = 0

    def __post_init__(self):
        if not self.ps:
            self.ps = len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, sol: Solution) -> bool:
        return any(sol.nodes == m.nodes for m in self.members)

    def distinct(self) -> bool:
        return len({m.nodes for m in self.members}) == len(self.members)


@dataclass
class GenerationState:
    gens: int = 0
    idle_gens: int = 0


@dataclass(frozen=True)
class GenerationRecord:
    """Per-generation trace line."""

    gens: int
    ps: int
    idle_gens: int
    f_best: int
    f_offspring: int
    event: str | None = None


def perturb(sol: Solution, rng: random.Random) -> Solution:
    """Exchange one random critical node for one random non-critical node."""
    n = sol.graph.node_count
    u = rng.choice(sorted(sol.nodes))
    v = rng.choice([x for x in range(n) if x not in sol.nodes])
    return Solution(sol.graph, (sol.nodes - {u}) | {v})


def distinct_solution(
    existing: list[Solution], build: Callable[[], Solution], rng: random.Random
) -> Solution:
    """Build solutions until one differs from ``existing``; perturb as a last resort."""
    taken = {s.nodes for s in existing}
    sol = build()
    for _ in range(DUPLICATE_RETRIES):
        if sol.nodes not in taken:
            return sol
        sol = build()
    while sol.nodes in taken:
        sol = perturb(sol, rng)
    return sol


def population_building(size: int, build: Callable[[], Solution], rng: random.Random) -> Population:
    """Build ``size`` distinct DLAS-polished solutions (two for VPMS)."""
    members: list[Solution] = []
    for _ in range(size):
        members.append(distinct_solution(members, build, rng))
    best = min(members, key=lambda s: s.objective)
    return Population(members, best, size)


def _ranks(values: list[float], reverse: bool = False) -> list[int]:
    # competition ranking: tied values share the smallest rank
    order = sorted(values, reverse=reverse)
    first = {}
    for pos, val in enumerate(order, start=1):
        first.setdefault(val, pos)
    return [first[v] for v in values]


def distance(a: Solution, b: Solution) -> int:
    return len(a.nodes) - len(a.nodes & b.nodes)


def pool_scores(pool: list[Solution], beta: float) -> list[float]:
    """``beta * quality rank + (1 - beta) * distance rank``; lower is better."""
    size = len(pool)
    avg_dist = [
        sum(distance(a, b) for j, b in enumerate(pool) if j != i) / (size - 1)
        for i, a in enumerate(pool)
    ]
    rank_f = _ranks([s.objective for s in pool])
    rank_d = _ranks(avg_dist, reverse=True)
    return [beta * rf + (1 - beta) * rd for rf, rd in zip(rank_f, rank_d)]


def population_updating(
    pop: Population, offspring: Solution, beta: float, rng: random.Random
) -> Population:
    """Insert ``offspring`` and evict the worst-scoring pool member (possibly the offspring)."""
    if offspring in pop:
        return pop
    pool = pop.members + [offspring]
    scores = pool_scores(pool, beta)
    worst = max(scores)
    ties = [i for i, s in enumerate(scores) if s == worst]
    evict = ties[0] if len(ties) == 1 else rng.choice(ties)
    del pool[evict]
    pop.members = pool
    return pop


def population_sizing(
    pop: Population,
    state: GenerationState,
    params: SizingParams,
    build: Callable[[], Solution],
    rng: random.Random,
) -> str | None:
    """Expand or rebuild ``pop`` in place after a stagnation spell.

    Returns ``"expand"``, ``"rebuild"`` or ``None`` when nothing happened.
    """
    if state.idle_gens <= params.max_idle_gens:
        return None
    if pop.ps < params.ps_max:
        pop.ps = min(pop.ps + params.ps_inc, params.ps_max)
        while len(pop.members) < pop.ps:
            pop.members.append(distinct_solution(pop.members, build, rng))
        event = "expand"
    else:
        pop.ps = 2
        pop.members = [pop.best_ever]
        pop.members.append(distinct_solution(pop.members, build, rng))
        event = "rebuild"
    # the recorded best never regresses
    for m in pop.members:
        if m.objective < pop.best_ever.objective:
            pop.best_ever = m
    state.idle_gens = 0
    return event


def vpms_solve(
    g: Graph,
    k: int,
    config: RunConfig,
    *,
    instance: str = "",
    f_bkv: int | None = None,
    optimal: bool = False,
    rng: random.Random | None = None,
    clock: Callable[[], float] = time.perf_counter,
    on_generation: Callable[[GenerationRecord, Population], None] | None = None,
) -> RunRecord:
    """Run the memetic search once and report the outcome.

    ``mode="vpms"`` starts from two elites and resizes on stagnation;
    ``mode="fpms"`` prebuilds ``ps_max`` elites and never resizes. The run
    ends when the generation budget is spent, the time limit (seconds on
    ``clock``) passes, or the best value reaches ``config.target``.
    """
    if not 1 <= k < g.node_count:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={g.node_count}")
    rng = rng if rng is not None else random.Random(config.seed)
    params = config.sizing
    start = clock()

    def out_of_time() -> bool:
        return config.time_limit is not None and clock() - start >= config.time_limit

    def build() -> Solution:
        return build_solution(
            g, k, params.max_idle_iters, rng, config.history_length,
            config.threshold, should_stop=out_of_time,
        )

    size = 2 if config.mode == "vpms" else params.ps_max
    pop = population_building(size, build, rng)
    best_time = clock() - start
    best_gen = 0
    state = GenerationState()
    xcfg = CrossoverConfig(config.crossover_p, rng)

    def reached() -> bool:
        return config.target is not None and pop.best_ever.objective <= config.target

    while config.max_generations is None or state.gens < config.max_generations:
        if out_of_time() or reached():
            break
        i, j = rng.sample(range(len(pop.members)), 2)
        child = double_backbone_crossover(pop.members[i], pop.members[j], xcfg)
        child = improve(
            child, params.max_idle_iters, rng, config.history_length,
            config.threshold, should_stop=out_of_time,
        )
        if out_of_time():
            break
        if child.objective < pop.best_ever.objective:
            pop.best_ever = child
            state.idle_gens = 0
            best_time = clock() - start
            best_gen = state.gens + 1
        else:
            state.idle_gens += 1
        population_updating(pop, child, config.beta, rng)
        event = None
        if config.mode == "vpms":
            before = pop.best_ever
            event = population_sizing(pop, state, params, build, rng)
            if pop.best_ever is not before:
                best_time = clock() - start
                best_gen = state.gens + 1
        state.gens += 1
        if on_generation is not None:
            on_generation(
                GenerationRecord(
                    state.gens, pop.ps, state.idle_gens, pop.best_ever.objective, child.objective, event
                ),
                pop,
            )

    best = pop.best_ever
    return RunRecord(
        instance=instance,
        seed=config.seed,
        mode=config.mode,
        f_best=best.objective,
        t_to_best=round(best_time, 6),
        gens=best_gen,
        succ=success(best.objective, f_bkv, optimal, instance),
        total_gens=state.gens,
        elapsed=round(clock() - start, 6),
        best_set=sorted(g.labels[u] for u in best.nodes),
        config=config.to_dict(),
    )
