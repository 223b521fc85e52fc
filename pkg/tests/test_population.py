import random
from functools import partial

import pytest

from oracles import gnp, star
from vpms.construction import build_solution
from vpms.graph import Graph
from vpms.population import (
    GenerationState,
    Population,
    distance,
    pool_scores,
    population_building,
    population_sizing,
    population_updating,
    vpms_solve,
)
from vpms.records import RunConfig, SizingParams
from vpms.solution import Solution


class Fake(Solution):
    """Solution with a hand-set objective, for pool arithmetic tests."""

    def __init__(self, nodes, f):
        self.graph = None
        self.nodes = frozenset(nodes)
        self.decomposition = None
        self.objective = f


def test_building_star():
    g = star(4)
    rng = random.Random(0)
    pop = population_building(2, partial(build_solution, g, 1, 30, rng), rng)
    assert pop.ps == 2 and len(pop) == 2
    assert pop.distinct()
    assert pop.best_ever.objective == 0


def test_building_deterministic():
    g = gnp(40, 0.08, random.Random(1))

    def make(seed):
        rng = random.Random(seed)
        return [m.nodes for m in population_building(4, partial(build_solution, g, 5, 40, rng), rng).members]

    assert make(3) == make(3)


def test_hand_built_score_table():
    a = Fake({0, 1, 2}, 10)
    b = Fake({0, 1, 3}, 13)
    c = Fake({4, 5, 6}, 11)
    d = Fake({0, 4, 7}, 12)
    assert distance(a, b) == 1 and distance(a, c) == 3 and distance(a, d) == 2
    assert pool_scores([a, b, c, d], 0.6) == pytest.approx([1.4, 3.2, 1.6, 2.6])
    pop = Population([a, b, c], a)
    population_updating(pop, d, 0.6, random.Random(0))
    assert [m.nodes for m in pop.members] == [a.nodes, c.nodes, d.nodes]


def test_duplicate_offspring_ignored():
    a, b = Fake({0, 1}, 3), Fake({2, 3}, 4)
    pop = Population([a, b], a)
    population_updating(pop, Fake({1, 0}, 3), 0.6, random.Random(0))
    assert pop.members == [a, b]


def test_best_and_farthest_offspring_kept():
    a, b, c = Fake({0, 1}, 5), Fake({0, 2}, 6), Fake({1, 2}, 7)
    child = Fake({8, 9}, 1)
    pop = Population([a, b, c], a)
    population_updating(pop, child, 0.6, random.Random(0))
    assert child in pop and len(pop) == 3


def _sizing_setup(ps):
    g = gnp(40, 0.1, random.Random(4))
    rng = random.Random(0)
    build = partial(build_solution, g, 5, 20, rng)
    pop = population_building(ps, build, rng)
    return pop, build, rng


def test_sizing_expands():
    pop, build, rng = _sizing_setup(2)
    state = GenerationState(gens=50, idle_gens=101)
    assert population_sizing(pop, state, SizingParams(), build, rng) == "expand"
    assert pop.ps == 4 and len(pop) == 4 and pop.distinct()
    assert state.idle_gens == 0


def test_sizing_rebuilds_at_cap():
    pop, build, rng = _sizing_setup(20)
    best = pop.best_ever
    state = GenerationState(idle_gens=101)
    assert population_sizing(pop, state, SizingParams(), build, rng) == "rebuild"
    assert pop.ps == 2 and len(pop) == 2
    assert pop.members[0] is best
    assert pop.best_ever.objective <= best.objective


def test_sizing_threshold_is_strict():
    pop, build, rng = _sizing_setup(2)
    before = list(pop.members)
    state = GenerationState(idle_gens=100)
    assert population_sizing(pop, state, SizingParams(), build, rng) is None
    assert pop.members == before and state.idle_gens == 100


def test_solve_star():
    rec = vpms_solve(star(4), 1, RunConfig(seed=0, time_limit=1.0), instance="star")
    assert rec.f_best == 0 and rec.best_set == [0]


def test_solve_reports_external_labels():
    g = Graph.from_edges(3, [(0, 1), (1, 2)], labels=(10, 20, 30))
    rec = vpms_solve(g, 1, RunConfig(max_generations=3))
    assert rec.best_set == [20]


def test_fpms_starts_full_and_never_resizes():
    g = gnp(50, 0.08, random.Random(2))
    sizes = []
    cfg = RunConfig(mode="fpms", max_generations=30,
                    sizing=SizingParams(ps_max=6, max_idle_gens=1, max_idle_iters=30))
    vpms_solve(g, 6, cfg, on_generation=lambda rec, pop: sizes.append((rec.ps, len(pop), rec.event)))
    assert sizes and all(s == (6, 6, None) for s in sizes)


def test_solve_is_deterministic():
    g = gnp(60, 0.06, random.Random(3))
    cfg = RunConfig(seed=9, max_generations=15, sizing=SizingParams(max_idle_gens=2, max_idle_iters=40))
    ticks = iter(range(10**6))
    clock = lambda: next(ticks) * 1e-3
    a = vpms_solve(g, 8, cfg, clock=clock).to_json()
    ticks = iter(range(10**6))
    b = vpms_solve(g, 8, cfg, clock=clock).to_json()
    assert a == b


def test_target_stops_early():
    g = gnp(60, 0.06, random.Random(3))
    cfg = RunConfig(max_generations=500, target=10**9)
    rec = vpms_solve(g, 8, cfg)
    assert rec.total_gens == 0


def test_time_limit_respected():
    g = gnp(200, 0.02, random.Random(0))
    rec = vpms_solve(g, 20, RunConfig(time_limit=0.5))
    assert rec.elapsed < 2.0


def test_solve_rejects_bad_k():
    with pytest.raises(ValueError):
        vpms_solve(star(3), 4, RunConfig(max_generations=1))


@pytest.mark.parametrize("seed", range(4))
def test_solve_reaches_brute_force_optimum(seed):
    from oracles import brute_best_set

    g = gnp(18, 0.18, random.Random(seed))
    best = brute_best_set(g, 3)
    rec = vpms_solve(g, 3, RunConfig(seed=seed, max_generations=20, target=best,
                                     sizing=SizingParams(max_idle_iters=200)))
    assert rec.f_best == best
