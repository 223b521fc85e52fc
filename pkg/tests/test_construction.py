import math
import random

import pytest

from oracles import connected_pairs, gnp, path, star
from vpms.construction import (
    CrossoverConfig,
    IdenticalParentsError,
    RepairLog,
    build_solution,
    double_backbone_crossover,
    random_solution,
)
from vpms.solution import Solution


def test_build_finds_star_center():
    sol = build_solution(star(4), 1, 50, random.Random(0))
    assert sol.nodes == {0}
    assert sol.objective == 0


def test_build_with_one_survivor():
    g = gnp(12, 0.4, random.Random(1))
    sol = build_solution(g, 11, 10, random.Random(0))
    assert sol.k == 11 and sol.objective == 0


def test_random_solution_bounds():
    with pytest.raises(ValueError):
        random_solution(path(4), 4, random.Random(0))
    with pytest.raises(ValueError):
        random_solution(path(4), 0, random.Random(0))


def test_build_respects_fixed_threshold():
    g = gnp(40, 0.1, random.Random(2))
    sol = build_solution(g, 6, 50, random.Random(3), threshold=2)
    assert sol.k == 6 and sol.is_coherent()


def test_full_inclusion_removes_one_node():
    g = gnp(20, 0.2, random.Random(0))
    s2 = Solution(g, {0, 1, 2, 3})
    s1 = Solution(g, {0, 1, 2, 4})
    log = RepairLog([], [])
    child = double_backbone_crossover(s1, s2, CrossoverConfig(1.0, random.Random(0)), log)
    assert child.k == 4
    assert len(log.removed) == 1 and not log.added
    assert child.nodes <= s1.nodes | s2.nodes


def test_zero_inclusion_adds_from_outside():
    rng = random.Random(1)
    g = gnp(25, 0.15, rng)
    s1 = Solution(g, {0, 1, 2, 3, 4})
    s2 = Solution(g, {0, 1, 5, 6, 7})
    log = RepairLog([], [])
    child = double_backbone_crossover(s1, s2, CrossoverConfig(0.0, rng), log)
    assert child.k == 5
    assert {0, 1} <= child.nodes
    assert len(log.added) == 3
    assert not set(log.added) & (s1.nodes | s2.nodes)
    assert child.is_coherent()


def test_identical_parents_rejected():
    g = path(6)
    with pytest.raises(IdenticalParentsError):
        double_backbone_crossover(Solution(g, {1, 2}), Solution(g, {2, 1}), CrossoverConfig())
    with pytest.raises(ValueError):
        double_backbone_crossover(Solution(g, {1}), Solution(g, {2, 3}), CrossoverConfig())
    with pytest.raises(ValueError):
        CrossoverConfig(1.5)


def test_crossover_properties_small_graphs():
    rng = random.Random(5)
    for _ in range(100):
        g = gnp(25, 0.15, rng)
        s1 = Solution(g, rng.sample(range(25), 5))
        s2 = Solution(g, rng.sample(range(25), 5))
        if s1 == s2:
            continue
        log = RepairLog([], [])
        child = double_backbone_crossover(s1, s2, CrossoverConfig(0.5, rng), log)
        assert child.k == 5 and child.nodes <= set(range(25))
        assert child.objective == connected_pairs(g, child.nodes)
        if not log.removed:
            assert s1.nodes & s2.nodes <= child.nodes


def test_repair_steps_are_greedy_optimal():
    rng = random.Random(7)
    for trial in range(40):
        g = gnp(18, 0.2, rng)
        s1 = Solution(g, rng.sample(range(18), 5))
        s2 = Solution(g, rng.sample(range(18), 5))
        if s1 == s2:
            continue
        union = s1.nodes | s2.nodes
        p = 1.0 if trial % 2 else 0.0
        log = RepairLog([], [])
        child = double_backbone_crossover(s1, s2, CrossoverConfig(p, rng), log)
        current = set(union) if p == 1.0 else set(s1.nodes & s2.nodes)
        for u in log.removed:
            best = min(connected_pairs(g, current - {x}) for x in current)
            assert connected_pairs(g, current - {u}) == best
            current.remove(u)
        outside = [x for x in range(18) if x not in union]
        for u in log.added:
            best = min(connected_pairs(g, current | {x}) for x in outside if x not in current)
            assert connected_pairs(g, current | {u}) == best
            current.add(u)
        assert current == set(child.nodes)


def test_step_b_inclusion_rate():
    rng = random.Random(11)
    g = gnp(60, 0.05, rng)
    s1 = Solution(g, range(0, 20))
    s2 = Solution(g, range(10, 30))
    d, k, shared = 20, 20, 10
    p = 0.5
    counts = []
    for _ in range(2000):
        log = RepairLog([], [])
        double_backbone_crossover(s1, s2, CrossoverConfig(p, rng), log)
        counts.append(k - shared + len(log.removed) - len(log.added))
    mean = sum(counts) / len(counts)
    sigma = math.sqrt(d * p * (1 - p) / len(counts))
    assert abs(mean - p * d) <= 3 * sigma


def test_near_complete_k_falls_back_to_parent_nodes():
    g = gnp(8, 0.5, random.Random(0))
    s1 = Solution(g, range(0, 6))
    s2 = Solution(g, range(2, 8))
    child = double_backbone_crossover(s1, s2, CrossoverConfig(0.0, random.Random(0)))
    assert child.k == 6
