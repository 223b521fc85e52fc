import random
from types import SimpleNamespace

import pytest

from oracles import gnp, star
from vpms.dlas import DlasStep, FitnessArray, dlas
from vpms.solution import Solution


def scripted(values):
    stream = iter(values)

    def neighbor(current, rng):
        return SimpleNamespace(objective=next(stream))

    return neighbor


def run_script(initial, stream, hl, max_idle):
    steps = []
    out = dlas(SimpleNamespace(objective=initial), max_idle, hl, random.Random(0),
               neighbor=scripted(stream), trace=steps.append)
    return out, steps


def test_reject_accept_reject():
    out, steps = run_script(10, [12, 9, 11, 11], hl=2, max_idle=2)
    assert out.best_solution.objective == 9
    assert (out.iterations, out.accepted_moves) == (4, 1)
    assert steps == [
        DlasStep(0, 12, 10, 10, 2, False, False, 1),
        DlasStep(1, 9, 9, 10, 1, True, False, 0),
        DlasStep(2, 11, 9, 10, 1, False, False, 1),
        DlasStep(3, 11, 9, 10, 1, False, False, 2),
    ]


def test_trace_with_rescan():
    out, steps = run_script(10, [9, 8, 9, 9], hl=2, max_idle=2)
    assert out.best_solution.objective == 8
    assert steps == [
        DlasStep(0, 9, 9, 10, 1, True, False, 0),
        DlasStep(1, 8, 8, 9, 1, True, True, 0),
        DlasStep(2, 9, 8, 9, 1, False, False, 1),
        DlasStep(3, 9, 8, 9, 1, False, False, 2),
    ]


def test_replacement_rescan():
    fa = FitnessArray(10, 2)
    fa.values[1] = 7
    fa.nbr_max = 1
    assert fa.replace(0, 8, 10) is True
    assert fa.values == [8, 7]
    assert (fa.f_max, fa.nbr_max) == (8, 1)


def test_replacement_raises_slot():
    fa = FitnessArray(5, 3)
    fa.values = [5, 3, 5]
    fa.nbr_max = 2
    assert fa.replace(1, 5, 5) is False
    assert (fa.values, fa.f_max, fa.nbr_max) == ([5, 5, 5], 5, 3)


def test_replacement_needs_improvement_over_previous():
    fa = FitnessArray(10, 2)
    fa.replace(0, 8, 8)
    assert fa.values == [10, 10]


def test_sideways_move_is_accepted():
    out, steps = run_script(10, [10], hl=1, max_idle=1)
    assert steps[0].accepted
    assert out.accepted_moves == 1
    # equal to the current cost but not below the history maximum
    fa = FitnessArray(7, 1)
    assert fa.accepts(10, 10)
    assert not fa.accepts(11, 10)


def test_uncounted_rejections_need_iteration_cap():
    out = dlas(SimpleNamespace(objective=5), 3, 4, random.Random(0),
               neighbor=lambda s, r: SimpleNamespace(objective=50),
               count_rejected=False, max_iters=25)
    assert out.iterations == 25
    assert out.accepted_moves == 0


def test_star_optimum_terminates():
    g = star(4)
    out = dlas(Solution(g, {0}), 7, 50, random.Random(0))
    assert out.best_solution.objective == 0
    assert out.iterations >= 7


def test_invalid_arguments():
    with pytest.raises(ValueError):
        dlas(SimpleNamespace(objective=1), 0)
    with pytest.raises(ValueError):
        FitnessArray(1, 0)


@pytest.mark.parametrize("seed", range(6))
def test_instrumented_run_invariants(seed):
    rng = random.Random(seed)
    g = gnp(60, 0.06, rng)
    initial = Solution(g, rng.sample(range(60), 8))
    hl = rng.choice([1, 3, 10, 50])
    steps = []
    out = dlas(initial, 150, hl, rng, trace=steps.append)

    # naive replay of the history array, independent of FitnessArray
    values = [initial.objective] * hl
    f_max = initial.objective
    f_cur = initial.objective
    best = f_cur
    for st in steps:
        if st.accepted:
            assert st.candidate == f_cur or st.candidate < f_max
        else:
            assert st.candidate != f_cur and st.candidate >= f_max
        prev, f_cur = f_cur, st.current
        v = st.iteration % hl
        if f_cur > values[v]:
            values[v] = f_cur
        elif f_cur < values[v] and f_cur < prev:
            values[v] = f_cur
        f_max = max(values)
        assert (st.f_max, st.nbr_max) == (f_max, values.count(f_max))
        best = min(best, f_cur)
    assert out.best_solution.objective == best <= initial.objective
    assert out.best_solution.is_coherent()
    assert steps[-1].idle_iters == 150
