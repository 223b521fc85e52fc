"""Diversified late acceptance search."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable

from .solution import Solution, random_swap

DEFAULT_HISTORY_LENGTH = 50


class FitnessArray:
    """Circular cost history with a cached maximum and its multiplicity."""

    __slots__ = ("values", "f_max", "nbr_max")

    def __init__(self, initial: int, length: int):
        if length < 1:
            raise ValueError("history length must be >= 1")
        self.values = [initial] * length
        self.f_max = initial
        self.nbr_max = length

    def __len__(self):
        return len(self.values)

    def accepts(self, candidate: int, current: int) -> bool:
        return candidate == current or candidate < self.f_max

    def replace(self, v: int, current: int, previous: int) -> bool:
        """Apply the replacement rule at slot ``v``; return True on a full rescan."""
        values = self.values
        fv = values[v]
        if current > fv:
            values[v] = current
            if current > self.f_max:
                # cannot happen under DLAS acceptance; kept so the cache stays exact
                self.f_max, self.nbr_max = current, 1
            elif current == self.f_max:
                self.nbr_max += 1
        elif current < fv and current < previous:
            if fv == self.f_max:
                self.nbr_max -= 1
            values[v] = current
            if self.nbr_max == 0:
                self.rescan()
                return True
        return False

    def rescan(self) -> None:
        self.f_max = max(self.values)
        self.nbr_max = self.values.count(self.f_max)


@dataclass
class DlasOutcome:
    best_solution: Any
    iterations: int
    accepted_moves: int


@dataclass(frozen=True)
class DlasStep:
    """One iteration as seen by the trace hook."""

    iteration: int
    candidate: int
    current: int
    f_max: int
    nbr_max: int
    accepted: bool
    rescanned: bool
    idle_iters: int


def dlas(
    initial: Solution,
    max_idle_iters: int,
    hl: int = DEFAULT_HISTORY_LENGTH,
    rng: random.Random | None = None,
    *,
    neighbor: Callable[[Any, random.Random], Any] | None = None,
    count_rejected: bool = True,
    max_iters: int | None = None,
    should_stop: Callable[[], bool] | None = None,
    trace: Callable[[DlasStep], None] | None = None,
) -> DlasOutcome:
    """Improve ``initial`` until ``max_idle_iters`` iterations pass without a new best.

    ``neighbor(current, rng)`` produces the candidate; by default it is the
    component-based swap. Anything exposing an integer ``objective`` works,
    which is how tests script candidate streams.

    ``count_rejected=False`` only counts accepted non-improving moves as
    idle, exactly as the textbook pseudo-code does; that reading can spin
    forever once nothing is acceptable, so pair it with ``max_iters``.
    """
    if max_idle_iters < 1:
        raise ValueError("max_idle_iters must be >= 1")
    rng = rng if rng is not None else random.Random()
    neighbor = neighbor or random_swap

    current = best = initial
    f_cur = f_best = initial.objective
    history = FitnessArray(f_cur, hl)
    iters = idle = accepted_moves = 0
    while idle < max_idle_iters:
        if max_iters is not None and iters >= max_iters:
            break
        if should_stop is not None and should_stop():
            break
        f_prev = f_cur
        cand = neighbor(current, rng)
        f_cand = cand.objective
        v = iters % hl
        accepted = history.accepts(f_cand, f_cur)
        if accepted:
            accepted_moves += 1
            current, f_cur = cand, f_cand
            if f_cur < f_best:
                best, f_best = current, f_cur
                idle = 0
            else:
                idle += 1
        elif count_rejected:
            idle += 1
        rescanned = history.replace(v, f_cur, f_prev)
        if trace is not None:
            trace(DlasStep(iters, f_cand, f_cur, history.f_max, history.nbr_max, accepted, rescanned, idle))
        iters += 1
    return DlasOutcome(best, iters, accepted_moves)
