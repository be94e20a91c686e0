"""Ball enumeration and exponential growth-rate estimation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterator, Sequence

import numpy as np

from .errors import MemoryBudgetExceeded, WindowTooSmall
from .models import GroupModel
from .words import Word, shortlex_key

DEFAULT_BUDGET = 20_000_000


@dataclass(frozen=True)
class BallTable:
    model_id: str
    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts or self.counts[0] != 1:
            raise ValueError("a ball table starts with card B(0) = 1")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("ball counts must be nondecreasing")

    @property
    def radius_max(self) -> int:
        return len(self.counts) - 1

    def spheres(self) -> list[int]:
        c = self.counts
        return [c[0]] + [c[i] - c[i - 1] for i in range(1, len(c))]

    def card(self, radius) -> int:
        """card B(radius) for any real radius; radius beyond the table is an error."""
        r = math.floor(radius)
        if r < 0:
            return 0
        if r > self.radius_max:
            raise ValueError(f"radius {radius} exceeds table radius {self.radius_max}")
        return self.counts[r]

    @classmethod
    def from_spheres(cls, model_id: str, spheres: Sequence[int]) -> "BallTable":
        return cls(model_id, tuple(accumulate(spheres)))


@dataclass(frozen=True)
class GrowthEstimate:
    omega: float
    window: tuple[int, int]
    method: str
    residual: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)


def ball_count(model: GroupModel, radius: int, max_elements: int = DEFAULT_BUDGET) -> BallTable:
    """Exact card B(0..radius) by breadth-first search with normal-form dedup.

    Three spheres are held at a time.  With prefix-closed normal forms the
    last sphere is counted without being stored: every element of sphere
    ``r+1`` extends a unique element of sphere ``r`` by one letter.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    spheres = [1]
    prev: set[Word] = set()
    cur: set[Word] = {()}
    stored = 1
    for r in range(1, radius + 1):
        if r == radius and model.prefix_closed:
            n = 0
            for w in cur:
                for g in model.letters:
                    u = model.step(w, g)
                    # counted once: through its own last letter
                    if len(u) == r and u[-1] == g and u[:-1] == w:
                        n += 1
            spheres.append(n)
            break
        nxt: set[Word] = set()
        for w in cur:
            for g in model.letters:
                u = model.step(w, g)
                if u not in cur and u not in prev:
                    nxt.add(u)
        stored += len(nxt)
        if len(nxt) + len(cur) > max_elements:
            raise MemoryBudgetExceeded(r - 1, max_elements)
        spheres.append(len(nxt))
        prev, cur = cur, nxt
        if not nxt:
            spheres += [0] * (radius - r)
            break
    return BallTable.from_spheres(model.model_id, spheres)


def sphere_elements(model: GroupModel, radius: int) -> Iterator[list[Word]]:
    """Yield the spheres S(0), S(1), ..., S(radius), each sorted shortlex."""
    prev: set[Word] = set()
    cur: set[Word] = {()}
    yield [()]
    for _ in range(radius):
        nxt: set[Word] = set()
        for w in cur:
            for g in model.letters:
                u = model.step(w, g)
                if u not in cur and u not in prev:
                    nxt.add(u)
        prev, cur = cur, nxt
        yield sorted(nxt, key=shortlex_key)


def ball_elements(model: GroupModel, radius: int) -> list[Word]:
    """Elements of B(radius) as normal forms, ordered by norm then shortlex."""
    out: list[Word] = []
    for sphere in sphere_elements(model, radius):
        out.extend(sphere)
    return out


def series_ball_table(model: GroupModel, radius: int) -> BallTable:
    """Ball table from the model's closed-form growth series."""
    spheres = model.growth_series(radius)
    if spheres is None:
        raise ValueError(f"model {model.model_id} has no closed-form growth series")
    return BallTable.from_spheres(model.model_id, spheres)


def default_window(table: BallTable) -> tuple[int, int]:
    r = table.radius_max
    return (r - r // 3, r)


def growth_rate(table: BallTable, window: tuple[int, int] | None = None) -> GrowthEstimate:
    """Least-squares slope of log card B(R) over ``window`` (inclusive).

    The default window is the top third of the table; the slope of
    log card B(R) carries a polynomial bias of order (degree)/R, and the top
    third keeps that bias smaller than the top half does.
    """
    lo, hi = window if window is not None else default_window(table)
    if lo < 0 or hi > table.radius_max or lo > hi:
        raise ValueError(f"window {(lo, hi)} outside table of radius {table.radius_max}")
    if hi - lo + 1 < 3:
        raise WindowTooSmall(f"window {(lo, hi)} has fewer than 3 points")
    radii = np.arange(lo, hi + 1, dtype=float)
    logs = np.array([math.log(c) for c in table.counts[lo : hi + 1]])
    design = np.vstack([radii, np.ones_like(radii)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, logs, rcond=None)
    fit = design @ np.array([slope, intercept])
    residual = float(np.sqrt(np.mean((logs - fit) ** 2)))
    omega = max(0.0, float(slope))
    if abs(omega) < 1e-12:
        omega = 0.0
    return GrowthEstimate(omega, (lo, hi), "tail-slope", residual)
