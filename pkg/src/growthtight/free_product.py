"""The free product of a quotient with Z/2 under the lambda-weighted norm.

An element is written ``g1 * 1 * g2 * 1 * ... * g_{m+1}`` where ``1`` is the
generator of Z/2 and the ``g_i`` are quotient elements.  In reduced form the
interior blocks are non-trivial while the two end blocks may be trivial.  The
norm is the sum of block norms plus ``m * lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from scipy.optimize import brentq

from .growth import BallTable, GrowthEstimate
from .models import GroupModel, series_inverse, series_mul
from .words import Word


@dataclass(frozen=True)
class FreeProductWord:
    blocks: tuple[Word, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("a free-product word has at least one block")
        if any(len(b) == 0 for b in self.blocks[1:-1]):
            raise ValueError("interior blocks of a reduced word must be non-trivial")

    @property
    def separators(self) -> int:
        return len(self.blocks) - 1


def reduce_blocks(model: GroupModel, blocks: Sequence[Word]) -> FreeProductWord:
    """Normalise blocks and merge across trivial interior blocks (1*e*1 = e)."""
    out: list[Word] = [model.normal_form(blocks[0])]
    for b in blocks[1:]:
        out.append(model.normal_form(b))
        while len(out) >= 3 and not out[-2]:
            right = out.pop()
            out.pop()
            out[-1] = model.mul(out[-1], right)
    return FreeProductWord(tuple(out))


def lambda_norm(w: FreeProductWord, lam, model: GroupModel | None = None) -> Fraction:
    """Sum of block norms plus ``lam`` per separator.

    Without a model the blocks are taken as geodesic normal forms.
    """
    if model is None:
        total = sum(len(b) for b in w.blocks)
    else:
        total = sum(model.geodesic_length(b) for b in w.blocks)
    return Fraction(total) + w.separators * Fraction(lam)


def _scaled(lam, radius) -> tuple[int, int, int]:
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    q = lam.denominator
    return q, int(lam * q), math.floor(Fraction(radius) * q)


def free_product_spheres(spheres: Sequence[int], lam, radius) -> tuple[int, list[int]]:
    """Counts of reduced words by norm, in units of ``1/q``.

    Returns ``(q, counts)`` with ``counts[k]`` the number of words of norm
    exactly ``k/q`` for ``k <= floor(q * radius)``.  With ``F`` the block
    series and ``c = z^lam (F - 1)`` the generating function is
    ``F + F^2 z^lam / (1 - c)``.
    """
    q, lam_q, n = _scaled(lam, radius)
    if len(spheres) - 1 < math.floor(Fraction(radius)):
        raise ValueError("block table is shorter than the requested radius")
    f = [0] * (n + 1)
    for r, s in enumerate(spheres):
        if r * q > n:
            break
        f[r * q] = s
    c = [0] * (n + 1)
    for k in range(1, n + 1 - lam_q):
        c[k + lam_q] = f[k]
    one_minus_c = [-x for x in c]
    one_minus_c[0] = 1
    g = series_inverse(one_minus_c, n)
    f2 = series_mul(f, f, n)
    shifted = [0] * (n + 1)
    for k in range(n + 1 - lam_q):
        shifted[k + lam_q] = f2[k]
    tail = series_mul(shifted, g, n)
    return q, [a + b for a, b in zip(f, tail)]


def free_product_ball_count(blocks_table: BallTable, lam, radius) -> int:
    """card of the ball of the given radius in the free product, exactly."""
    if Fraction(radius) < 0:
        return 0
    _, counts = free_product_spheres(blocks_table.spheres(), lam, radius)
    return sum(counts)


def free_product_table(blocks_table: BallTable, lam, radius: int) -> BallTable:
    """Ball table of the free product at integer radii 0..radius."""
    q, counts = free_product_spheres(blocks_table.spheres(), lam, radius)
    balls, acc = [], 0
    for k, x in enumerate(counts):
        acc += x
        if k % q == 0:
            balls.append(acc)
    return BallTable(f"{blocks_table.model_id}*Z2[lam={Fraction(lam)}]", tuple(balls))


def free_product_growth_rate(blocks_table: BallTable, lam) -> GrowthEstimate:
    """Growth rate from the smallest positive root of ``z^lam (F(z) - 1) = 1``.

    ``F`` is the block growth series truncated at the table radius.  Its
    coefficients are nonnegative, so longer tables can only move the root
    towards zero and the estimate never decreases with truncation.
    """
    lam_f = float(Fraction(lam))
    spheres = blocks_table.spheres()

    def g(z: float) -> float:
        acc = 0.0
        for s in reversed(spheres[1:]):
            acc = (acc + s) * z
        return z**lam_f * acc - 1.0

    g1 = g(1.0)
    if not math.isfinite(g1):
        raise ValueError("block table too large to evaluate in floating point")
    if g1 <= 0:
        return GrowthEstimate(0.0, (0, blocks_table.radius_max), "series-root", 0.0,
                              {"root": 1.0})
    root = brentq(g, 1e-300, 1.0, xtol=1e-15, rtol=1e-14, maxiter=500)
    # size of the last retained term at the root: a crude truncation indicator
    tail = spheres[-1] * root ** (blocks_table.radius_max + lam_f)
    return GrowthEstimate(-math.log(root), (0, blocks_table.radius_max), "series-root",
                          float(tail), {"root": root})


@dataclass(frozen=True)
class GapBound:
    """``omega_bar + log(1 + exp(-lam*omega_bar)) / (4 lam)`` with its excess.

    ``value`` is the float bound.  The excess over ``omega_bar`` can fall far
    below float resolution, so it is also given as ``log_excess`` and, when
    even that overflows, as ``loglog`` = log(-log_excess).
    """

    omega_bar: float
    lam: Fraction
    value: float
    log_excess: float | None
    loglog: float | None


def gap_lower_bound(omega_bar: float, lam) -> float:
    return gap_bound(omega_bar, lam).value


def gap_bound(omega_bar: float, lam) -> GapBound:
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if omega_bar < 0:
        raise ValueError("growth rates are nonnegative")
    log_lam = math.log(lam.numerator) - math.log(lam.denominator)
    if omega_bar == 0:
        log_excess = math.log(math.log(2.0)) - math.log(4.0) - log_lam
        return GapBound(0.0, lam, math.exp(log_excess), log_excess, math.log(-log_excess) if log_excess < 0 else None)
    log_x = log_lam + math.log(omega_bar)  # log(lam * omega_bar)
    if log_x < 700:
        x = math.exp(log_x)
        excess_num = math.log1p(math.exp(-x))
        if excess_num > 0:
            log_excess = math.log(excess_num) - math.log(4.0) - log_lam
        else:
            # log1p(e^-x) ~ e^-x once e^-x underflows
            log_excess = -x - math.log(4.0) - log_lam
        value = omega_bar + math.exp(log_excess)
        loglog = math.log(-log_excess) if log_excess < 0 else None
        return GapBound(omega_bar, lam, value, log_excess, loglog)
    # lam * omega_bar itself overflows: only the double logarithm survives.
    # -log_excess = x + log(4 lam) = x (1 + log(4 lam)/x)
    loglog = log_x + math.log1p(math.exp(math.log(math.log(4.0) + log_lam) - log_x))
    log_excess = -math.exp(loglog) if loglog < 709 else None
    return GapBound(omega_bar, lam, omega_bar, log_excess, loglog)
