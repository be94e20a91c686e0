"""The map Phi from net words of the free product into G, and the
end-to-end growth-tightness report."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import BlockNotInNet, GrowthTightError, MemoryBudgetExceeded, UnsupportedModel
from .free_product import FreeProductWord, GapBound, gap_bound, lambda_norm
from .growth import BallTable, GrowthEstimate, ball_count, growth_rate, series_ball_table
from .models import FreeGroup, GroupModel, quotient_model
from .nets import RhoNet, build_rho_net
from .orbit import (
    ConstantsBundle,
    OrbitContext,
    eta_minimal_representative,
    make_constants,
    sign,
    signed,
    twisted_product,
)
from .report import CheckReport
from .words import Word, free_reduce, inverse, reduced_words

HALF = Fraction(1, 2)
NET_ELEMENT_CAP = 20_000  # default net enumeration stays below this many elements


@dataclass
class EmbeddingConfig:
    quotient: GroupModel
    ctx: OrbitContext
    constants: ConstantsBundle
    net_members: frozenset[Word] | None = None
    _reps: dict[Word, Word] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.quotient.is_identity(self.ctx.xi):
            raise GrowthTightError("xi does not lie in the normal subgroup N")

    @property
    def scaled(self) -> bool:
        return self.constants.scaled or not self.constants.guaranteed

    def representative(self, gamma: Word) -> Word:
        r = self._reps.get(gamma)
        if r is None:
            r = eta_minimal_representative(self.quotient, gamma)
            self._reps[gamma] = r
        return r


def build_phi(cfg: EmbeddingConfig, w: FreeProductWord) -> Word:
    """Phi(g1*1*rest) = Phi(g1)_eps * (xi^kappa * Phi(rest)).

    eps is the sign of Phi(rest), except that eps = + when g1 is trivial.
    """
    if cfg.net_members is not None:
        for b in w.blocks:
            if b not in cfg.net_members:
                raise BlockNotInNet(f"block {b} is not a net member")
    ctx, kappa = cfg.ctx, cfg.constants.kappa
    xk = ctx.xi_power(kappa)
    beta = cfg.representative(w.blocks[-1])
    for gamma in reversed(w.blocks[:-1]):
        eps = 1 if not gamma else sign(ctx, beta)
        alpha = signed(ctx, cfg.representative(gamma), eps)
        beta = twisted_product(ctx, alpha, twisted_product(ctx, xk, beta))
    return beta


def net_words(members_by_norm: Sequence[tuple[Word, int]], lam, max_blocks: int,
              max_norm) -> Iterator[FreeProductWord]:
    """Reduced words over the given blocks with at most ``max_blocks`` blocks
    and lambda-norm <= ``max_norm``."""
    lam, max_norm = Fraction(lam), Fraction(max_norm)
    blocks = sorted(members_by_norm, key=lambda t: t[1])

    def rec(prefix: list[Word], budget: Fraction) -> Iterator[FreeProductWord]:
        for b, n in blocks:
            if n > budget:
                break
            yield FreeProductWord(tuple(prefix + [b]))
            # continuing makes b an interior block unless it is the first one
            if len(prefix) + 1 < max_blocks and (b or not prefix) and budget - n - lam >= 0:
                yield from rec(prefix + [b], budget - n - lam)

    yield from rec([], max_norm)


def check_phi_nonexpanding(cfg: EmbeddingConfig, words: Iterable[FreeProductWord],
                           lam=None) -> CheckReport:
    """||Phi(w)||_G <= ||w||_lam for every sampled word."""
    lam = cfg.constants.lam if lam is None else Fraction(lam)
    worst, n, bad = None, 0, 0
    for w in words:
        img = build_phi(cfg, w)
        slack = lambda_norm(w, lam, cfg.quotient) - len(img)
        worst = slack if worst is None else min(worst, slack)
        n += 1
        bad += slack < 0
    hyp = lam >= cfg.constants.lambda_threshold
    return CheckReport("phi-nonexpanding", bad == 0, hyp, worst, n, bad,
                       {"guaranteed": hyp and not cfg.scaled})


def check_phi_injective(cfg: EmbeddingConfig, words: Iterable[FreeProductWord]) -> CheckReport:
    """Images of distinct net words must be distinct.

    Each collision also goes through the collision guard: with
    alpha_i = Phi(g1_i)_eps_i, d(alpha_1, alpha_2) must not exceed
    (kappa + 4) L + 4 (Delta_star + Delta_minus / 2 + 8 delta).
    """
    ctx = cfg.ctx
    seen: dict[Word, FreeProductWord] = {}
    collisions: list[tuple[FreeProductWord, FreeProductWord]] = []
    guard_bad = 0
    n = 0
    bound = cfg.constants.rho_threshold
    for w in words:
        n += 1
        img = build_phi(cfg, w)
        other = seen.get(img)
        if other is None:
            seen[img] = w
            continue
        if other == w:
            continue
        collisions.append((other, w))
        if w.separators and other.separators:
            a = [_first_factor(cfg, x) for x in (other, w)]
            if len(free_reduce(inverse(a[0]) + a[1])) > bound:
                guard_bad += 1
    guaranteed = not cfg.scaled
    ok = (not collisions) if guaranteed else guard_bad == 0
    return CheckReport("phi-injective", ok, guaranteed, None, n, len(collisions),
                       {"collisions": len(collisions), "guard_violations": guard_bad,
                        "guaranteed": guaranteed,
                        "status": "guaranteed" if guaranteed else "not guaranteed"})


def _first_factor(cfg: EmbeddingConfig, w: FreeProductWord) -> Word:
    rest = FreeProductWord(w.blocks[1:])
    g1 = w.blocks[0]
    eps = 1 if not g1 else sign(cfg.ctx, build_phi(cfg, rest))
    return signed(cfg.ctx, cfg.representative(g1), eps)


# -- growth-tightness report ---------------------------------------------------


def find_xi(quotient: GroupModel, max_len: int = 12) -> Word:
    """Shortest (then shortlex-least) non-trivial word in the kernel of G -> quotient."""
    for n in range(1, max_len + 1):
        for w in reduced_words(quotient.rank, n):
            if quotient.is_identity(w):
                return w
    raise GrowthTightError(f"no non-trivial element of N of length <= {max_len}")


def ball_table(model: GroupModel, radius: int) -> tuple[BallTable, str]:
    """Exact ball table: closed-form series when available, BFS otherwise."""
    if model.growth_series(0) is not None:
        return series_ball_table(model, radius), "series"
    return ball_count(model, radius), "bfs"


def quotient_card(model: GroupModel, bfs_limit: int = 14):
    """card B(r) for real r, or None when it cannot be computed exactly."""
    cache: dict[int, BallTable] = {}

    def card(r) -> int | None:
        n = math.floor(r)
        if model.growth_series(0) is not None:
            if n not in cache:
                cache[n] = series_ball_table(model, n)
            return cache[n].counts[n]
        if n > bfs_limit:
            return None
        return ball_count(model, n).counts[n]

    return card


@dataclass
class TightnessReport:
    omega_G: GrowthEstimate
    omega_quotient: GrowthEstimate
    constants: ConstantsBundle
    lambda_tilde: Fraction | None
    gap_bound: float | None
    strict_gap_observed: bool
    phi_injective_on_sample: bool
    phi_nonexpanding_on_sample: bool
    xi: Word = ()
    gap: GapBound | None = None
    margin: float = 0.0
    measured_gap: float = 0.0
    sample_size: int = 0
    tables: dict = field(default_factory=dict)


def tightness_report(rank: int, relators: Sequence[Word], radius_g: int, radius_q: int,
                     xi: Word | None = None, kappa: int = 160, lam=None, rho=None,
                     Delta=HALF, scaled: bool = False, net_radius: int | None = None,
                     sample_blocks: int = 3, sample_norm=None,
                     sample_limit: int = 2000) -> TightnessReport:
    """Growth of G = F_rank and of G/N, constants, the gap bound and Phi checks.

    G must be free: the orbit machinery runs on its Cayley tree.
    """
    G = FreeGroup(rank)
    quotient = quotient_model(rank, [free_reduce(r) for r in relators])
    if quotient.kind == "free" and quotient.rank == rank and not relators:
        raise UnsupportedModel("N is trivial; growth tightness concerns infinite N")
    tg, how_g = ball_table(G, radius_g)
    tq, how_q = ball_table(quotient, radius_q)
    om_g, om_q = growth_rate(tg), growth_rate(tq)
    xi = find_xi(quotient) if xi is None else free_reduce(xi)
    ctx = OrbitContext.create(xi, rank)
    card = quotient_card(quotient)
    consts = make_constants(ctx, kappa, lam, rho, Delta, scaled=scaled)
    try:
        full = make_constants(ctx, kappa, lam, rho, Delta, quotient_card=card, scaled=scaled)
        if full.lambda_tilde is not None:
            consts = full
    except TypeError:  # card unavailable (None) at the required radius
        pass
    gb = gap_bound(om_q.omega, consts.lambda_tilde) if consts.lambda_tilde else None
    margin = om_g.residual + om_q.residual
    cfg = EmbeddingConfig(quotient, ctx, consts)
    if net_radius is None:
        nr = max(r for r in range(radius_q + 1) if tq.counts[r] <= NET_ELEMENT_CAP)
    else:
        nr = net_radius
    net = build_rho_net(quotient, consts.rho, nr, Delta)
    cfg.net_members = net.member_set
    bound = (2 * consts.lam + nr) if sample_norm is None else Fraction(sample_norm)
    words = list(itertools.islice(
        net_words([(m, net.norms[m]) for m in net.members], consts.lam, sample_blocks, bound),
        sample_limit))
    nonexp = check_phi_nonexpanding(cfg, words)
    inj = check_phi_injective(cfg, words)
    return TightnessReport(
        om_g, om_q, consts, consts.lambda_tilde, gb.value if gb else None,
        om_q.omega + margin < om_g.omega, inj.ok, nonexp.ok, xi, gb, margin,
        om_g.omega - om_q.omega, len(words),
        {"G": (tg.model_id, how_g, radius_g), "quotient": (tq.model_id, how_q, radius_q)})
