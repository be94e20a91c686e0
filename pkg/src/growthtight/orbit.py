"""Orbit geometry of a hyperbolic element of a free group acting on its tree.

The origin O is the identity vertex, so a group element and the image of O
under it are the same reduced word, and |O beta(O)| is word length.  Orbit
points are indexed by nonzero integers: x_i = xi^(i-1) for i > 0 and
x_i = xi^i for i < 0.  Internally an index i is handled through its
exponent ``ord(i)`` (i - 1 or i), so that x_i = xi^ord(i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator

import numpy as np

from .errors import KappaTooSmall, NotHyperbolic, SearchExhausted
from .models import GroupModel
from .report import CheckReport
from .words import (
    Word,
    cyclic_reduce,
    free_reduce,
    inverse,
    letters_of_rank,
    power,
    reduced_words,
)

HALF = Fraction(1, 2)


def index_of(k: int) -> int:
    """Cell index of the orbit point xi^k."""
    return k + 1 if k >= 0 else k


def ord_of(i: int) -> int:
    """Exponent of the orbit point x_i."""
    if i == 0:
        raise ValueError("cell indices are nonzero")
    return i - 1 if i > 0 else i


def _lcp_periodic(w: Word, period: Word) -> int:
    n, L = 0, len(period)
    for x in w:
        if x != period[n % L]:
            break
        n += 1
    return n


@dataclass(frozen=True)
class OrbitContext:
    rank: int
    xi: Word
    core: Word
    conjugator: Word
    delta: Fraction = Fraction(0)

    @classmethod
    def create(cls, xi, rank: int = 2) -> "OrbitContext":
        xi = free_reduce(xi)
        if not xi:
            raise NotHyperbolic("the identity is not hyperbolic")
        core, conj = cyclic_reduce(xi)
        return cls(rank, xi, core, conj)

    @property
    def L(self) -> int:
        """Translation length: length of the cyclic core."""
        return len(self.core)

    @property
    def epsilon(self) -> int:
        """|O xi(O)| - L for the origin at the identity."""
        return len(self.xi) - self.L

    def xi_power(self, k: int) -> Word:
        return power(self.xi, k)

    def orbit_point(self, i: int) -> Word:
        return self.xi_power(ord_of(i))

    def cell_distances(self, beta: Word, ks) -> dict[int, int]:
        return {k: len(free_reduce(inverse(self.xi_power(k)) + beta)) for k in ks}

    def _search_range(self, beta: Word) -> range:
        m = 2 * len(beta) // self.L + 1
        return range(-m, m + 1)

    def nearest_exponents(self, beta: Word) -> list[int]:
        """All k minimising |beta(O) xi^k(O)|, ascending."""
        d = self.cell_distances(beta, self._search_range(beta))
        best = min(d.values())
        return sorted(k for k, v in d.items() if v == best)

    def nearest_exponent(self, beta: Word) -> int:
        """Smallest k minimising the distance to xi^k (the Voronoi tie rule)."""
        if self.conjugator:
            return self.nearest_exponents(beta)[0]
        u, L = self.core, self.L
        t = _lcp_periodic(beta, u)
        pos = t if t else -_lcp_periodic(beta, inverse(u))
        k, rem = divmod(pos, L)
        return k + 1 if 2 * rem > L else k

    def cells(self, beta: Word) -> frozenset[int]:
        """Indices of every cell containing beta(O)."""
        return frozenset(index_of(k) for k in self.nearest_exponents(beta))


def voronoi_index(ctx: OrbitContext, beta) -> int:
    """j(beta): smallest index (in exponent order) of a cell containing beta(O)."""
    return index_of(ctx.nearest_exponent(free_reduce(beta)))


def voronoi_index_bruteforce(ctx: OrbitContext, beta) -> int:
    beta = free_reduce(beta)
    return index_of(ctx.nearest_exponents(beta)[0])


def sign(ctx: OrbitContext, beta) -> int:
    return 1 if voronoi_index(ctx, beta) > 0 else -1


def displacement(xi, rank: int = 2) -> int:
    return OrbitContext.create(xi, rank).L


@dataclass(frozen=True)
class StableNorm:
    estimate: Fraction  # ||xi^k_max|| / k_max
    upper: Fraction  # min over k <= k_max, an upper bound for the limit
    lower: Fraction  # L - 16 delta
    ok: bool


def stable_norm(ctx: OrbitContext, k_max: int) -> StableNorm:
    """Bracket the limit of ||xi^k|| / k (it exists by subadditivity)."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    ratios = [Fraction(len(ctx.xi_power(k)), k) for k in range(1, k_max + 1)]
    est = ratios[-1]
    lower = ctx.L - 16 * ctx.delta
    ok = lower <= est <= ctx.L + ctx.epsilon
    return StableNorm(est, min(ratios), lower, ok)


# -- constants ------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantsBundle:
    delta: Fraction
    epsilon: Fraction
    L: int
    Delta: Fraction
    kappa: int
    Delta_minus: Fraction
    Delta_star: Fraction
    lam: Fraction
    rho: Fraction
    sigma: Fraction | None = None
    r_sigma: Fraction | None = None
    R_rho: Fraction | None = None
    lambda_tilde: Fraction | None = None
    scaled: bool = False

    @property
    def stable_norm_lower(self) -> Fraction:
        return self.L - 16 * self.delta

    @property
    def lambda_threshold(self) -> Fraction:
        return self.kappa * self.L + 2 * self.Delta_star + self.Delta_minus

    @property
    def rho_threshold(self) -> Fraction:
        return ((self.kappa + 4) * self.L
                + 4 * (self.Delta_star + self.Delta_minus / 2 + 8 * self.delta))

    @property
    def kappa_threshold(self) -> Fraction:
        eta = self.Delta_minus
        return ((5 * self.Delta_star + Fraction(5, 2) * self.Delta_minus + 40 * self.delta + eta)
                / self.stable_norm_lower)

    def hypotheses(self) -> dict[str, bool]:
        return {
            "L_ge_300_delta": self.L >= 300 * self.delta,
            "kappa": self.kappa >= 4 and self.kappa >= self.kappa_threshold,
            "lambda": self.lam >= self.lambda_threshold,
            "rho": self.rho >= self.rho_threshold,
        }

    @property
    def guaranteed(self) -> bool:
        return all(self.hypotheses().values())


def make_constants(ctx: OrbitContext, kappa: int = 160, lam=None, rho=None, Delta=HALF,
                   quotient_card: Callable[[Fraction], int] | None = None,
                   scaled: bool = False) -> ConstantsBundle:
    """Constants of the construction; defaults lambda = 210 L, rho = 270 L.

    ``quotient_card(r)`` = card of the quotient ball of radius r; when given,
    sigma, r_sigma, R_rho and lambda_tilde are filled in.
    """
    L, d, e = ctx.L, ctx.delta, Fraction(ctx.epsilon)
    lam = Fraction(210 * L if lam is None else lam)
    rho = Fraction(270 * L if rho is None else rho)
    Delta = Fraction(Delta)
    sigma = r_sigma = R_rho = lam_t = None
    if quotient_card is not None:
        sigma = 3 * (Delta + rho)
        r_sigma = 3 * (Delta + sigma) * quotient_card(sigma)
        R_rho = 15 * (Delta + rho) * quotient_card(3 * (Delta + rho))
        lam_t = 2 * lam + R_rho
    return ConstantsBundle(d, e, L, Delta, kappa, 8 * L + 464 * d + 8 * e,
                           12 * L + 758 * d + 12 * e, lam, rho, sigma, r_sigma, R_rho, lam_t,
                           scaled)


# -- symmetric elements and twisted products ------------------------------------


def symmetric_element(ctx: OrbitContext, beta) -> Word:
    """beta_- = xi^(-2j-1) beta for j > 0 and xi^(-2j+1) beta for j < 0."""
    beta = free_reduce(beta)
    j = voronoi_index(ctx, beta)
    k = -2 * j - 1 if j > 0 else -2 * j + 1
    return free_reduce(ctx.xi_power(k) + beta)


def signed(ctx: OrbitContext, beta, eps: int) -> Word:
    """beta_+ = beta, beta_- = the symmetric element."""
    return free_reduce(beta) if eps > 0 else symmetric_element(ctx, beta)


def check_symmetric(ctx: OrbitContext, consts: ConstantsBundle, beta) -> CheckReport:
    """Cell of beta_-, opposite sign, and | ||beta_-|| - ||beta|| | <= Delta_-."""
    beta = free_reduce(beta)
    j = voronoi_index(ctx, beta)
    bm = symmetric_element(ctx, beta)
    target = -j - 2 if j > 0 else -j + 2
    in_cell = target in ctx.cells(bm)
    flipped = (voronoi_index(ctx, bm) > 0) != (j > 0)
    defect = abs(len(bm) - len(beta))
    ok = in_cell and flipped and defect <= consts.Delta_minus
    return CheckReport("symmetric", ok, True, consts.Delta_minus - defect, 1, int(not ok),
                       {"j": j, "target_cell": target, "in_cell": in_cell, "sign_flip": flipped})


def check_symmetric_norm(ctx: OrbitContext, consts: ConstantsBundle, beta) -> CheckReport:
    beta = free_reduce(beta)
    defect = abs(len(symmetric_element(ctx, beta)) - len(beta))
    return CheckReport("symmetric-norm", defect <= consts.Delta_minus, True,
                       consts.Delta_minus - defect, 1, int(defect > consts.Delta_minus))


def _strictly_between(k: int, a: int, b: int) -> bool:
    return min(a, b) < k < max(a, b)


def separates(ctx: OrbitContext, cells, i: int, j: int) -> bool:
    """Does one of the cells D_c (c in ``cells``) separate cells i and j?"""
    oi, oj = ord_of(i), ord_of(j)
    return any(_strictly_between(ord_of(c), oi, oj) for c in cells)


@dataclass(frozen=True)
class TwistedProduct:
    word: Word
    eps: int  # +1 if beta was used as is, -1 if its symmetric element was used
    i: int  # j(alpha^-1)
    j: int  # j(beta_eps)


def twisted(ctx: OrbitContext, alpha, beta) -> TwistedProduct:
    alpha, beta = free_reduce(alpha), free_reduce(beta)
    i = voronoi_index(ctx, inverse(alpha))
    j = voronoi_index(ctx, beta)
    if separates(ctx, (1, -1), i, j):
        return TwistedProduct(free_reduce(alpha + beta), 1, i, j)
    bm = symmetric_element(ctx, beta)
    return TwistedProduct(free_reduce(alpha + bm), -1, i, voronoi_index(ctx, bm))


def twisted_product(ctx: OrbitContext, alpha, beta) -> Word:
    """alpha * beta if D_1 or D_-1 separates alpha^-1(O) and beta(O), else alpha * beta_-."""
    return twisted(ctx, alpha, beta).word


def check_twisted(ctx: OrbitContext, consts: ConstantsBundle, alpha, beta) -> CheckReport:
    """Separation by D_{+-1} or D_{+-2} after the choice, and near-additivity of the norm."""
    alpha, beta = free_reduce(alpha), free_reduce(beta)
    tp = twisted(ctx, alpha, beta)
    sep = separates(ctx, (1, -1, 2, -2), tp.i, tp.j)
    defect = abs(len(tp.word) - len(alpha) - len(beta))
    ok = sep and defect <= consts.Delta_star
    return CheckReport("twisted", ok, True, consts.Delta_star - defect, 1, int(not ok),
                       {"separated": sep, "eps": tp.eps})


# -- kappa insertion -----------------------------------------------------------


@dataclass(frozen=True)
class KappaInsertion:
    word: Word  # xi^kappa * beta (twisted)
    beta_sign: int
    plus: Word  # (xi^kappa * beta)_+
    minus: Word  # (xi^kappa * beta)_-
    expected_plus: Word
    expected_minus: Word

    @property
    def ok(self) -> bool:
        return self.plus == self.expected_plus and self.minus == self.expected_minus


def kappa_insert(ctx: OrbitContext, beta, kappa: int) -> KappaInsertion:
    """xi^kappa (twisted) beta together with the decomposition predicted for it.

    For beta positive: (.)_+ = xi^k beta, (.)_- = xi^-k beta_-.
    For beta negative: (.)_+ = xi^k beta_-, (.)_- = xi^(-k-4) beta.
    """
    if kappa < 4:
        raise KappaTooSmall(f"kappa = {kappa} < 4")
    beta = free_reduce(beta)
    s = sign(ctx, beta)
    word = twisted_product(ctx, ctx.xi_power(kappa), beta)
    bm = symmetric_element(ctx, beta)
    if s > 0:
        exp_plus = free_reduce(ctx.xi_power(kappa) + beta)
        exp_minus = free_reduce(ctx.xi_power(-kappa) + bm)
    else:
        exp_plus = free_reduce(ctx.xi_power(kappa) + bm)
        exp_minus = free_reduce(ctx.xi_power(-kappa - 4) + beta)
    return KappaInsertion(word, s, word, symmetric_element(ctx, word), exp_plus, exp_minus)


def decompose(ctx: OrbitContext, alpha, beta, kappa: int) -> tuple[int, int]:
    """(kappa_*, eps) with alpha * (xi^kappa * beta) = alpha xi^kappa_* beta_eps."""
    ins = kappa_insert(ctx, beta, kappa)
    tp = twisted(ctx, alpha, ins.word)
    alpha = free_reduce(alpha)
    for k_star, eps in ((kappa, 1), (kappa, -1), (-kappa, 1), (-kappa, -1),
                        (-kappa - 4, 1), (-kappa - 4, -1)):
        cand = free_reduce(alpha + ctx.xi_power(k_star) + signed(ctx, beta, eps))
        if cand == tp.word:
            return k_star, eps
    raise AssertionError("twisted product does not decompose as predicted")


def check_kappa_insert(ctx: OrbitContext, beta, kappa: int) -> CheckReport:
    ins = kappa_insert(ctx, beta, kappa)
    pos = sign(ctx, ins.word) > 0
    neg = sign(ctx, ins.minus) < 0
    ok = ins.ok and pos and neg
    return CheckReport("kappa-insert", ok, True, None, 1, int(not ok),
                       {"beta_sign": ins.beta_sign, "positive": pos, "minus_negative": neg})


# -- separation lemma ------------------------------------------------------------


def check_separation_lemma(ctx: OrbitContext, consts: ConstantsBundle, x, y) -> CheckReport:
    """|xy| >= |Ox| + |Oy| - 4L - 294 delta - 4 eps when D_{+-1} or D_{+-2} separates x, y."""
    x, y = free_reduce(x), free_reduce(y)
    i, j = voronoi_index(ctx, x), voronoi_index(ctx, y)
    if not separates(ctx, (1, -1, 2, -2), i, j):
        return CheckReport("separation", True, False, None, 0, 0, {"status": "hypotheses unmet"})
    slack = (len(free_reduce(inverse(x) + y)) - len(x) - len(y)
             + 4 * consts.L + 294 * consts.delta + 4 * consts.epsilon)
    return CheckReport("separation", slack >= 0, True, slack, 1, int(slack < 0))


# -- sweeps ----------------------------------------------------------------------


def random_reduced_word(rng: np.random.Generator, rank: int, max_len: int) -> Word:
    n = int(rng.integers(0, max_len + 1))
    letters = letters_of_rank(rank)
    out: list[int] = []
    for _ in range(n):
        choices = [g for g in letters if not out or g != -out[-1]]
        out.append(choices[int(rng.integers(0, len(choices)))])
    return tuple(out)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Per-sample generator, so results do not depend on how samples are split."""
    return np.random.default_rng([seed, index])


def _merge(name: str, reports: list[CheckReport], extra: dict | None = None) -> CheckReport:
    met = [r for r in reports if r.hypotheses_met]
    slacks = [r.worst_slack for r in met if r.worst_slack is not None]
    bad = sum(r.violations for r in met)
    return CheckReport(name, bad == 0, bool(met), min(slacks) if slacks else None,
                       len(met), bad, extra or {})


def sweep_symmetric(ctx, consts, samples: int, max_len: int, seed: int) -> CheckReport:
    reports = []
    for s in range(samples):
        beta = random_reduced_word(sample_rng(seed, s), ctx.rank, max_len)
        reports.append(check_symmetric(ctx, consts, beta))
    return _merge("symmetric", reports, {"seed": seed, "samples": samples})


def sweep_twisted(ctx, consts, samples: int, max_len: int, seed: int) -> CheckReport:
    reports = []
    for s in range(samples):
        rng = sample_rng(seed, s)
        a = random_reduced_word(rng, ctx.rank, max_len)
        b = random_reduced_word(rng, ctx.rank, max_len)
        reports.append(check_twisted(ctx, consts, a, b))
    return _merge("twisted", reports, {"seed": seed, "samples": samples})


def sweep_separation(ctx, consts, samples: int, max_len: int, seed: int) -> CheckReport:
    reports = []
    for s in range(samples):
        rng = sample_rng(seed, s)
        x = random_reduced_word(rng, ctx.rank, max_len)
        y = random_reduced_word(rng, ctx.rank, max_len)
        reports.append(check_separation_lemma(ctx, consts, x, y))
    return _merge("separation", reports, {"seed": seed, "samples": samples})


def all_reduced_words(rank: int, max_len: int) -> Iterator[Word]:
    for n in range(max_len + 1):
        yield from reduced_words(rank, n)


def check_cells(ctx: OrbitContext, max_norm: int, exhaustive_norm: int) -> CheckReport:
    """Cell partition, disjointness of non-adjacent cells, and equivariance.

    Every vertex of norm <= ``exhaustive_norm`` is checked directly, and each
    one's cell set is compared with that of its projection to the axis.
    For cyclically reduced xi the cell set depends only on that projection
    (distances to the orbit differ from distances along the axis by a
    common constant), so checking the axis vertices up to ``max_norm``
    covers every vertex of norm <= ``max_norm``.
    """
    bad = 0
    checked = 0
    notes: dict = {}

    def one(v: Word) -> bool:
        cs = ctx.cells(v)
        ords = sorted(ord_of(c) for c in cs)
        contiguous = ords[-1] - ords[0] == len(ords) - 1
        nonadjacent_ok = ords[-1] - ords[0] <= 1
        shifted = ctx.cells(free_reduce(ctx.xi + v))
        equiv = sorted(ord_of(c) for c in shifted) == [o + 1 for o in ords]
        return bool(cs) and contiguous and nonadjacent_ok and equiv

    for v in all_reduced_words(ctx.rank, exhaustive_norm):
        checked += 1
        if not one(v):
            bad += 1
        if not ctx.conjugator:
            t = _lcp_periodic(v, ctx.core)
            proj = (power(ctx.core, t // ctx.L + 1)[:t] if t else
                    power(inverse(ctx.core), _lcp_periodic(v, inverse(ctx.core)) // ctx.L + 1)
                    [: _lcp_periodic(v, inverse(ctx.core))])
            if ctx.cells(v) != ctx.cells(proj):
                bad += 1
    axis = 0
    if not ctx.conjugator:
        for pos in range(-max_norm, max_norm + 1):
            u = ctx.core if pos >= 0 else inverse(ctx.core)
            v = power(u, abs(pos) // ctx.L + 1)[: abs(pos)]
            axis += 1
            if not one(v):
                bad += 1
    notes["axis_vertices"] = axis
    notes["exhaustive_norm"] = exhaustive_norm
    notes["max_norm"] = max_norm if not ctx.conjugator else exhaustive_norm
    return CheckReport("cells", bad == 0, True, None, checked + axis, bad, notes)


def check_symmetric_injective(ctx: OrbitContext, max_len: int) -> CheckReport:
    seen: dict[Word, Word] = {}
    bad = n = 0
    for b in all_reduced_words(ctx.rank, max_len):
        n += 1
        img = symmetric_element(ctx, b)
        if img in seen and seen[img] != b:
            bad += 1
        seen[img] = b
    return CheckReport("symmetric-injective", bad == 0, True, None, n, bad)


def check_sign_flip(ctx: OrbitContext, max_len: int) -> CheckReport:
    bad = n = 0
    for b in all_reduced_words(ctx.rank, max_len):
        n += 1
        if sign(ctx, symmetric_element(ctx, b)) == sign(ctx, b):
            bad += 1
    return CheckReport("sign-flip", bad == 0, True, None, n, bad)


def check_kappa_exhaustive(ctx: OrbitContext, max_len: int, kappas=range(4, 9),
                           alphas: int = 0) -> CheckReport:
    """The kappa-insertion decomposition for every beta of length <= max_len and every kappa.

    With ``alphas`` > 0, the decomposition alpha*(xi^k*beta) = alpha xi^k* beta_eps
    is also confirmed for every alpha of length <= ``alphas``.
    """
    bad = n = 0
    alpha_list = list(all_reduced_words(ctx.rank, alphas)) if alphas else []
    for kappa in kappas:
        for b in all_reduced_words(ctx.rank, max_len):
            n += 1
            if not check_kappa_insert(ctx, b, kappa).ok:
                bad += 1
            for a in alpha_list:
                try:
                    decompose(ctx, a, b, kappa)
                except AssertionError:
                    bad += 1
    return CheckReport("kappa-insert", bad == 0, True, None, n, bad)


# -- minimal representatives -------------------------------------------------------


def eta_minimal_representative(quotient: GroupModel, gamma, search_radius: int | None = None) -> Word:
    """Shortlex-least word of minimal length mapping to gamma in the quotient."""
    target = quotient.normal_form(gamma)
    n = quotient.geodesic_length(target)
    if quotient.shortlex_normal_forms:
        return target
    radius = n if search_radius is None else search_radius
    for length in range(n, radius + 1):
        for w in reduced_words(quotient.rank, length):
            if quotient.normal_form(w) == target:
                return w
    raise SearchExhausted(f"no preimage of length <= {radius}")
