"""Greedy rho-separated nets in a quotient and the net counting comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CoverageGapAtBoundary
from .free_product import free_product_ball_count
from .growth import BallTable, ball_elements
from .models import GroupModel
from .words import Word

HALF = Fraction(1, 2)


@dataclass
class RhoNet:
    model: GroupModel
    rho: Fraction
    radius: int
    members: list[Word]
    theta: Word | None
    Delta: Fraction = HALF
    norms: dict[Word, int] = field(default_factory=dict, repr=False)
    elements: list[Word] = field(default_factory=list, repr=False)
    element_norms: dict[Word, int] = field(default_factory=dict, repr=False)

    @property
    def member_set(self) -> frozenset[Word]:
        return frozenset(self.members)

    def table(self, radius: int | None = None) -> BallTable:
        """card of the net inside B(r), for r = 0..radius."""
        radius = self.radius if radius is None else radius
        if radius > self.radius:
            raise ValueError("net was only built to radius %d" % self.radius)
        spheres = [0] * (radius + 1)
        for m in self.members:
            n = self.norms[m]
            if n <= radius:
                spheres[n] += 1
        return BallTable.from_spheres(f"net[{self.model.model_id},rho={self.rho}]", spheres)

    @property
    def theta_bound_ok(self) -> bool:
        return self.theta is not None and self.norms[self.theta] <= 2 * (self.Delta + self.rho)


def build_rho_net(model: GroupModel, rho, radius: int, Delta=HALF) -> RhoNet:
    """Greedy net of B(radius) in (norm, shortlex) order starting from the identity."""
    rho = Fraction(rho)
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    elements = ball_elements(model, radius)
    norms = {w: len(w) if model.shortlex_normal_forms else model.geodesic_length(w)
             for w in elements}
    members: list[Word] = []
    if rho < 1:
        members = list(elements)
    else:
        # translating by B(rho) only pays off when that ball is already enumerated
        ball_rho = [w for w in elements if norms[w] <= rho] if rho <= radius else None
        mset: set[Word] = set()
        for x in elements:
            if ball_rho is None or len(members) <= len(ball_rho):
                nx = norms[x]
                near = any(abs(norms[m] - nx) <= rho and model.distance_nf(m, x) <= rho
                           for m in members)
            else:
                near = any(model.mul(x, b) in mset for b in ball_rho)
            if not near:
                members.append(x)
                mset.add(x)
    theta = members[1] if len(members) > 1 else None
    net = RhoNet(model, rho, radius, members, theta, Fraction(Delta),
                 {m: norms[m] for m in members}, elements, norms)
    return net


def check_net(net: RhoNet) -> dict:
    """Exhaustive separation and coverage check over B(net.radius)."""
    model, rho = net.model, net.rho
    elements = net.elements or ball_elements(model, net.radius)
    norms = net.element_norms or {w: model.geodesic_length(w) for w in elements}
    members = net.members
    mset = set(members)
    ball_rho = ([w for w in elements if norms[w] <= rho]
                if rho <= net.radius else None)
    if ball_rho is not None and len(ball_rho) < len(members):
        nearby = lambda x: [model.mul(x, b) for b in ball_rho if b]  # noqa: E731
        separated = not any(y in mset for m in members for y in nearby(m))
        uncovered = [x for x in elements if x not in mset and not any(y in mset for y in nearby(x))]
    else:
        norm = net.norms
        separated = all(model.distance_nf(a, b) > rho
                        for i, a in enumerate(members) for b in members[i + 1:])
        uncovered = [x for x in elements
                     if not any(abs(norm[m] - norms[x]) <= rho and model.distance_nf(m, x) <= rho
                                for m in members)]
    if uncovered:
        raise CoverageGapAtBoundary(f"{len(uncovered)} elements farther than rho from the net")
    return {
        "members": len(members),
        "separated": bool(separated),
        "covered": True,
        "identity_member": () in mset,
        "theta_bound_ok": net.theta_bound_ok,
    }


def packing_radius(Delta, rho, card_ball_rho: int) -> Fraction:
    """r_rho = 3 (Delta + rho) card B(rho)."""
    return 3 * (Fraction(Delta) + Fraction(rho)) * card_ball_rho


def big_packing_radius(Delta, rho, card_ball_3: int) -> Fraction:
    """R_rho = 15 (Delta + rho) card B(3 (Delta + rho))."""
    return 15 * (Fraction(Delta) + Fraction(rho)) * card_ball_3


def minimal_net_radius(net_table: BallTable, target: int) -> int:
    """Smallest r with card(net inside B(r)) >= target."""
    for r, c in enumerate(net_table.counts):
        if c >= target:
            return r
    raise ValueError("net table too short to reach the target cardinality")


@dataclass(frozen=True)
class RhoComparison:
    lhs: int
    rhs: int
    rhs_exact: bool
    holds: bool
    hypothesis_met: bool
    lam: Fraction
    lam_prime: Fraction
    sigma: Fraction
    r_sigma: Fraction
    mu: Fraction
    radius: Fraction


def verify_rho_comparison(blocks_table: BallTable, net: RhoNet, lam, lam_prime, radius,
                          sigma=None, r_sigma=None) -> RhoComparison:
    """Compare card B_{G*Z2, lam+lam'}(R) with the net-word ball of radius R+lam+lam'.

    The right side uses separator weight mu = (lam + lam' - sigma - r_sigma)/2
    and blocks from the net.  Blocks beyond the net's enumeration radius are
    left out, so a truncated right side is a lower bound and the inequality
    is still certified whenever it holds.
    """
    lam, lam_prime, radius = Fraction(lam), Fraction(lam_prime), Fraction(radius)
    card = blocks_table.card
    sigma = 3 * (net.Delta + net.rho) if sigma is None else Fraction(sigma)
    if r_sigma is None:
        r_sigma = packing_radius(net.Delta, sigma, card(sigma))
    r_sigma = Fraction(r_sigma)
    hypothesis_met = lam_prime >= r_sigma + sigma
    mu = (lam + lam_prime - sigma - r_sigma) / 2
    lhs = free_product_ball_count(blocks_table, lam + lam_prime, radius)
    big = radius + lam + lam_prime
    if mu <= 0:
        return RhoComparison(lhs, 0, False, False, hypothesis_met, lam, lam_prime,
                             sigma, r_sigma, mu, radius)
    reach = min(net.radius, math.floor(big))
    nt = net.table(reach)
    if reach < math.floor(big):
        nt = BallTable(nt.model_id, nt.counts + (nt.counts[-1],) * (math.floor(big) - reach))
    rhs = free_product_ball_count(nt, mu, big)
    return RhoComparison(lhs, rhs, reach >= math.floor(big), lhs <= rhs, hypothesis_met,
                         lam, lam_prime, sigma, r_sigma, mu, radius)
