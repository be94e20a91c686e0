"""Concrete groups with exact normal forms and word-metric norms.

Every model returns *geodesic* normal forms: ``len(normal_form(w))`` is the
word length of ``w`` in the model.  Normal forms are also prefix-closed,
which ball enumeration relies on to count the outermost sphere without
storing it.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

from .errors import CompletionExceededCap, UnsupportedModel
from .rewriting import RewritingSystem, complete_presentation
from .words import (
    Word,
    common_prefix_length,
    cyclic_reduce,
    format_word,
    free_reduce,
    inverse,
    letters_of_rank,
)


class GroupModel:
    kind = "abstract"
    prefix_closed = True
    # True when the normal form is the shortlex-least geodesic representative
    shortlex_normal_forms = True

    def __init__(self, rank: int):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        self.rank = rank
        self.letters = letters_of_rank(rank)

    def normal_form(self, w: Sequence[int]) -> Word:
        raise NotImplementedError

    def geodesic_length(self, w: Sequence[int]) -> int:
        return len(self.normal_form(w))

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.normal_form(u) == self.normal_form(v)

    def is_identity(self, w: Sequence[int]) -> bool:
        return not self.normal_form(w)

    def mul(self, a: Sequence[int], b: Sequence[int]) -> Word:
        return self.normal_form(tuple(a) + tuple(b))

    def inverse(self, w: Sequence[int]) -> Word:
        return self.normal_form(inverse(w))

    def distance(self, u: Sequence[int], v: Sequence[int]) -> int:
        return self.geodesic_length(inverse(u) + tuple(v))

    def distance_nf(self, u: Word, v: Word) -> int:
        """distance() for arguments already in normal form; models may shortcut it."""
        return self.distance(u, v)

    def step(self, w: Word, letter: int) -> Word:
        """Normal form of ``w * letter`` for ``w`` already in normal form."""
        return self.normal_form(w + (letter,))

    def growth_series(self, radius: int) -> list[int] | None:
        """Exact sphere sizes 0..radius from a closed form, if the model has one."""
        return None

    @property
    def model_id(self) -> str:
        return self.kind


class FreeGroup(GroupModel):
    kind = "free"

    def normal_form(self, w):
        return free_reduce(w)

    def distance_nf(self, u, v):
        p = common_prefix_length(u, v)
        return len(u) + len(v) - 2 * p

    def step(self, w, letter):
        if w and w[-1] == -letter:
            return w[:-1]
        return w + (letter,)

    def growth_series(self, radius):
        r = self.rank
        if r == 0:
            return [1] + [0] * radius
        return [1] + [2 * r * (2 * r - 1) ** (k - 1) for k in range(1, radius + 1)]

    @property
    def model_id(self):
        return f"free:{self.rank}"


class FreeAbelianGroup(GroupModel):
    """Z^rank with normal form a^x b^y ... (generators in order)."""

    kind = "free-abelian"

    def exponents(self, w: Sequence[int]) -> list[int]:
        w = tuple(w)
        return [w.count(i) - w.count(-i) for i in range(1, self.rank + 1)]

    def distance_nf(self, u, v):
        return sum(abs(a - b) for a, b in zip(self.exponents(u), self.exponents(v)))

    def from_exponents(self, e: Sequence[int]) -> Word:
        out: list[int] = []
        for i, k in enumerate(e):
            out += [i + 1 if k > 0 else -(i + 1)] * abs(k)
        return tuple(out)

    def normal_form(self, w):
        return self.from_exponents(self.exponents(w))

    def geodesic_length(self, w):
        return sum(abs(k) for k in self.exponents(w))

    def growth_series(self, radius):
        # ((1+z)/(1-z))^rank
        base = [1] + [2] * radius
        out = [1] + [0] * radius
        for _ in range(self.rank):
            out = series_mul(out, base, radius)
        return out

    @property
    def model_id(self):
        return f"abelian:{self.rank}"


class CyclicFreeProduct(GroupModel):
    """Free product of cyclic groups, one per generator.

    ``orders[i]`` is the order of generator ``i+1``; 0 means infinite cyclic
    and 1 kills the generator.  Z2*Z on letters a, b is ``orders=(2, 0)``.
    """

    kind = "free-product-with-torsion"

    def __init__(self, orders: Sequence[int]):
        super().__init__(len(orders))
        if any(n < 0 for n in orders):
            raise ValueError("orders must be nonnegative")
        self.orders = tuple(orders)
        if all(n == 0 for n in self.orders):
            self.kind = "free"

    def canonical_exponent(self, gen: int, e: int) -> int:
        n = self.orders[gen - 1]
        if n == 0:
            return e
        r = e % n
        # representative in (-n/2, n/2]: positive power wins a tie
        if 2 * r > n:
            r -= n
        return r

    def syllables(self, w: Sequence[int]) -> list[list[int]]:
        stack: list[list[int]] = []
        for x in w:
            g = abs(x)
            s = 1 if x > 0 else -1
            if stack and stack[-1][0] == g:
                e = self.canonical_exponent(g, stack[-1][1] + s)
                if e == 0:
                    stack.pop()
                else:
                    stack[-1][1] = e
            else:
                e = self.canonical_exponent(g, s)
                if e:
                    stack.append([g, e])
        return stack

    def normal_form(self, w):
        out: list[int] = []
        for g, e in self.syllables(w):
            out += [g if e > 0 else -g] * abs(e)
        return tuple(out)

    def step(self, w, letter):
        g = abs(letter)
        n = len(w)
        i = n
        while i > 0 and abs(w[i - 1]) == g:
            i -= 1
        run = w[i:]
        e = len(run) if (run and run[0] > 0) else -len(run)
        e = self.canonical_exponent(g, e + (1 if letter > 0 else -1))
        return w[:i] + (g if e > 0 else -g,) * abs(e)

    def distance_nf(self, u, v):
        p = common_prefix_length(u, v)
        a, b = u[p:], v[p:]
        if not a or not b or abs(a[0]) != abs(b[0]):
            return len(a) + len(b)
        # leading syllables of the same generator merge in a^-1 b
        g = abs(a[0])
        x = _run(a)
        y = _run(b)
        e = self.canonical_exponent(g, (y if b[0] > 0 else -y) - (x if a[0] > 0 else -x))
        return len(a) - x + len(b) - y + abs(e)

    def factor_series(self, n: int, radius: int) -> list[int]:
        if n == 0:
            return [1] + [2] * radius
        out = [0] * (radius + 1)
        for r in range(n):
            e = r if 2 * r <= n else r - n
            if abs(e) <= radius:
                out[abs(e)] += 1
        return out

    def growth_series(self, radius):
        # 1/F = sum_i 1/F_i - (k - 1) for a free product of k factors
        k = self.rank
        if k == 0:
            return [1] + [0] * radius
        acc = [0] * (radius + 1)
        for n in self.orders:
            inv = series_inverse(self.factor_series(n, radius), radius)
            acc = [x + y for x, y in zip(acc, inv)]
        acc[0] -= k - 1
        return series_inverse(acc, radius)

    @property
    def model_id(self):
        return "cyclic-product:" + ",".join(str(n) if n else "inf" for n in self.orders)


def _run(w: Word) -> int:
    """Length of the leading run of equal letters."""
    n = 1
    while n < len(w) and w[n] == w[0]:
        n += 1
    return n


class RewritingModel(GroupModel):
    kind = "rewriting-quotient"

    def __init__(self, system: RewritingSystem):
        super().__init__(system.rank)
        if not system.confluent:
            raise UnsupportedModel("rewriting system is not confluent")
        self.system = system

    def normal_form(self, w):
        return self.system.reduce(w)

    @property
    def model_id(self):
        rules = " ".join(f"{format_word(l)}>{format_word(r) or 'e'}" for l, r in self.system.rule_list())
        return f"rewriting:{rules}"


def series_mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def series_inverse(a: Sequence[int], n: int) -> list[int]:
    """Integer power series inverse of ``a`` (requires ``a[0] == 1``)."""
    if a[0] != 1:
        raise ValueError("series inverse needs constant term 1")
    nz = [(i, x) for i, x in enumerate(a[1 : n + 1], start=1) if x]
    out = [0] * (n + 1)
    out[0] = 1
    for k in range(1, n + 1):
        out[k] = -sum(x * out[k - i] for i, x in nz if i <= k)
    return out


# -- recognising built-in quotients of free groups ---------------------------


def _cyclic_variants(w: Word) -> set[Word]:
    out = set()
    for v in (w, inverse(w)):
        for i in range(len(v)):
            out.add(v[i:] + v[:i])
    return out


def recognize_builtin(rank: int, relators: Sequence[Sequence[int]]) -> GroupModel | None:
    """Match ``F_rank / <<relators>>`` against the built-in models, or return None."""
    rels = [cyclic_reduce(free_reduce(r))[0] for r in relators]
    rels = [r for r in rels if r]
    if not rels:
        return FreeGroup(rank)
    orders = [0] * rank
    powers_only = True
    for r in rels:
        if len({abs(x) for x in r}) != 1:
            powers_only = False
            break
        g = abs(r[0])
        if g > rank:
            return None
        orders[g - 1] = gcd(orders[g - 1], len(r))
    if powers_only:
        return CyclicFreeProduct(orders)
    commutators = set()
    for i in range(1, rank + 1):
        for j in range(i + 1, rank + 1):
            commutators.add(frozenset(_cyclic_variants((i, j, -i, -j))))
    found = {frozenset(_cyclic_variants(r)) for r in rels}
    if rank >= 2 and found == commutators:
        return FreeAbelianGroup(rank)
    return None


def quotient_model(rank: int, relators: Sequence[Sequence[int]], cap: int = 500) -> GroupModel:
    """Model of ``F_rank / <<relators>>`` with certified normal forms.

    Built-in models are preferred; otherwise a completed shortlex rewriting
    system is used.  Anything else is rejected.
    """
    model = recognize_builtin(rank, relators)
    if model is not None:
        return model
    try:
        system = complete_presentation(relators, cap, rank=rank)
    except CompletionExceededCap as exc:
        raise UnsupportedModel(f"word problem not certified: {exc}") from exc
    return RewritingModel(system)
