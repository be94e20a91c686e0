"""Shortlex string rewriting and a budgeted Knuth-Bendix completion."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CompletionExceededCap
from .words import Word, free_reduce, letters_of_rank, shortlex_key


def shortlex_greater(u: Sequence[int], v: Sequence[int]) -> bool:
    return shortlex_key(u) > shortlex_key(v)


def _orient(u: Word, v: Word) -> tuple[Word, Word]:
    return (u, v) if shortlex_greater(u, v) else (v, u)


@dataclass
class RewritingSystem:
    """Rules ``lhs -> rhs`` with ``lhs`` shortlex-greater than ``rhs``."""

    rank: int
    rules: dict[Word, Word] = field(default_factory=dict)
    confluent: bool = False

    def __post_init__(self):
        for lhs, rhs in self.rules.items():
            if not shortlex_greater(lhs, rhs):
                raise ValueError(f"rule {lhs} -> {rhs} does not decrease in shortlex order")
        self._index()

    def _index(self):
        self._lengths = sorted({len(lhs) for lhs in self.rules}, reverse=True)

    def rule_list(self) -> list[tuple[Word, Word]]:
        return sorted(self.rules.items(), key=lambda r: shortlex_key(r[0]))

    def reduce(self, w: Iterable[int]) -> Word:
        """Rewrite to an irreducible word, scanning left to right."""
        rules = self.rules
        lengths = self._lengths
        out: list[int] = []
        todo = list(reversed(tuple(w)))
        while todo:
            out.append(todo.pop())
            n = len(out)
            for k in lengths:
                if k <= n:
                    tail = tuple(out[n - k :])
                    rhs = rules.get(tail)
                    if rhs is not None:
                        del out[n - k :]
                        todo.extend(reversed(rhs))
                        break
        return tuple(out)

    def is_irreducible(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        for k in self._lengths:
            for i in range(len(w) - k + 1):
                if w[i : i + k] in self.rules:
                    return False
        return True

    def critical_pairs(self) -> list[tuple[Word, Word]]:
        pairs = []
        items = list(self.rules.items())
        for l1, r1 in items:
            for l2, r2 in items:
                pairs.extend(_overlaps(l1, r1, l2, r2))
        return pairs

    def is_locally_confluent(self) -> bool:
        return all(self.reduce(u) == self.reduce(v) for u, v in self.critical_pairs())


def _overlaps(l1: Word, r1: Word, l2: Word, r2: Word) -> list[tuple[Word, Word]]:
    out = []
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] == l2[:k]:
            out.append((r1 + l2[k:], l1[:-k] + r2))
    # l2 strictly inside l1
    if len(l2) < len(l1):
        for i in range(len(l1) - len(l2) + 1):
            if l1[i : i + len(l2)] == l2:
                out.append((r1, l1[:i] + r2 + l1[i + len(l2) :]))
    return out


def complete_presentation(relators: Sequence[Sequence[int]], cap: int, rank: int | None = None) -> RewritingSystem:
    """Knuth-Bendix completion of ``<letters | relators>`` in shortlex order a<A<b<B<...

    Raises CompletionExceededCap after ``cap`` rule additions without
    reaching a confluent system.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    relators = [free_reduce(r) for r in relators]
    if rank is None:
        rank = max((abs(x) for r in relators for x in r), default=1)
    system = RewritingSystem(rank)
    pending: list[tuple[Word, Word]] = [((x, -x), ()) for x in letters_of_rank(rank)]
    pending += [(r, ()) for r in relators if r]
    added = 0
    while pending:
        u, v = pending.pop(0)
        u, v = system.reduce(u), system.reduce(v)
        if u == v:
            continue
        lhs, rhs = _orient(u, v)
        added += 1
        if added > cap:
            raise CompletionExceededCap(f"no confluent system within {cap} rule additions")
        # interreduce: rules whose lhs now reduces are turned back into equations
        for l, r in list(system.rules.items()):
            if _contains(l, lhs):
                del system.rules[l]
                pending.append((l, r))
        system.rules[lhs] = rhs
        system._index()
        for l, r in list(system.rules.items()):
            if l != lhs:
                system.rules[l] = system.reduce(r)
        new_pairs = _overlaps(lhs, rhs, lhs, rhs)
        for l, r in system.rules.items():
            if l != lhs:
                new_pairs += _overlaps(lhs, rhs, l, r) + _overlaps(l, r, lhs, rhs)
        pending.extend(new_pairs)
    system.confluent = system.is_locally_confluent()
    return system


def _contains(word: Word, sub: Word) -> bool:
    k = len(sub)
    return any(word[i : i + k] == sub for i in range(len(word) - k + 1))
