"""Words over a finite symmetric alphabet.

A letter is a nonzero int: ``k`` is the k-th generator (1-based) and ``-k``
its inverse.  A word is a plain tuple of letters.  In text, generators are
lowercase ``a, b, c, ...`` and inverses the matching uppercase letters, so
``"abAB"`` is the commutator of ``a`` and ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple[int, ...]

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True, order=True)
class Generator:
    index: int
    inverse_flag: bool = False

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("generator index must be nonnegative")

    @property
    def letter(self) -> int:
        return -(self.index + 1) if self.inverse_flag else self.index + 1

    @classmethod
    def from_letter(cls, letter: int) -> "Generator":
        if letter == 0:
            raise ValueError("0 is not a letter")
        return cls(abs(letter) - 1, letter < 0)

    def inverse(self) -> "Generator":
        return Generator(self.index, not self.inverse_flag)

    def __str__(self) -> str:
        return format_word((self.letter,))


def letters_of_rank(rank: int) -> Word:
    """All letters of a rank-``rank`` alphabet in shortlex order a < A < b < B < ..."""
    out = []
    for k in range(1, rank + 1):
        out += [k, -k]
    return tuple(out)


def letter_key(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (letter < 0)


def shortlex_key(w: Sequence[int]) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w))


def parse_word(text: str) -> Word:
    """Parse ``"abAB"`` style text.  ``""``, ``"e"`` and ``"1"`` are the identity.

    Whitespace is ignored.  ``"a^3"`` and ``"b^-2"`` exponents are accepted.
    """
    text = "".join(text.split())
    if text in ("", "e", "1"):
        return ()
    out: list[int] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if not ch.isalpha():
            raise ValueError(f"unexpected character {ch!r} in word {text!r}")
        k = ALPHABET.index(ch.lower()) + 1
        letter = k if ch.islower() else -k
        i += 1
        power = 1
        if i < len(text) and text[i] == "^":
            j = i + 1
            if j < len(text) and text[j] in "+-":
                j += 1
            while j < len(text) and text[j].isdigit():
                j += 1
            power = int(text[i + 1 : j])
            i = j
        if power < 0:
            letter, power = -letter, -power
        out += [letter] * power
    return tuple(out)


def format_word(w: Iterable[int]) -> str:
    s = "".join(ALPHABET[abs(x) - 1] if x > 0 else ALPHABET[abs(x) - 1].upper() for x in w)
    return s


def free_reduce(w: Iterable[int]) -> Word:
    stack: list[int] = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def power(w: Sequence[int], k: int) -> Word:
    """Freely reduced ``w**k`` (``k`` may be negative)."""
    base = free_reduce(w) if k >= 0 else inverse(free_reduce(w))
    k = abs(k)
    if not base or k == 0:
        return ()
    core, conj = cyclic_reduce(base)
    return conj + core * k + inverse(conj)


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Split a freely reduced ``w`` as ``conjugator * core * conjugator**-1``.

    ``core`` is cyclically reduced.  Returns ``(core, conjugator)``.
    """
    w = tuple(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i : j + 1], w[:i]


def common_prefix_length(u: Sequence[int], v: Sequence[int]) -> int:
    """Length of the longest common prefix (binary search on slices)."""
    u, v = tuple(u), tuple(v)
    lo, hi = 0, min(len(u), len(v))
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if u[:mid] == v[:mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def is_freely_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def reduced_words(rank: int, length: int):
    """Yield every freely reduced word of exactly ``length`` letters, shortlex order."""
    letters = letters_of_rank(rank)

    def rec(prefix: list[int]):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])
