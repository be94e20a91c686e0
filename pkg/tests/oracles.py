"""Independent reference computations used by the tests.

Nothing here imports the package: each oracle recomputes its answer from
first principles (recursion, brute force, transfer matrices, scipy BFS).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


def reduced_word_spheres(rank: int, radius: int) -> list[int]:
    """Sphere sizes of F_rank by recursive enumeration of reduced words."""
    letters = [k for g in range(1, rank + 1) for k in (g, -g)]
    counts = [0] * (radius + 1)

    def rec(last: int, n: int) -> None:
        counts[n] += 1
        if n == radius:
            return
        for x in letters:
            if x != -last:
                rec(x, n + 1)

    rec(0, 0)
    return counts


def lattice_ball(dim: int, radius: int) -> list[int]:
    """card{v in Z^dim : |v|_1 <= R} for R = 0..radius, by direct scan of a box."""
    out = []
    for R in range(radius + 1):
        out.append(sum(1 for v in itertools.product(range(-R, R + 1), repeat=dim)
                       if sum(map(abs, v)) <= R))
    return out


def z2_star_z_spheres(radius: int) -> list[int]:
    """Sphere sizes of Z/2 * Z by a transfer matrix over the last letter.

    States: a (order two), b, B.  a may be followed by b or B; b by a or b;
    B by a or B.
    """
    M = [[0, 1, 1], [1, 1, 0], [1, 0, 1]]
    v = [1, 1, 1]
    out = [1]
    for _ in range(radius):
        out.append(sum(v))
        v = [sum(v[i] * M[i][j] for i in range(3)) for j in range(3)]
    return out


def cumulative(spheres):
    return list(itertools.accumulate(spheres))


def free_product_words_Z(lam: int, radius: int) -> int:
    """card of the lambda-ball of Z * Z2 by generating every reduced word.

    Words alternate blocks (integers) and separators; interior blocks are
    nonzero, end blocks may be zero.
    """
    count = 0

    def rec(norm: int, nblocks: int) -> None:
        nonlocal count
        # a word ending here with a final (possibly trivial) block
        for b in range(-radius, radius + 1):
            if norm + abs(b) <= radius:
                count += 1
                # continue with a separator; b becomes interior unless it is first
                if (b != 0 or nblocks == 0) and norm + abs(b) + lam <= radius:
                    rec(norm + abs(b) + lam, nblocks + 1)

    rec(0, 0)
    return count


def bfs_distances(n: int, edges) -> np.ndarray:
    rows = [u for u, v in edges] + [v for u, v in edges]
    cols = [v for u, v in edges] + [u for u, v in edges]
    A = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return shortest_path(A, unweighted=True).astype(int)


def tree_ball_graph(radius: int):
    """Words of the F_2 ball (as tuples) and the Cayley edges between them."""
    words = [()]
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x in (1, -1, 2, -2):
                if not w or w[-1] != -x:
                    nxt.append(w + (x,))
        words += nxt
        frontier = nxt
    index = {w: i for i, w in enumerate(words)}
    edges = [(index[w[:-1]], index[w]) for w in words if w]
    return words, index, edges


def brute_delta(D: np.ndarray) -> Fraction:
    """Max over all quadruples of (largest - middle pair sum) / 2."""
    n = len(D)
    best = 0
    for x, y, z, w in itertools.product(range(n), repeat=4):
        s = sorted([D[x][y] + D[z][w], D[x][z] + D[y][w], D[x][w] + D[y][z]])
        best = max(best, s[2] - s[1])
    return Fraction(int(best), 2)


def gap_formula(omega_bar: float, lam: float) -> float:
    return omega_bar + math.log1p(math.exp(-lam * omega_bar)) / (4 * lam)


def free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def tree_dist(u, v) -> int:
    """Tree distance between reduced words u, v: strip the common prefix."""
    k = 0
    while k < min(len(u), len(v)) and u[k] == v[k]:
        k += 1
    return len(u) + len(v) - 2 * k


def orbit_index(xi, beta, span: int = 60) -> int:
    """Voronoi index of beta: smallest exponent among nearest xi-orbit points,
    shifted to the cell numbering ..., -2, -1, 1, 2, ..."""
    best, arg = None, None
    for k in range(-span, span + 1):
        p = free_reduce(xi * k if k >= 0 else tuple(-x for x in reversed(xi)) * (-k))
        d = tree_dist(p, free_reduce(beta))
        if best is None or d < best:
            best, arg = d, k
    return arg + 1 if arg >= 0 else arg
