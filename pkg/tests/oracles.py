"""Independent reference computations shared by the unit and acceptance tests."""
import itertools
import math
from fractions import Fraction

import numpy as np


def pair_index(n):
    """Column-order pair list: (0,1), (0,2), (1,2), (0,3), ..."""
    return [(i, j) for j in range(n) for i in range(j)]


def brute_class_ids(n):
    """For every labelled graph code on n vertices, the least code over all n! relabellings.

    Bit t (most significant first) of a code is the t-th pair of ``pair_index``.
    Returns an int64 array indexed by labelled code.
    """
    pairs = pair_index(n)
    L = len(pairs)
    where = {p: t for t, p in enumerate(pairs)}
    codes = np.arange(1 << L, dtype=np.int64)
    bits = [(codes >> (L - 1 - t)) & 1 for t in range(L)]
    best = codes.copy()
    for perm in itertools.permutations(range(n)):
        img = np.zeros_like(codes)
        for t, (i, j) in enumerate(pairs):
            a, b = sorted((perm[i], perm[j]))
            img |= bits[t] << (L - 1 - where[(a, b)])
        np.minimum(best, img, out=best)
    return best


def code_of(G):
    pairs = pair_index(G.n)
    code = 0
    for i, j in pairs:
        code = (code << 1) | G.has_edge(i, j)
    return code


def burnside_count(n):
    """Number of unlabelled graphs on n vertices by Burnside's lemma."""
    pairs = pair_index(n)
    total = 0
    for perm in itertools.permutations(range(n)):
        seen, cycles = set(), 0
        for p in pairs:
            if p in seen:
                continue
            cycles += 1
            q = p
            while q not in seen:
                seen.add(q)
                q = tuple(sorted((perm[q[0]], perm[q[1]])))
        total += 2**cycles
    return Fraction(total, math.factorial(n))
