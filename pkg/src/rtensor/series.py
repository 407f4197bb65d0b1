"""Catalan numbers, quartic covariance coefficients and permutation checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import comb, factorial, prod, sqrt

import numpy as np

from . import _accel
from .graph_core import inverse


def catalan(k):
    if k < 0:
        raise ValueError("k >= 0")
    return comb(2 * k, k) // (k + 1)


def binary_trees(n):
    """All rooted binary trees with n nodes as nested (left, right) tuples."""
    if n == 0:
        return [None]
    out = []
    for left in range(n):
        for lt in binary_trees(left):
            for rt in binary_trees(n - 1 - left):
                out.append((lt, rt))
    return out


def quartic_melonic_graph(tree, D=3):
    """Leading-order 2-point graph of the quartic model for a binary tree.

    Each tree node becomes a pair of melonic nodes joined by color 1 (one
    quartic bubble); its two children hang off the color-0 slots of the
    two nodes.  Returns a (D+1)-colored MelonicTree.
    """
    from .melonic import MelonicTree

    C = D + 1

    def unit(t):
        if t is None:
            return None
        left, right = t
        q = [None] * C
        q[0] = unit(right)
        p = [None] * C
        p[0] = unit(left)
        p[1] = tuple(q)
        return tuple(p)

    return MelonicTree(C, unit(tree))


def quartic_cov_coeff(n):
    """|coefficient| of (-lambda)^n in the large-N covariance.

    Each binary tree with n nodes stands for 2^n n! contraction schemes
    (two ways to attach each bubble, n! orders of the vertices), and the
    1/n! of the exponential cancels the ordering.
    """
    trees = binary_trees(n)
    schemes = len(trees) * 2 ** n * factorial(n)
    return schemes // factorial(n)


def quartic_cov_closed(n):
    return 2 ** n * comb(2 * n, n) // (n + 1)


def quartic_cov_limit(lam):
    """(-1 + sqrt(1 + 8 lam)) / (4 lam), equal to 1 at lam = 0.

    Evaluated as 2 / (1 + sqrt(1 + 8 lam)), which avoids the cancellation
    of the textbook form at small lam.
    """
    if lam < 0:
        raise ValueError("lambda >= 0")
    return 2.0 / (1.0 + sqrt(1.0 + 8.0 * lam))


def quartic_cov_partial(lam, order):
    return sum((-2 * lam) ** n * catalan(n) for n in range(order + 1))


@dataclass
class CycleBoundReport:
    k: int
    max_lhs_minus_rhs: int
    saturating: int
    examples: list = field(default_factory=list)
    checked: int = 0

    @property
    def holds(self):
        return self.max_lhs_minus_rhs <= 0


def full_cycles(k):
    """All k-cycles on {0..k-1} (k = 1 gives the identity)."""
    out = []
    for rest in permutations(range(1, k)):
        order = (0,) + rest
        p = [0] * k
        for a, b in zip(order, order[1:] + order[:1]):
            p[a] = b
        out.append(tuple(p))
    return out


def cycle_bound_check(k):
    """c(xi) + c(sigma xi) + c(tau) + c(sigma tau^-1) <= 2 c(xi) + 2k.

    Exhaustive over sigma, tau in S_k and xi a k-cycle; products are
    (sigma xi)(q) = sigma(xi(q)).
    """
    if k > 5:
        raise ValueError("exhaustive check limited to k <= 5")
    perms = np.array(list(permutations(range(k))), dtype=np.int64)
    inv = np.array([inverse(p) for p in perms], dtype=np.int64)
    c_single = _accel.cycle_counts(perms)
    m = len(perms)
    st = perms[:, inv]  # st[s, t] = sigma_s o tau_t^-1
    c_st = _accel.cycle_counts(st.reshape(m * m, k)).reshape(m, m)
    worst = None
    sat = 0
    examples = []
    for xi in full_cycles(k):
        xi = np.array(xi)
        c_xi = int(_accel.cycle_counts(xi[None, :])[0])
        c_sx = _accel.cycle_counts(perms[:, xi])  # sigma o xi
        lhs = c_xi + c_sx[:, None] + c_single[None, :] + c_st
        diff = lhs - (2 * c_xi + 2 * k)
        top = int(diff.max())
        worst = top if worst is None else max(worst, top)
        hits = np.argwhere(diff == 0)
        sat += len(hits)
        for s, t in hits[:3]:
            if len(examples) < 5:
                examples.append({"xi": xi.tolist(), "sigma": perms[s].tolist(), "tau": perms[t].tolist()})
    return CycleBoundReport(k, worst, sat, examples, len(full_cycles(k)) * m * m)


def weingarten_coefficient(parts):
    """Leading coefficient prod_s (-1)^(|C|-1) (1/|C|) binom(2|C|-2, |C|-1)."""
    return prod((Fraction((-1) ** (c - 1) * comb(2 * c - 2, c - 1), c) for c in parts), start=Fraction(1))


def weingarten_leading(parts, N):
    """Leading large-N term of the Weingarten function of a cycle type."""
    if N <= 0:
        raise ValueError("N > 0")
    k = sum(parts)
    c = len(parts)
    return float(weingarten_coefficient(parts)) * float(N) ** (-(2 * k - c))
