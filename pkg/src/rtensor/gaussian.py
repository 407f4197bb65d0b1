"""Wick coverings and exact Gaussian moments of trace invariants.

For a connected D-colored invariant B with 2k vertices and covariance
N^-(D-1), the Gaussian expectation is a sum over the k! color-0 matchings
sigma of N^(-k(D-1) + sum_i F^{0i}), where F^{0i} counts the faces of colors
(0, i) in the covering graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import _accel
from .graph_core import ColoredGraph, GuardError, cycles, inverse, is_connected, iso_key
from .jackets import degree, scaled_degree
from .laurent import Laurent
from .melonic import covering, doubled, insert_melon

COVER_GUARD = 7


def _guard(B, guard):
    if B.k > guard:
        raise GuardError(f"covering guard: k={B.k} > {guard}")


def coverings(B, guard=COVER_GUARD):
    """Yield (sigma, G) for every white->black color-0 matching sigma."""
    _guard(B, guard)
    for sigma in permutations(range(B.k)):
        yield sigma, covering(B, sigma)


def zero_faces(G):
    """sum_i F^{0i}(G) over the non-zero colors."""
    return sum(G.face_count(0, i) for i in range(1, G.colors))


def all_zero_faces(B, guard=COVER_GUARD):
    """Face sums of every covering, in permutation order, via the kernel."""
    _guard(B, guard)
    sigmas = np.array(list(permutations(range(B.k))), dtype=np.int64)
    inv = np.array([inverse(r) for r in B.wiring], dtype=np.int64)
    return sigmas, _accel.face_sums(sigmas, inv)


@dataclass
class MomentReport:
    poly: Laurent
    omega: Fraction
    R: int
    covering_count: int
    per_covering: list = field(default_factory=list)  # (sigma, sum F0i, omega(G))
    sigma2: Fraction = Fraction(1)
    N: object = None
    value: Fraction = None

    def to_dict(self):
        d = {"poly": str(self.poly), "terms": self.poly.to_dict(),
             "omega": str(self.omega), "R": self.R,
             "covering_count": self.covering_count, "sigma2": str(self.sigma2)}
        if self.value is not None:
            d["N"] = self.N
            d["value"] = str(self.value)
            d["value_float"] = float(self.value)
        return d


def exact_moment(B, N=None, sigma2=1, check_degree=True, guard=COVER_GUARD):
    """Exact Gaussian expectation of Tr_B as a Laurent polynomial in N.

    With check_degree every term is recomputed from the degrees of G and B
    and the two exponents must agree.
    """
    _guard(B, guard)
    D, k = B.colors, B.k
    if check_degree and not is_connected(B):
        raise ValueError("degree check needs a connected invariant")
    sigma2 = Fraction(sigma2)
    sigmas, sums = all_zero_faces(B, guard)
    wB = scaled_degree(degree(B).omega, D) if check_degree else None
    terms = {}
    rows = []
    for sigma, F in zip(sigmas, sums):
        F = int(F)
        e = -k * (D - 1) + F
        terms[e] = terms.get(e, 0) + 1
        wG = None
        if check_degree:
            G = covering(B, tuple(int(s) for s in sigma))
            wG = degree(G).omega
            e_deg = 1 - scaled_degree(wG, D + 1) + wB
            if e_deg != e:
                raise AssertionError(f"face form {e} != degree form {e_deg} for sigma={tuple(sigma)}")
        rows.append((tuple(int(s) for s in sigma), F, wG))
    poly = Laurent(terms) * (sigma2 ** k)
    lead = max(terms)
    rep = MomentReport(poly, Fraction(1 - lead), terms[lead], len(rows), rows, sigma2)
    if N is not None:
        rep.N = N
        rep.value = poly(N)
    return rep


def omega_r(B, guard=COVER_GUARD):
    """Convergence order and number of minimal coverings, from the degrees."""
    _guard(B, guard)
    D = B.colors
    wB = degree(B).omega
    degs = [degree(G).omega for _, G in coverings(B, guard)]
    wmin = min(degs)
    omega = scaled_degree(wmin, D + 1) - scaled_degree(wB, D)
    if omega.denominator != 1:
        raise AssertionError(f"non-integral convergence order {omega}")
    return omega, degs.count(wmin)


def wick_oracle(B, N):
    """<Tr_B> by explicit index sums, independent of face counting.

    Each white vertex w carries T with indices x_w; the Wick pairing pi sends
    it to a conjugate tensor at black pi(w), whose indices are then x_w.  The
    invariant imposes x_w^i == (indices at black wiring_i[w])^i.
    """
    k, D = B.k, B.colors
    n_idx = D * k
    if N ** n_idx > 5_000_000:
        raise GuardError("oracle index space too large")
    grid = np.indices((N,) * n_idx, dtype=np.int8).reshape(k, D, -1)
    total = 0
    for pi in permutations(range(k)):
        owner = inverse(pi)  # black b receives the indices of white owner[b]
        ok = np.ones(grid.shape[-1], dtype=bool)
        for i in range(D):
            for w in range(k):
                ok &= grid[w, i] == grid[owner[B.wiring[i][w]], i]
        total += int(ok.sum())
    return Fraction(total, N ** ((D - 1) * k))


@dataclass
class SharedFaceReport:
    max_shared: int
    bound: int
    minimal_coverings: int

    @property
    def holds(self):
        return self.max_shared <= self.bound


def check_shared_faces(B, guard=COVER_GUARD):
    """Largest number of (0i) faces shared by two 0-edges of a minimal covering."""
    D, k = B.colors, B.k
    sigmas, sums = all_zero_faces(B, guard)
    best = int(sums.max())
    worst = 0
    count = 0
    for sigma, F in zip(sigmas, sums):
        if F != best:
            continue
        count += 1
        G = covering(B, tuple(int(s) for s in sigma))
        labels = []
        for i in range(1, D + 1):
            p = G.face_permutation(0, i)
            lab = [-1] * k
            for n, cyc in enumerate(cycles(p)):
                for w in cyc:
                    lab[w] = n
            labels.append(lab)
        for a in range(k):
            for b in range(a + 1, k):
                worst = max(worst, sum(lab[a] == lab[b] for lab in labels))
    return SharedFaceReport(worst, D // 2, count)


@dataclass
class StabilityReport:
    omega: Fraction
    inserted: list  # (color, white, omega of B')

    @property
    def stable(self):
        return all(o == self.omega for _, _, o in self.inserted) and self.omega >= 0


def order_stability_under_melon_insertion(B, guard=COVER_GUARD):
    """Convergence order after inserting a melon on each edge of B."""
    _guard(B, guard - 1)
    omega, _ = omega_r(B, guard)
    seen = {}
    out = []
    for c in range(B.colors):
        for w in range(B.k):
            Bp = insert_melon(B, c, w)
            key = iso_key(Bp, guard=max(6, Bp.k))
            if key not in seen:
                seen[key] = omega_r(Bp, guard)[0]
            out.append((c, w, seen[key]))
    return StabilityReport(omega, out)


# -- doubled graphs ---------------------------------------------------------

def max_zero_faces(B, guard=COVER_GUARD):
    return int(all_zero_faces(B, guard)[1].max())


def disjoint_union(graphs):
    D = graphs[0].colors
    rows = [[] for _ in range(D)]
    off = 0
    for g in graphs:
        if g.colors != D:
            raise ValueError("blocks must share the color count")
        for c in range(D):
            rows[c].extend(off + x for x in g.wiring[c])
        off += g.k
    return ColoredGraph(D, off, tuple(tuple(r) for r in rows))


def mirror(B):
    """B with white and black swapped: mirror white j stands for B's black j."""
    return ColoredGraph(B.colors, B.k, tuple(inverse(r) for r in B.wiring))


def doubled_graph(B, blocks, to_mirror=None, from_mirror=None):
    """B glued to the union of blocks by color-0 edges (identity by default)."""
    M = disjoint_union(blocks)
    if M.k != B.k:
        raise ValueError("blocks must have as many vertices as B")
    ident = tuple(range(B.k))
    return doubled(B, M, to_mirror or ident, from_mirror or ident)


@dataclass
class ScalingProbe:
    B: ColoredGraph
    blocks: list
    lam: int
    zero_faces: int
    max_faces_B: int
    max_faces_blocks: list
    threshold: Fraction

    def to_dict(self):
        return {"k": self.B.k, "D": self.B.colors, "blocks": [b.k for b in self.blocks],
                "Lambda": self.lam, "zero_faces": self.zero_faces,
                "max_faces_B": self.max_faces_B, "max_faces_blocks": self.max_faces_blocks,
                "threshold": str(self.threshold)}


def scaling_probe(B, blocks, to_mirror=None, from_mirror=None, guard=COVER_GUARD):
    """Lambda(G) = sum F0i(G) + D*#blocks - maxF(B) - sum_a maxF(B_a)."""
    D, k = B.colors, B.k
    G = doubled_graph(B, blocks, to_mirror, from_mirror)
    F = zero_faces(G)
    mB = max_zero_faces(B, guard)
    mblocks = [max_zero_faces(b, guard) for b in blocks]
    lam = F + D * len(blocks) - mB - sum(mblocks)
    return ScalingProbe(B, list(blocks), lam, F, mB, mblocks, Fraction(D * k + D, 2))


@dataclass
class MaxFaceReport:
    max_faces: int
    threshold: Fraction
    margin: Fraction

    @property
    def negative(self):
        return self.margin < 0


def explore_max_faces(B, guard=COVER_GUARD):
    """max over coverings of sum F0i minus (Dk + D)/2 (evidence only)."""
    D, k = B.colors, B.k
    m = max_zero_faces(B, guard)
    thr = Fraction(D * k + D, 2)
    return MaxFaceReport(m, thr, m - thr)
