"""Open graphs, boundary graphs and internal dipole contractions.

An open graph has internal white and black vertices joined by colors
1..D (one permutation per color) and a partial color-0 matching.  A white
vertex without a 0-partner carries an external leg (an external black
vertex of the boundary), and likewise a black vertex without one carries a
leg seen as an external white vertex.  ``bare`` counts free propagators:
external legs joined directly to each other.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations

from .graph_core import ColoredGraph, _components, inverse, is_bijection


@dataclass(frozen=True)
class OpenGraph:
    D: int
    k: int
    wiring: tuple  # colors 1..D, wiring[i-1][w] = black
    zero: tuple  # zero[w] = black partner or -1 for a leg
    bare: int = 0
    white_labels: tuple = None
    black_labels: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "wiring", tuple(tuple(r) for r in self.wiring))
        object.__setattr__(self, "zero", tuple(self.zero))
        if self.white_labels is None:
            object.__setattr__(self, "white_labels", tuple(range(self.k)))
        if self.black_labels is None:
            object.__setattr__(self, "black_labels", tuple(range(self.k)))

    @property
    def leg_whites(self):
        return [w for w in range(self.k) if self.zero[w] < 0]

    @property
    def leg_blacks(self):
        used = set(self.zero)
        return [b for b in range(self.k) if b not in used]

    @property
    def internal_zero_edges(self):
        return [(w, b) for w, b in enumerate(self.zero) if b >= 0]

    @property
    def legs(self):
        return len(self.leg_whites) + len(self.leg_blacks) + 2 * self.bare

    def to_dict(self):
        return {"colors": self.D + 1, "k": self.k,
                "wiring": [list(r) for r in self.wiring],
                "zero_matching": [None if b < 0 else b for b in self.zero],
                "legs": {"white": self.leg_whites, "black": self.leg_blacks},
                "bare": self.bare}

    @classmethod
    def from_dict(cls, d):
        zero = tuple(-1 if b is None else int(b) for b in d["zero_matching"])
        g = cls(int(d["colors"]) - 1, int(d["k"]), tuple(tuple(r) for r in d["wiring"]), zero,
                int(d.get("bare", 0)))
        problems = validate_open(g)
        if "legs" in d and not problems:
            if sorted(d["legs"]["white"]) != g.leg_whites or sorted(d["legs"]["black"]) != g.leg_blacks:
                problems.append("legs do not match the zero matching")
        if problems:
            raise ValueError("; ".join(problems))
        return g


def validate_open(g):
    problems = []
    if len(g.wiring) != g.D:
        problems.append(f"expected {g.D} wiring rows")
    for i, row in enumerate(g.wiring):
        if not is_bijection(row, g.k):
            problems.append(f"color {i + 1} not a bijection")
    if len(g.zero) != g.k:
        problems.append("zero matching has wrong length")
    partners = [b for b in g.zero if b >= 0]
    if len(set(partners)) != len(partners) or any(b >= g.k for b in partners):
        problems.append("malformed zero matching")
    return problems


def load_open(path):
    with open(path) as fh:
        return OpenGraph.from_dict(json.load(fh))


def _inv_rows(g):
    return [inverse(r) for r in g.wiring]


def boundary_graph(g):
    """D-colored graph on the legs, one color-i edge per external (0i) face.

    Boundary whites are the legged internal blacks (sorted by label), boundary
    blacks the legged internal whites.  From a legged black b, color i leads
    to white w; while w has a 0-partner b' the strand continues from b'.
    """
    invs = _inv_rows(g)
    lw = sorted(g.leg_whites, key=lambda w: g.white_labels[w])
    lb = sorted(g.leg_blacks, key=lambda b: g.black_labels[b])
    bpos = {w: n for n, w in enumerate(lw)}
    rows = []
    for i in range(g.D):
        row = []
        for b in lb:
            w = invs[i][b]
            steps = 0
            while g.zero[w] >= 0:
                w = invs[i][g.zero[w]]
                steps += 1
                if steps > g.k:
                    raise ValueError("strand does not terminate")
            row.append(bpos[w])
        row.extend(len(lb) + s for s in range(g.bare))
        rows.append(tuple(row))
    p = len(lb) + g.bare
    return ColoredGraph(g.D, p, tuple(rows))


def internal_faces(g):
    """Closed (0i) faces summed over i."""
    invs = _inv_rows(g)
    total = 0
    for i in range(g.D):
        seen = [False] * g.k
        for b in g.leg_blacks:  # chains start at legged blacks
            w = invs[i][b]
            seen[w] = True
            while g.zero[w] >= 0:
                w = invs[i][g.zero[w]]
                seen[w] = True
        for start in range(g.k):
            if seen[start]:
                continue
            total += 1
            w = start
            while not seen[w]:
                seen[w] = True
                w = invs[i][g.zero[w]]
    return total


def _count_components(g, with_zero):
    parent = list(range(2 * g.k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for row in g.wiring:
        for w, b in enumerate(row):
            union(w, g.k + b)
    if with_zero:
        for w, b in enumerate(g.zero):
            if b >= 0:
                union(w, g.k + b)
    return len({find(v) for v in range(2 * g.k)})


def bubble_count(g):
    """H(G): connected components of the colors 1..D."""
    return _count_components(g, False) if g.k else 0


def component_count(g):
    """C(G), counting each bare propagator as its own component."""
    return (_count_components(g, True) if g.k else 0) + g.bare


def zero_edge_count(g):
    """E0(G) = internal 0-edges + external legs (+ one per bare propagator)."""
    return len(g.internal_zero_edges) + len(g.leg_whites) + len(g.leg_blacks) + g.bare


def amplitude(g):
    """Exponent of N in the amplitude: (D-1)H - (D-1)E0 + sum_i F0i_int."""
    D = g.D
    return (D - 1) * bubble_count(g) - (D - 1) * zero_edge_count(g) + internal_faces(g)


def q_value(g):
    """Q = D - C + (D-1)(H - C) - (D-1)E0 + F_int, nondecreasing under contraction."""
    D = g.D
    C = component_count(g)
    H = bubble_count(g)
    return D - C + (D - 1) * (H - C) - (D - 1) * zero_edge_count(g) + internal_faces(g)


def boundary_bound(g):
    """-2(D-1)k(dG) + D - C(dG)."""
    dG = boundary_graph(g)
    comps = len(_graph_components(dG))
    return -2 * (g.D - 1) * dG.k + g.D - comps


def _graph_components(h):
    return _components(h, range(h.colors)) if h.k else []


@dataclass
class AmplitudeReport:
    exponent: int
    bound: int

    @property
    def holds(self):
        return self.exponent <= self.bound

    @property
    def saturated(self):
        return self.exponent == self.bound


def amplitude_exponent(g, check=False):
    rep = AmplitudeReport(amplitude(g), boundary_bound(g))
    if check and not rep.holds:
        raise AssertionError(f"amplitude exponent {rep.exponent} exceeds bound {rep.bound}")
    return rep


def contract_internal_dipole(g, zero_edge):
    """Delete the 0-edge (w, b) and its parallel edges, reconnecting the rest."""
    w, b = zero_edge
    if not (0 <= w < g.k) or g.zero[w] != b:
        raise ValueError(f"{zero_edge} is not an internal color-0 edge")
    invs = _inv_rows(g)
    rows = []
    for i, row in enumerate(g.wiring):
        row = list(row)
        if row[w] != b:
            row[invs[i][b]] = row[w]
        rows.append(row)
    keep_w = [x for x in range(g.k) if x != w]
    keep_b = [x for x in range(g.k) if x != b]
    newb = {x: n for n, x in enumerate(keep_b)}
    new_rows = tuple(tuple(newb[row[x]] for x in keep_w) for row in rows)
    zero = tuple(-1 if g.zero[x] < 0 else newb[g.zero[x]] for x in keep_w)
    return OpenGraph(g.D, g.k - 1, new_rows, zero, g.bare,
                     tuple(g.white_labels[x] for x in keep_w),
                     tuple(g.black_labels[x] for x in keep_b))


def dipole_multiplicity(g, zero_edge):
    w, b = zero_edge
    return sum(row[w] == b for row in g.wiring)


@dataclass
class Step:
    edge: tuple  # original labels (white, black)
    colors: tuple  # colors parallel to the 0-edge
    q_before: int
    q_after: int
    components: int
    bubbles: int


@dataclass
class ReductionTrace:
    steps: list = field(default_factory=list)
    final: OpenGraph = None
    boundary: ColoredGraph = None

    @property
    def q_values(self):
        if not self.steps:
            return []
        return [self.steps[0].q_before] + [s.q_after for s in self.steps]

    @property
    def monotone(self):
        q = self.q_values
        return all(a <= b for a, b in zip(q, q[1:]))


def final_boundary(g):
    """Boundary read off a graph with no internal 0-edges."""
    if g.internal_zero_edges:
        raise ValueError("graph still has internal 0-edges")
    return boundary_graph(g)


def reduce_to_boundary(g, rng=None, check=True):
    """Contract every internal 0-edge, in random order when rng is given."""
    trace = ReductionTrace()
    target = boundary_graph(g)
    cur = g
    while cur.internal_zero_edges:
        edges = cur.internal_zero_edges
        e = rng.choice(edges) if rng is not None else edges[0]
        cols = tuple(i + 1 for i, row in enumerate(cur.wiring) if row[e[0]] == e[1])
        before = q_value(cur)
        nxt = contract_internal_dipole(cur, e)
        after = q_value(nxt)
        trace.steps.append(Step((cur.white_labels[e[0]], cur.black_labels[e[1]]), cols,
                                before, after, component_count(nxt), bubble_count(nxt)))
        if check and after < before:
            raise AssertionError(f"Q decreased {before} -> {after}")
        cur = nxt
    trace.final = cur
    trace.boundary = final_boundary(cur)
    if check and trace.boundary != target:
        raise AssertionError("reduced graph does not match the boundary graph")
    return trace


def q_monotone_under_random_orders(g, orders=100, seed=0):
    rng = random.Random(seed)
    finals = set()
    for _ in range(orders):
        tr = reduce_to_boundary(g, rng)
        if not tr.monotone:
            return False, finals
        finals.add(tr.boundary)
    return True, finals


# -- builders ---------------------------------------------------------------

def union_bubbles(bubbles):
    """Internal wiring of a disjoint union of closed D-colored graphs."""
    D = bubbles[0].colors
    rows = [[] for _ in range(D)]
    off = 0
    for B in bubbles:
        for c in range(D):
            rows[c].extend(off + x for x in B.wiring[c])
        off += B.k
    return off, tuple(tuple(r) for r in rows)


def open_graph(bubbles, zero, bare=0):
    k, rows = union_bubbles(bubbles)
    return OpenGraph(bubbles[0].colors, k, rows, tuple(zero), bare)


def bare_propagator(D):
    return OpenGraph(D, 0, ((),) * D, (), 1)


def is_connected_open(g):
    return component_count(g) == 1


def enumerate_open_graphs(bubble_types, max_bubbles=3, leg_pairs=(1, 2)):
    """Connected open graphs built from up to max_bubbles copies of the types.

    For p legged whites and p legged blacks, every choice of legged vertices
    and of a bijection between the remaining ones is produced.
    """
    for h in range(1, max_bubbles + 1):
        for combo in combinations_with_replacement(range(len(bubble_types)), h):
            k, rows = union_bubbles([bubble_types[i] for i in combo])
            D = bubble_types[0].colors
            for p in leg_pairs:
                if p > k:
                    continue
                for lw in combinations(range(k), p):
                    rest_w = [w for w in range(k) if w not in lw]
                    for lb in combinations(range(k), p):
                        rest_b = [b for b in range(k) if b not in lb]
                        for img in permutations(rest_b):
                            zero = [-1] * k
                            for w, b in zip(rest_w, img):
                                zero[w] = b
                            g = OpenGraph(D, k, rows, tuple(zero))
                            if is_connected_open(g):
                                yield combo, g
