"""Closed bipartite colored graphs encoded as one permutation per color.

``wiring[c][w]`` is the black vertex joined to white vertex ``w`` by the
edge of color ``c``.  Faces of colors (i, j) are then the cycles of
``wiring[j]^-1 o wiring[i]`` acting on white vertices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import permutations, product

ISO_GUARD = 6
ENUM_GUARD = {2: 7, 3: 5, 4: 4}


class GuardError(ValueError):
    """Raised when an input exceeds a configured size guard."""


# -- permutation helpers ----------------------------------------------------

def inverse(p):
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def compose(p, q):
    """Return p o q, i.e. i -> p[q[i]]."""
    return tuple(p[x] for x in q)


def cycles(p):
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = p[i]
        out.append(cyc)
    return out


def cycle_count(p):
    seen = [False] * len(p)
    n = 0
    for start in range(len(p)):
        if not seen[start]:
            n += 1
            i = start
            while not seen[i]:
                seen[i] = True
                i = p[i]
    return n


def is_bijection(row, k):
    return len(row) == k and sorted(row) == list(range(k))


# -- graphs -----------------------------------------------------------------

@dataclass(frozen=True)
class ColoredGraph:
    colors: int
    k: int
    wiring: tuple

    def __post_init__(self):
        object.__setattr__(self, "wiring", tuple(tuple(int(x) for x in row) for row in self.wiring))

    @classmethod
    def from_rows(cls, *rows):
        rows = [tuple(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, tuple(rows))

    @property
    def vertex_count(self):
        return 2 * self.k

    @property
    def edge_count(self):
        return self.colors * self.k

    def inverse_wiring(self, c):
        return inverse(self.wiring[c])

    def face_permutation(self, i, j):
        """White-vertex permutation whose cycles are the (i, j) faces."""
        inv_j = inverse(self.wiring[j])
        return tuple(inv_j[b] for b in self.wiring[i])

    def face_count(self, i, j):
        return cycle_count(self.face_permutation(i, j))

    def total_faces(self):
        return sum(self.face_count(i, j)
                   for i in range(self.colors) for j in range(i + 1, self.colors))

    def to_dict(self):
        return {"colors": self.colors, "k": self.k, "wiring": [list(r) for r in self.wiring]}

    @classmethod
    def from_dict(cls, d):
        g = cls(int(d["colors"]), int(d["k"]), tuple(tuple(r) for r in d["wiring"]))
        return g

    def to_json(self):
        return json.dumps(self.to_dict())


def dipole(colors):
    return ColoredGraph(colors, 1, ((0,),) * colors)


def cycle_graph(k):
    """Connected 2-colored graph with 2k vertices (a matrix trace tr (AA*)^k)."""
    return ColoredGraph(2, k, (tuple(range(k)), tuple((w + 1) % k for w in range(k))))


def validate(g):
    """Return a list of human readable problems; empty means valid."""
    problems = []
    if g.colors < 2:
        problems.append(f"color count {g.colors} < 2")
    if g.k < 1:
        problems.append(f"half order {g.k} < 1")
    if len(g.wiring) != g.colors:
        problems.append(f"expected {g.colors} wiring rows, got {len(g.wiring)}")
    for c, row in enumerate(g.wiring):
        if len(row) != g.k:
            problems.append(f"color {c} has {len(row)} entries, expected {g.k}")
        elif not is_bijection(row, g.k):
            problems.append(f"color {c} not a bijection")
    return problems


def check(g):
    problems = validate(g)
    if problems:
        raise ValueError("; ".join(problems))
    return g


@dataclass(frozen=True)
class Face:
    colors: tuple
    cycle: tuple
    # cycle alternates ("w", i), ("b", j), ...

    @property
    def length(self):
        return len(self.cycle)


def faces(g, i, j):
    if i == j or not (0 <= i < g.colors and 0 <= j < g.colors):
        raise ValueError(f"invalid color pair ({i}, {j}) for {g.colors} colors")
    out = []
    for cyc in cycles(g.face_permutation(i, j)):
        verts = []
        for w in cyc:
            verts.append(("w", w))
            verts.append(("b", g.wiring[i][w]))
        out.append(Face((i, j), tuple(verts)))
    return out


@dataclass(frozen=True)
class Bubble:
    graph: ColoredGraph
    colors: tuple
    whites: tuple
    blacks: tuple  # origin maps: local label -> parent label


def _components(g, colors):
    parent = list(range(2 * g.k))  # whites 0..k-1, blacks k..2k-1

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in colors:
        for w, b in enumerate(g.wiring[c]):
            ra, rb = find(w), find(g.k + b)
            if ra != rb:
                parent[ra] = rb
    groups = {}
    for v in range(2 * g.k):
        groups.setdefault(find(v), []).append(v)
    comps = sorted(groups.values(), key=min)
    return comps


def bubbles(g, colors=None):
    colors = tuple(range(g.colors)) if colors is None else tuple(sorted(colors))
    if not colors:
        raise ValueError("empty color subset")
    out = []
    for comp in _components(g, colors):
        whites = tuple(v for v in comp if v < g.k)
        blacks = tuple(v - g.k for v in comp if v >= g.k)
        if not whites:
            continue
        bl = {b: n for n, b in enumerate(blacks)}
        rows = tuple(tuple(bl[g.wiring[c][w]] for w in whites) for c in colors)
        out.append(Bubble(ColoredGraph(len(colors), len(whites), rows), colors, whites, blacks))
    return out


def component_count(g, colors=None):
    colors = range(g.colors) if colors is None else colors
    return len(_components(g, colors))


def is_connected(g):
    return g.k >= 1 and component_count(g) == 1


def relabel(g, white_perm, black_perm):
    """Relabel white w -> white_perm[w] and black b -> black_perm[b]."""
    rows = []
    inv_w = inverse(white_perm)
    for row in g.wiring:
        rows.append(tuple(black_perm[row[inv_w[w]]] for w in range(g.k)))
    return ColoredGraph(g.colors, g.k, tuple(rows))


def iso_key(g, guard=ISO_GUARD):
    """Canonical form up to independent white and black relabelings.

    The lexicographically smallest relabeled wiring always has the identity
    in its first row, so the black relabeling is fixed by the white one and
    only k! conjugations need to be scanned.
    """
    if g.k > guard:
        raise GuardError(f"iso_key guard: k={g.k} > {guard}")
    k = g.k
    inv0 = inverse(g.wiring[0])
    reduced = [tuple(inv0[b] for b in row) for row in g.wiring[1:]]
    best = None
    for alpha in permutations(range(k)):
        inv_a = inverse(alpha)
        cand = tuple(tuple(alpha[r[inv_a[w]]] for w in range(k)) for r in reduced)
        if best is None or cand < best:
            best = cand
    key = (tuple(range(k)),) + best
    return f"{g.colors}:{k}:" + "|".join(",".join(map(str, r)) for r in key)


def iso_key_bruteforce(g):
    """Literal minimum over all k!*k! relabelings (slow, used as an oracle)."""
    k = g.k
    best = None
    for a in permutations(range(k)):
        for b in permutations(range(k)):
            cand = relabel(g, a, b).wiring
            if best is None or cand < best:
                best = cand
    return f"{g.colors}:{k}:" + "|".join(",".join(map(str, r)) for r in best)


def canonical(g):
    """Representative graph whose wiring is the iso_key."""
    return canonical_from_key(iso_key(g))


def gauge_fixed_graphs(C, k):
    """All graphs with wiring[0] = identity (every iso class appears)."""
    ident = tuple(range(k))
    perms = list(permutations(range(k)))
    for rest in product(perms, repeat=C - 1):
        yield ColoredGraph(C, k, (ident,) + rest)


def enumerate_invariants(D, k, guard=None):
    """One connected D-colored graph with 2k vertices per iso class."""
    if D < 2 or k < 1:
        raise ValueError("need D >= 2 and k >= 1")
    limit = guard if guard is not None else ENUM_GUARD.get(D, 3)
    if k > limit:
        raise GuardError(f"enumeration guard: k={k} > {limit} for D={D}")
    seen = {}
    for g in gauge_fixed_graphs(D, k):
        if not is_connected(g):
            continue
        key = iso_key(g, guard=max(ISO_GUARD, k))
        if key not in seen:
            seen[key] = canonical_from_key(key)
    return [seen[key] for key in sorted(seen)]


def canonical_from_key(key):
    C, k, body = key.split(":", 2)
    rows = tuple(tuple(int(x) for x in r.split(",")) for r in body.split("|"))
    return ColoredGraph(int(C), int(k), rows)


# -- catalog ----------------------------------------------------------------

@dataclass
class Catalog:
    entries: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.entries[name]

    def __contains__(self, name):
        return name in self.entries

    def names(self):
        return list(self.entries)


def load_catalog():
    raw = json.loads(resources.files("rtensor").joinpath("data/catalog.json").read_text())
    cat = Catalog()
    for name, d in raw["graphs"].items():
        cat.entries[name] = check(ColoredGraph.from_dict(d))
        if "note" in d:
            cat.notes[name] = d["note"]
    return cat


def load_graph(spec):
    """Resolve a catalog id or a path to a graph JSON file."""
    cat = load_catalog()
    if spec in cat:
        return cat[spec]
    with open(spec) as fh:
        return check(ColoredGraph.from_dict(json.load(fh)))
