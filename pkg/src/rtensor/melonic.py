"""Melons, melonic graphs and their rooted colored trees."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from math import comb

from .graph_core import ColoredGraph, inverse, is_connected
from .jackets import degree


def find_melon(g):
    """Lowest-labeled pair (w, b) joined by exactly C-1 edges.

    Returns (w, b, shared_colors, missing_color) or None.
    """
    C = g.colors
    if g.k < 2:
        return None
    for w in range(g.k):
        hits = {}
        for c in range(C):
            hits.setdefault(g.wiring[c][w], []).append(c)
        for b in sorted(hits):
            if len(hits[b]) == C - 1:
                missing = next(c for c in range(C) if c not in hits[b])
                return w, b, tuple(hits[b]), missing
    return None


def _drop(row, w, b):
    return tuple((x - (x > b)) for i, x in enumerate(row) if i != w)


def contract_melon(g, w, b, c):
    """Replace the melon (w, b) missing color c by a single edge of color c."""
    x = g.inverse_wiring(c)[b]
    y = g.wiring[c][w]
    if x == w:
        raise ValueError("cannot contract the last two vertices")
    rows = []
    for col, row in enumerate(g.wiring):
        row = list(row)
        if col == c:
            row[x] = y
        rows.append(_drop(row, w, b))
    return ColoredGraph(g.colors, g.k - 1, tuple(rows))


def insert_melon(g, c, w):
    """Insert a melon on the color-c edge leaving white w."""
    k = g.k
    y = g.wiring[c][w]
    rows = []
    for col, row in enumerate(g.wiring):
        row = list(row) + [k]
        if col == c:
            row[w] = k
            row[k] = y
        rows.append(tuple(row))
    return ColoredGraph(g.colors, k + 1, tuple(rows))


def is_melonic(g, check_degree=False):
    """Contract melons until the dipole remains (True) or none is left (False).

    With check_degree, assert that each contraction keeps the degree.
    """
    if not is_connected(g):
        raise ValueError("is_melonic needs a connected graph")
    while g.k > 1:
        m = find_melon(g)
        if m is None:
            return False
        w, b, _, c = m
        h = contract_melon(g, w, b, c)
        if check_degree and g.colors > 2:
            before, after = degree(g).omega, degree(h).omega
            if before != after:
                raise AssertionError(f"melon contraction changed degree {before} -> {after}")
        g = h
    return True


def has_two_vertex_face(g):
    for i in range(g.colors):
        for j in range(i + 1, g.colors):
            p = g.face_permutation(i, j)
            if any(p[w] == w for w in range(g.k)):
                return True
    return False


# -- trees ------------------------------------------------------------------

class _Node:
    __slots__ = ("slots", "white", "black")

    def __init__(self, C, white=None, black=None):
        self.slots = [None] * C
        self.white = white
        self.black = black


@dataclass(frozen=True)
class MelonicTree:
    """Rooted tree; each node is a tuple of C slots holding None or a child."""

    colors: int
    root: tuple

    @property
    def size(self):
        return _size(self.root)

    def to_list(self):
        def conv(node):
            return [None if s is None else conv(s) for s in node]
        return conv(self.root)

    @classmethod
    def from_list(cls, colors, data):
        def conv(node):
            if len(node) != colors:
                raise ValueError("tree node with wrong slot count")
            return tuple(None if s is None else conv(s) for s in node)
        return cls(colors, conv(data))


def _size(node):
    return 1 + sum(_size(s) for s in node if s is not None)


def _freeze(node):
    return tuple(None if s is None else _freeze(s) for s in node.slots)


def _build(tree):
    """Graph of a tree plus the (white, black) pair of every node in preorder."""
    C = tree.colors
    rows = [[0] for _ in range(C)]
    inv = [[0] for _ in range(C)]
    pairs = [(0, 0)]
    stack = [(tree.root, 0)]
    while stack:
        node, idx = stack.pop()
        b_j = pairs[idx][1]
        for c in range(C):
            child = node[c]
            if child is None:
                continue
            new = len(pairs)
            x = inv[c][b_j]
            for col in range(C):
                rows[col].append(new)
                inv[col].append(new)
            rows[c][x] = new
            inv[c][new] = x
            rows[c][new] = b_j
            inv[c][b_j] = new
            pairs.append((new, new))
            stack.append((child, new))
    return ColoredGraph(C, len(pairs), tuple(tuple(r) for r in rows)), pairs


def from_tree(tree):
    return _build(tree)[0]


def _tree_nodes(g):
    """Rebuild the tree of a melonic graph, keeping the graph's own labels.

    The tree is rooted at white 0: melons on white 0 are never contracted,
    which is always possible since every non-root leaf is itself a melon.
    """
    if not is_connected(g):
        raise ValueError("to_tree needs a connected graph")
    C = g.colors
    wiring = [dict(enumerate(row)) for row in g.wiring]
    inv = [{b: w for w, b in row.items()} for row in wiring]
    steps = []
    alive = set(range(g.k))
    while len(alive) > 1:
        found = None
        for w in sorted(alive - {0}):
            hits = {}
            for c in range(C):
                hits.setdefault(wiring[c][w], []).append(c)
            for b in sorted(hits):
                if len(hits[b]) == C - 1:
                    found = (w, b, next(c for c in range(C) if c not in hits[b]))
                    break
            if found:
                break
        if found is None:
            raise ValueError("graph is not melonic")
        w, b, c = found
        x, y = inv[c][b], wiring[c][w]
        wiring[c][x] = y
        inv[c][y] = x
        for col in range(C):
            del inv[col][b]
            del wiring[col][w]
        alive.discard(w)
        steps.append((w, b, c, y))
    w0 = alive.pop()
    root = _Node(C, w0, wiring[0][w0])
    by_black = {root.black: root}
    for w, b, c, y in reversed(steps):
        # y is the black end of the edge the melon sat on; its node either
        # has a free slot c or the new node goes between it and that child
        host = by_black[y]
        new = _Node(C, w, b)
        new.slots[c] = host.slots[c]
        host.slots[c] = new
        by_black[b] = new
    return root


def to_tree(g):
    return MelonicTree(g.colors, _freeze(_tree_nodes(g)))


def node_pairs(g):
    """(white, black) vertex pair of every tree node of a melonic graph."""
    out = []
    stack = [_tree_nodes(g)]
    while stack:
        node = stack.pop()
        out.append((node.white, node.black))
        stack.extend(s for s in node.slots if s is not None)
    return out


@lru_cache(maxsize=None)
def _trees(C, n):
    if n == 0:
        return (None,)
    out = []
    for split in _compositions(n - 1, C):
        for children in product(*(_trees(C, m) for m in split)):
            out.append(tuple(children))
    return tuple(out)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_trees(C, n):
    """All rooted C-ary colored trees with n nodes."""
    if n < 1:
        raise ValueError("n >= 1")
    return [MelonicTree(C, t) for t in _trees(C, n)]


def count_melonic(C, n):
    """Number of melonic C-colored graphs with 2n vertices, by tree counting.

    Counts trees slot by slot: a slot is empty or holds a subtree, so the
    number of forests filling C slots with m nodes is a C-fold convolution.
    """
    if n < 1:
        raise ValueError("n >= 1")
    trees = [1]  # trees[m]: trees with m nodes, with trees[0] = empty slot
    for m in range(1, n + 1):
        forest = [1] + [0] * (m - 1)
        for _ in range(C):
            nxt = [0] * m
            for a, fa in enumerate(forest):
                if fa:
                    for b in range(m - a):
                        nxt[a + b] += fa * trees[b]
            forest = nxt
        trees.append(forest[m - 1])
    return trees[n]


def fuss_catalan(C, n):
    return comb(C * n, n) // ((C - 1) * n + 1)


# -- coverings --------------------------------------------------------------

def covering(B, sigma):
    return ColoredGraph(B.colors + 1, B.k, (tuple(sigma),) + B.wiring)


def unique_melonic_covering(B):
    """Pair the white and black vertex of every tree node with color 0."""
    if not is_melonic(B):
        raise ValueError("B is not melonic")
    sigma = [0] * B.k
    for w, b in node_pairs(B):
        sigma[w] = b
    G = covering(B, sigma)
    if B.colors >= 2 and degree(G).omega != 0:
        raise AssertionError("tree covering is not melonic")
    return G


def melonic_coverings(B):
    """All color-0 matchings whose covering has degree 0."""
    out = []
    for sigma in permutations(range(B.k)):
        G = covering(B, sigma)
        if degree(G).omega == 0:
            out.append(sigma)
    return out


def doubled(B, mirror, to_mirror, from_mirror):
    """Glue B (whites/blacks 0..k-1) to a mirror graph by color-0 edges.

    B white w -> mirror black to_mirror[w]; mirror white v -> B black from_mirror[v].
    """
    k = B.k
    zero = [k + to_mirror[w] for w in range(k)] + [from_mirror[v] for v in range(k)]
    rows = [tuple(zero)]
    for c in range(B.colors):
        rows.append(tuple(B.wiring[c]) + tuple(k + x for x in mirror.wiring[c]))
    return ColoredGraph(B.colors + 1, 2 * k, tuple(rows))


def dipoles(D, k):
    ident = tuple(range(k))
    return ColoredGraph(D, k, (ident,) * D)


def unique_doubled_melonic(B):
    """B's tree with a color-0 edge plus a dipole hanging off every node."""
    if not is_melonic(B):
        raise ValueError("B is not melonic")
    k = B.k
    to_mirror = [0] * k
    from_mirror = [0] * k
    for j, (w, b) in enumerate(sorted(node_pairs(B))):
        to_mirror[w] = j
        from_mirror[j] = b
    G = doubled(B, dipoles(B.colors, k), to_mirror, from_mirror)
    if degree(G).omega != 0:
        raise AssertionError("doubled tree graph is not melonic")
    return G


def doubled_melonic_classes(B):
    """Exhaustive count of melonic doubled graphs over B up to mirror relabeling.

    Mirror vertices are canonically renamed through their color-0 partner in B,
    so each class is identified by the renamed mirror wiring.
    """
    k, D = B.k, B.colors
    perms = list(permutations(range(k)))
    classes = set()
    for mirror_rows in product(perms, repeat=D):
        mirror = ColoredGraph(D, k, mirror_rows)
        for to_mirror in perms:
            for from_mirror in perms:
                G = doubled(B, mirror, to_mirror, from_mirror)
                if not is_connected(G) or degree(G).omega != 0:
                    continue
                # mirror black to_mirror[w] -> w ; mirror white v -> from_mirror[v]
                inv_to = inverse(to_mirror)
                key = tuple(tuple(inv_to[row[v]] for v in sorted(range(k), key=lambda v: from_mirror[v]))
                            for row in mirror_rows)
                classes.add(key)
    return classes
