"""Jackets, ribbon genus and the degree of a colored graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial

from .graph_core import bubbles, is_connected


@dataclass(frozen=True)
class Jacket:
    cycle: tuple
    face_count: int
    genus: int


@dataclass
class DegreeReport:
    omega: int
    genera: list = field(default_factory=list)
    total_faces: int = 0
    identity_residual: Fraction = Fraction(0)

    def to_dict(self):
        return {"omega": self.omega, "genera": self.genera,
                "total_faces": self.total_faces,
                "identity_residual": str(self.identity_residual)}


def color_cycles(C):
    """One representative per {cycle, reversed cycle}, all starting at color 0."""
    out = []
    for rest in permutations(range(1, C)):
        if C > 2 and rest[0] > rest[-1]:
            continue
        out.append((0,) + rest)
    return out


def jackets(g):
    if g.colors < 3:
        raise ValueError("jackets need at least 3 colors")
    if not is_connected(g):
        raise ValueError("jackets need a connected graph")
    counts = {}
    out = []
    V, E = 2 * g.k, g.colors * g.k
    for cyc in color_cycles(g.colors):
        F = 0
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            pair = (min(a, b), max(a, b))
            if pair not in counts:
                counts[pair] = g.face_count(*pair)
            F += counts[pair]
        chi = V - E + F
        two_g = 2 - chi
        if two_g < 0 or two_g % 2:
            raise ArithmeticError(f"jacket {cyc} has Euler characteristic {chi}")
        out.append(Jacket(cyc, F, two_g // 2))
    return out


def face_identity_rhs(C, k, omega):
    """Total face count predicted from the degree."""
    return Fraction((C - 1) * (C - 2), 2) * k + (C - 1) - Fraction(2 * omega, factorial(C - 2))


def degree(g):
    if not is_connected(g):
        raise ValueError("degree needs a connected graph")
    F = g.total_faces()
    if g.colors == 2:
        # a connected 2-colored graph is one cycle; degree 0 by convention
        return DegreeReport(0, [], F, Fraction(0))
    js = jackets(g)
    omega = sum(j.genus for j in js)
    residual = F - face_identity_rhs(g.colors, g.k, omega)
    return DegreeReport(omega, [j.genus for j in js], F, residual)


def scaled_degree(omega, C):
    """2*omega/(C-2)! as a Fraction (integral for every connected graph)."""
    if C == 2:
        return Fraction(0)
    return Fraction(2 * omega, factorial(C - 2))


@dataclass
class BoundReport:
    lhs: int
    rhs: int
    bubble_degrees: list

    @property
    def holds(self):
        return self.lhs >= self.rhs


def check_bubble_bound(g):
    """omega(G) >= D * sum of degrees of the color-{1..D} bubbles."""
    D = g.colors - 1
    lhs = degree(g).omega
    degs = [degree(b.graph).omega for b in bubbles(g, range(1, g.colors))]
    return BoundReport(lhs, D * sum(degs), degs)
