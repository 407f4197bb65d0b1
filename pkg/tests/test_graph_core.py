import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from rtensor.graph_core import (ColoredGraph, GuardError, bubbles, canonical, component_count,
                                cycle_graph, dipole, enumerate_invariants, faces, is_connected,
                                iso_key, iso_key_bruteforce, load_catalog, relabel, validate)

ID2, SW2 = (0, 1), (1, 0)


def perms_of(k):
    return st.permutations(list(range(k))).map(tuple)


@st.composite
def graphs(draw, max_colors=4, max_k=4):
    C = draw(st.integers(2, max_colors))
    k = draw(st.integers(1, max_k))
    return ColoredGraph(C, k, tuple(draw(perms_of(k)) for _ in range(C)))


def test_validate_examples():
    assert validate(dipole(3)) == []
    bad = ColoredGraph(2, 2, ((0, 1), (0, 0)))
    assert validate(bad) == ["color 1 not a bijection"]
    assert validate(ColoredGraph(3, 2, (ID2, ID2, SW2))) == []


def test_validate_sizes():
    assert validate(ColoredGraph(1, 1, ((0,),)))
    assert validate(ColoredGraph(2, 2, ((0, 1),)))
    assert "color 0 has 1 entries, expected 2" in validate(ColoredGraph(2, 2, ((0,), (0, 1))))


def test_faces_examples():
    f = faces(dipole(3), 1, 2)
    assert len(f) == 1 and f[0].length == 2
    f6 = faces(cycle_graph(3), 0, 1)
    assert [x.length for x in f6] == [6]
    q = ColoredGraph(3, 2, (ID2, ID2, SW2))
    assert [x.length for x in faces(q, 0, 1)] == [2, 2]


def test_face_alternation():
    g = load_catalog()["k33"]
    for face in faces(g, 0, 2):
        sides = [v[0] for v in face.cycle]
        assert sides == ["w", "b"] * (face.length // 2)


def test_faces_bad_colors():
    with pytest.raises(ValueError):
        faces(dipole(3), 1, 1)
    with pytest.raises(ValueError):
        faces(dipole(3), 0, 3)


@given(graphs())
def test_face_lengths_sum(g):
    for i in range(g.colors):
        for j in range(i + 1, g.colors):
            assert sum(f.length for f in faces(g, i, j)) == 2 * g.k


def test_bubbles_examples():
    cov = ColoredGraph(4, 1, ((0,),) * 4)
    bs = bubbles(cov, [1, 2, 3])
    assert len(bs) == 1 and bs[0].graph == dipole(3)
    q = ColoredGraph(3, 2, (ID2, ID2, SW2))
    assert len(bubbles(q, [0, 1])) == 2


@given(graphs())
def test_bubbles_partition_vertices(g):
    bs = bubbles(g)
    whites = sorted(w for b in bs for w in b.whites)
    blacks = sorted(x for b in bs for x in b.blacks)
    assert whites == list(range(g.k)) and blacks == list(range(g.k))
    assert len(bs) == component_count(g)


@given(graphs())
def test_component_count_matches_orbits(g):
    # orbits of the group generated by wiring[j]^-1 o wiring[i] on whites
    gens = [g.face_permutation(0, j) for j in range(1, g.colors)]
    seen, orbits = set(), 0
    for s in range(g.k):
        if s in seen:
            continue
        orbits += 1
        stack = [s]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            for p in gens:
                stack.append(p[x])
                stack.append(p.index(x))
    assert orbits == component_count(g)


def test_iso_key_examples():
    assert iso_key(dipole(3)) == iso_key(dipole(3))
    a = ColoredGraph(3, 2, (ID2, ID2, SW2))
    b = ColoredGraph(3, 2, (ID2, SW2, ID2))
    assert iso_key(a) != iso_key(b)
    assert iso_key(relabel(a, SW2, ID2)) == iso_key(a)


@settings(max_examples=60)
@given(graphs(max_k=4), st.randoms())
def test_iso_key_relabel_invariant(g, rnd):
    wp = list(range(g.k))
    bp = list(range(g.k))
    rnd.shuffle(wp)
    rnd.shuffle(bp)
    assert iso_key(relabel(g, wp, bp)) == iso_key(g)


@settings(max_examples=40)
@given(graphs(max_colors=3, max_k=4))
def test_iso_key_matches_bruteforce(g):
    assert iso_key(g).split(":", 2)[2] == iso_key_bruteforce(g).split(":", 2)[2]


def test_iso_key_guard():
    big = ColoredGraph(2, 7, (tuple(range(7)),) * 2)
    with pytest.raises(GuardError):
        iso_key(big)


def test_enumerate_counts():
    assert len(enumerate_invariants(3, 1)) == 1
    two = enumerate_invariants(3, 2)
    assert len(two) == 3
    cat = load_catalog()
    assert {iso_key(g) for g in two} == {iso_key(cat[f"quartic{c}"]) for c in (1, 2, 3)}
    assert len(enumerate_invariants(2, 3)) == 1
    assert iso_key(enumerate_invariants(2, 3)[0]) == iso_key(cycle_graph(3))


def test_enumerate_no_duplicates_and_relabel_stable():
    gs = enumerate_invariants(3, 3)
    keys = [iso_key(g) for g in gs]
    assert len(set(keys)) == len(keys) == 7
    rnd = random.Random(5)
    again = set()
    for g in gs:
        wp, bp = list(range(3)), list(range(3))
        rnd.shuffle(wp)
        rnd.shuffle(bp)
        again.add(iso_key(relabel(g, wp, bp)))
    assert again == set(keys)
    assert all(is_connected(g) for g in gs)


def test_enumerate_guard():
    with pytest.raises(GuardError):
        enumerate_invariants(3, 6)


def test_canonical_is_fixed_point():
    g = load_catalog()["k33"]
    assert canonical(canonical(g)) == canonical(g)


def test_catalog_contents():
    cat = load_catalog()
    assert {"dipole", "quartic1", "quartic2", "quartic3"} <= set(cat.names())
    for k in range(1, 7):
        g = cat[f"cycle{2 * k}"]
        assert g.colors == 2 and g.k == k and is_connected(g)


def test_json_roundtrip(tmp_path):
    g = load_catalog()["k33"]
    path = tmp_path / "g.json"
    path.write_text(g.to_json())
    assert ColoredGraph.from_dict(json.loads(path.read_text())) == g
