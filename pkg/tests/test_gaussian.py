from fractions import Fraction

import pytest

from rtensor.gaussian import (all_zero_faces, check_shared_faces, coverings, exact_moment,
                              explore_max_faces, max_zero_faces, mirror, omega_r,
                              order_stability_under_melon_insertion, scaling_probe, wick_oracle,
                              zero_faces)
from rtensor.graph_core import GuardError, cycle_graph, dipole, enumerate_invariants, load_catalog
from rtensor.laurent import Laurent
from rtensor.melonic import node_pairs
from rtensor.series import catalan


@pytest.fixture(scope="module")
def cat():
    return load_catalog()


def test_covering_count(cat):
    assert len(list(coverings(cat["k33"]))) == 6
    with pytest.raises(GuardError):
        list(coverings(cycle_graph(8)))


def test_kernel_face_sums_match_graphs(cat):
    B = cat["cube"]
    sigmas, sums = all_zero_faces(B)
    for (sigma, G), s, F in zip(coverings(B), sigmas, sums):
        assert tuple(s) == sigma
        assert zero_faces(G) == F


def test_moment_examples(cat):
    assert str(exact_moment(dipole(3)).poly) == "N"
    assert exact_moment(cat["quartic1"]).poly == Laurent({1: 1, 0: 1})
    assert str(exact_moment(cycle_graph(3)).poly) == "5N + N^-1"
    rep = exact_moment(cat["k33"])
    assert (rep.omega, rep.R) == (1, 3)
    assert str(rep.poly) == "3 + 3N^-1"


def test_moment_sigma2_scaling(cat):
    rep = exact_moment(cat["quartic1"], N=3, sigma2=Fraction(1, 2))
    assert rep.value == 1
    assert exact_moment(cat["k33"], sigma2=2).poly == exact_moment(cat["k33"]).poly * 8


@pytest.mark.parametrize("k", [1, 2])
def test_matches_wick_oracle(k):
    for B in enumerate_invariants(3, k):
        poly = exact_moment(B).poly
        for N in (2, 3):
            assert poly(N) == wick_oracle(B, N)


def test_oracle_cycles():
    for k in (1, 2, 3):
        B = cycle_graph(k)
        assert exact_moment(B).poly(4) == wick_oracle(B, 4)


def test_oracle_guard(cat):
    with pytest.raises(GuardError):
        wick_oracle(cat["cube"], 5)


def test_catalan_minimal_coverings():
    for k in range(1, 7):
        assert omega_r(cycle_graph(k)) == (0, catalan(k))


def test_orders_are_nonnegative_integers():
    for k in range(1, 4):
        for B in enumerate_invariants(3, k):
            omega, R = omega_r(B)
            assert omega >= 0 and omega.denominator == 1


def test_shared_faces(cat):
    rep = check_shared_faces(cat["k33"])
    assert rep.holds and rep.max_shared == 1 and rep.minimal_coverings == 3
    for B in enumerate_invariants(4, 2):
        assert check_shared_faces(B).holds


def test_order_stable_under_melon_insertion(cat):
    rep = order_stability_under_melon_insertion(cat["k33"])
    assert rep.omega == 1 and rep.stable
    assert len(rep.inserted) == 9


def test_mirror_same_face_maximum(cat):
    for name in ("k33", "cube", "quartic2"):
        B = cat[name]
        assert max_zero_faces(mirror(B)) == max_zero_faces(B)
        assert mirror(mirror(B)) == B


def test_scaling_probe_melonic_gluing(cat):
    B = cat["quartic1"]
    to_m, from_m = [0] * B.k, [0] * B.k
    for j, (w, b) in enumerate(sorted(node_pairs(B))):
        to_m[w] = j
        from_m[j] = b
    assert scaling_probe(B, [dipole(3)] * B.k, to_m, from_m).lam == 0
    assert scaling_probe(B, [dipole(3)] * B.k).lam == -1


def test_scaling_probe_mirror(cat):
    B = cat["k33"]
    probe = scaling_probe(B, [mirror(B)])
    assert probe.lam == 0
    assert probe.threshold == 6


def test_explore_max_faces(cat):
    assert explore_max_faces(cat["k33"]).margin == 0
    assert explore_max_faces(cat["quartic1"]).margin == Fraction(1, 2)
    assert not explore_max_faces(cat["cube"]).negative


def test_degree_check_runs(cat):
    rep = exact_moment(cat["cube"], check_degree=True)
    assert rep.covering_count == 24
    assert all(w is not None for _, _, w in rep.per_covering)
