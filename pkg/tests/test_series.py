from math import factorial

import pytest

from rtensor.gaussian import exact_moment
from rtensor.melonic import from_tree, is_melonic
from rtensor.series import (binary_trees, catalan, cycle_bound_check, full_cycles,
                            quartic_cov_closed, quartic_cov_coeff, quartic_cov_limit,
                            quartic_cov_partial, quartic_melonic_graph, weingarten_coefficient,
                            weingarten_leading)


def test_catalan():
    assert [catalan(k) for k in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert [len(binary_trees(n)) for n in range(6)] == [catalan(n) for n in range(6)]


def test_coefficients():
    assert [quartic_cov_coeff(n) for n in range(1, 7)] == [quartic_cov_closed(n) for n in range(1, 7)]
    assert [quartic_cov_closed(n) for n in range(1, 5)] == [2, 8, 40, 224]


def test_limit_values():
    assert quartic_cov_limit(0.05) == pytest.approx(0.916079783, abs=1e-9)
    assert quartic_cov_limit(0.0) == 1.0
    assert quartic_cov_limit(1e-9) == pytest.approx(1 - 2e-9, abs=1e-15)
    assert quartic_cov_limit(1e-7) == pytest.approx(1 - 2e-7 + 8e-14, rel=1e-12)
    with pytest.raises(ValueError):
        quartic_cov_limit(-0.1)


def test_limit_is_fixed_point():
    for lam in (0.01, 0.05, 0.3, 2.0):
        g = quartic_cov_limit(lam)
        assert g == pytest.approx(1 - 2 * lam * g * g, rel=1e-12)


def test_partial_sums_converge():
    lim = quartic_cov_limit(0.05)
    errs = [abs(quartic_cov_partial(0.05, n) - lim) for n in (2, 4, 8)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-5


def test_tree_graphs_are_melonic():
    for n in range(1, 4):
        for t in binary_trees(n):
            mt = quartic_melonic_graph(t)
            assert mt.size == 2 * n
            assert is_melonic(from_tree(mt))


def test_full_cycles():
    assert len(full_cycles(4)) == 6
    assert full_cycles(1) == [(0,)]


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_cycle_bound(k):
    rep = cycle_bound_check(k)
    assert rep.holds and rep.max_lhs_minus_rhs == 0
    assert rep.saturating > 0


def test_cycle_bound_guard():
    with pytest.raises(ValueError):
        cycle_bound_check(6)


def test_weingarten():
    assert weingarten_coefficient([1]) == 1
    assert weingarten_coefficient([2]) == -1
    assert weingarten_coefficient([3]) == 2
    assert weingarten_coefficient([2, 1]) == -1
    assert weingarten_coefficient([4]) == -5
    assert weingarten_leading([1, 1], 10) == pytest.approx(1e-2)
    assert weingarten_leading([2], 10) == pytest.approx(-1e-3)


def test_cycle_moments_are_catalan():
    from rtensor.graph_core import cycle_graph
    for k in range(1, 6):
        poly = exact_moment(cycle_graph(k)).poly
        assert poly.leading_coefficient == catalan(k)
        assert poly.leading_exponent == 1
        assert poly(1) == factorial(k)
