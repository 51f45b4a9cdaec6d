import numpy as np
import pytest

from igawave.quadrature import gauss_legendre, map_to_element, rule_for_degree


def test_two_point_rule_is_the_textbook_one():
    rule = gauss_legendre(2)
    np.testing.assert_allclose(rule.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)])
    np.testing.assert_allclose(rule.weights, [1.0, 1.0])


def test_single_point_is_midpoint():
    rule = gauss_legendre(1)
    assert rule.nodes[0] == pytest.approx(0.0)
    assert rule.weights[0] == pytest.approx(2.0)


def test_polynomial_exactness():
    """n points integrate degree 2n-1 exactly; random coefficients."""
    rng = np.random.default_rng(314)
    for n in range(1, 17):
        rule = gauss_legendre(n)
        coeffs = rng.uniform(-1, 1, 2 * n)
        poly = np.polynomial.Polynomial(coeffs)
        exact = poly.integ()(1.0) - poly.integ()(-1.0)
        quad = rule.weights @ poly(rule.nodes)
        assert abs(quad - exact) < 1e-13 * max(1.0, abs(exact))


def test_eight_points_integrate_x14():
    rule = gauss_legendre(8)
    val = rule.weights @ rule.nodes**14
    assert val == pytest.approx(2.0 / 15.0, rel=1e-14)


def test_weights_positive_and_sum_to_two():
    for n in (3, 9, 16):
        rule = gauss_legendre(n)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(2.0)


def test_point_count_limits():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        gauss_legendre(17)


def test_rule_for_degree():
    assert rule_for_degree(3).npoints == 4
    assert rule_for_degree(3, smooth_coefficient=False).npoints == 6
    assert rule_for_degree(6).npoints == 7
    with pytest.raises(ValueError):
        rule_for_degree(0)


def test_map_to_element():
    rule = gauss_legendre(3)
    x, w = map_to_element(rule, 2.0, 3.5)
    assert np.all((x > 2.0) & (x < 3.5))
    assert w.sum() == pytest.approx(1.5)
    # integral of x^2 over [2, 3.5]
    assert w @ x**2 == pytest.approx((3.5**3 - 2.0**3) / 3.0, rel=1e-14)


def test_rules_are_cached():
    assert gauss_legendre(5) is gauss_legendre(5)
