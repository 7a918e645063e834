import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hoshell.errors import DomainError
from hoshell.specfun import (
    double_factorial,
    erf_sqrt_i,
    gauss_legendre,
    kummer_1f1,
    legendre_coefficients,
    legendre_p,
    legendre_p_derivative,
)


class TestDoubleFactorial:
    def test_examples(self):
        assert double_factorial(7) == 105
        assert double_factorial(0) == 1
        assert double_factorial(-1) == 1
        assert double_factorial(10) == 3840

    def test_below_domain(self):
        with pytest.raises(DomainError):
            double_factorial(-2)

    @given(st.integers(min_value=1, max_value=60))
    def test_recurrence(self, n):
        assert double_factorial(n) == n * double_factorial(n - 2)


# Explicit low-order Legendre polynomials, exact coefficients ascending in x.
_EXPLICIT = {
    0: [Fraction(1)],
    1: [Fraction(0), Fraction(1)],
    2: [Fraction(-1, 2), Fraction(0), Fraction(3, 2)],
    3: [Fraction(0), Fraction(-3, 2), Fraction(0), Fraction(5, 2)],
    4: [Fraction(3, 8), Fraction(0), Fraction(-30, 8), Fraction(0), Fraction(35, 8)],
    5: [Fraction(0), Fraction(15, 8), Fraction(0), Fraction(-70, 8), Fraction(0),
        Fraction(63, 8)],
}


class TestLegendre:
    def test_order_zero_is_one(self):
        assert legendre_p(0, 0.37) == 1.0
        assert legendre_p(0, Fraction(1, 3)) == 1

    @pytest.mark.parametrize("alpha", range(0, 11))
    def test_value_one_at_unity(self, alpha):
        assert legendre_p(alpha, 1) == 1

    def test_exact_rational_value(self):
        assert legendre_p(4, 2) == Fraction(443, 8)

    @pytest.mark.parametrize("alpha", sorted(_EXPLICIT))
    def test_explicit_coefficients(self, alpha):
        assert list(legendre_coefficients(alpha)) == _EXPLICIT[alpha]

    def test_table_denominators_appear(self):
        denominators = {
            max(c.denominator for c in legendre_coefficients(a)) for a in (4, 6, 8, 10)
        }
        assert denominators == {8, 16, 128, 256}

    @pytest.mark.parametrize("alpha", range(6, 11))
    def test_recurrence_matches_coefficients(self, alpha):
        x = Fraction(5, 7)
        explicit = sum(c * x ** i for i, c in enumerate(legendre_coefficients(alpha)))
        assert legendre_p(alpha, x) == explicit

    def test_derivative_trivials(self):
        assert legendre_p_derivative(1, 0.73) == 1.0
        assert legendre_p_derivative(2, 0.0) == 0.0

    @pytest.mark.parametrize("alpha,x", [(5, 0.3), (7, -0.62), (9, 0.91)])
    def test_derivative_against_central_difference(self, alpha, x):
        h = 1e-6
        fd = (legendre_p(alpha, x + h) - legendre_p(alpha, x - h)) / (2 * h)
        assert abs(legendre_p_derivative(alpha, x) - fd) < 1e-8

    def test_array_input(self):
        xs = np.linspace(-1, 1, 7)
        vals = legendre_p(3, xs)
        assert np.allclose(vals, 0.5 * (5 * xs ** 3 - 3 * xs))


def _series_oracle(b, z, n_terms=500):
    # Independent brute-force summation; terms underflow well before the cap,
    # so this equals the full series at machine precision for small |z|.
    total = 0j
    term = 1.0 + 0j
    for n in range(n_terms):
        total += term
        term *= z / (b + n)
    return total


class TestKummer:
    def test_unit_at_origin(self):
        assert kummer_1f1(3.7, 0.0) == 1.0 + 0j

    def test_exponential_identity(self):
        # 1F1(1;2;z) = (e^z - 1)/z at z = 1
        assert abs(kummer_1f1(2.0, 1.0) - (math.e - 1.0)) < 1e-14

    def test_brute_force_oracle(self):
        got = kummer_1f1(4.0, 3j)
        assert abs(got - _series_oracle(4.0, 3j)) < 1e-13

    def test_rejects_nonpositive_b(self):
        with pytest.raises(DomainError):
            kummer_1f1(0.0, 1.0)

    @settings(max_examples=200, deadline=None)
    @given(
        b=st.floats(min_value=1.0, max_value=10.0),
        y=st.floats(min_value=-20.0, max_value=20.0),
    )
    def test_contiguous_relation(self, b, y):
        # 1F1(1;b;z) = 1 + (z/b) 1F1(1;b+1;z) on the physical (imaginary) axis
        z = 1j * y
        lhs = kummer_1f1(b, z)
        rhs = 1.0 + (z / b) * kummer_1f1(b + 1.0, z)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))

    @pytest.mark.parametrize("b", [2.0, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0])
    @pytest.mark.parametrize("y", [0.5, 8.0, 12.0, 30.0, 60.0, 100.0, -45.0])
    def test_branch_consistency_via_euler_integral(self, b, y):
        # 1F1(1;b;iy) = (b-1) * integral_0^1 (1-t)^(b-2) e^(iyt) dt; the
        # integral is evaluated with a fine midpoint rule as an independent
        # (if slowly converging) oracle.
        n = 400_000
        t = (np.arange(n) + 0.5) / n
        val = (b - 1.0) * np.mean((1.0 - t) ** (b - 2.0) * np.exp(1j * y * t))
        assert abs(kummer_1f1(b, 1j * y) - val) < 5e-9

    def test_high_precision_oracle(self):
        # Arbitrary-precision reference across every evaluation branch.
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        cases = [(b, 1j * y)
                 for b in (1.5, 2.0, 3.3, 3.5, 4.0, 5.5, 7.9)
                 for y in (0.3, 6.0, 11.0, 15.0, 25.0, 34.0, 50.0, 100.0, -60.0)]
        cases += [(2.5, 30 + 30j), (4.2, -12 + 9j), (3.5, -40 + 0.5j), (6.0, 60 - 10j)]
        for b, z in cases:
            ref = complex(mp.hyp1f1(1, b, mp.mpc(z)))
            got = kummer_1f1(b, z)
            assert abs(got - ref) <= 5e-12 * abs(ref), (b, z)


class TestErfSqrtI:
    def test_zero(self):
        assert erf_sqrt_i(0.0) == 0.0

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            erf_sqrt_i(-1.0)

    @pytest.mark.parametrize("x", [0.25, 1.0, 7.0, 120.0, 1e4])
    def test_ray_quadrature_oracle(self, x):
        # erf(sqrt(ix)) = (2/sqrt(pi)) e^(i pi/4) int_0^sqrt(x) e^(-i s^2) ds
        from scipy.integrate import simpson

        n = 2_000_001
        s = np.linspace(0.0, math.sqrt(x), n)
        vals = np.exp(-1j * s ** 2)
        ref = (2.0 / math.sqrt(math.pi)) * np.exp(1j * math.pi / 4) \
            * simpson(vals, x=s)
        assert abs(erf_sqrt_i(x) - ref) < 1e-10

    def test_schwarz_reflection_structure(self):
        # The conjugate ray integral flips the imaginary part.
        x = 2.7
        n = 500_001
        s = np.linspace(0.0, math.sqrt(x), n)
        ref_neg = (2.0 / math.sqrt(math.pi)) * np.exp(-1j * math.pi / 4) \
            * np.trapezoid(np.exp(1j * s ** 2), s)
        assert abs(erf_sqrt_i(x).conjugate() - ref_neg) < 1e-9


class TestQuadrature:
    @pytest.mark.parametrize("order", [2, 5, 20, 64, 200])
    def test_rule_invariants(self, order):
        rule = gauss_legendre(order)
        assert rule.order == order
        assert abs(np.sum(rule.weights) - 2.0) < 1e-13
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.allclose(rule.nodes, -rule.nodes[::-1], atol=1e-15)
        assert np.all(rule.weights > 0)

    @settings(max_examples=40, deadline=None)
    @given(order=st.integers(min_value=1, max_value=40))
    def test_polynomial_exactness(self, order):
        rule = gauss_legendre(order)
        # odd monomial of top degree integrates to zero
        top_odd = 2 * order - 1
        assert abs(np.sum(rule.weights * rule.nodes ** top_odd)) < 1e-13
        # even monomial of next-to-top degree integrates exactly
        deg = 2 * order - 2
        exact = 2.0 / (deg + 1)
        assert abs(np.sum(rule.weights * rule.nodes ** deg) - exact) < 1e-12

    def test_panels_cover_interval(self):
        rule = gauss_legendre(8)
        x, w = rule.on_panels(0.0, 1.0, 3)
        assert abs(np.sum(w) - 1.0) < 1e-14
        assert abs(np.sum(w * x ** 2) - 1.0 / 3.0) < 1e-14

    def test_rules_are_frozen(self):
        rule = gauss_legendre(12)
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0
