import itertools
import random

import pytest
from django.conf import settings
from django.test import SimpleTestCase, override_settings
from sympy import Matrix
from sympy.polys.domains import QQ

from oracle.models import EnumerationDomain
from oracle.operations import brute_force_common_zeros, sylvester_resultant
from polycore.fields import RATIONALS, prime_field
from polycore.grammar import normalize_point, parse_poly
from polycore.models import MultiPoly, xy_names, y_names
from polycore.operations import evaluate, monomials_of_degree, random_form, specialize
from utils.exceptions import HypothesisViolation, PreconditionError, UsageError
from .linalg import characteristic_quotient, dual_det, kernel_det
from .models import DegreeVector, DualScalar, MacaulayPlan, MacaulaySystem
from .operations import (
    _quotient,
    descent_check,
    poisson_check,
    random_unimodular,
    resultant_gradient,
    resultant_poly,
    resultant_scalar,
    resultant_x_degree,
    unique_common_zero,
)

F = prime_field(10007)


def pure_power(field, nvars, i, d):
    monomial = tuple(d if k == i else 0 for k in range(nvars))
    return MultiPoly.from_terms(field, y_names(nvars), {monomial: 1}, d)


def random_system(rng, field, nvars, max_degree=2):
    degrees = [rng.randint(1, max_degree) for _ in range(nvars)]
    return [random_form(field, nvars, d, rng, names=y_names(nvars)) for d in degrees], degrees


def random_bihomogeneous(rng, field, half, x_degree, y_degree):
    terms = {}
    for mx in monomials_of_degree(half, x_degree):
        for my in monomials_of_degree(half, y_degree):
            terms[mx + my] = field.random_element(rng)
    return MultiPoly.from_terms(field, xy_names(half), terms, (x_degree, y_degree))


def y(text, nvars, field=F):
    return parse_poly(text, field, names=y_names(nvars))


class DegreeVectorTests(SimpleTestCase):

    def test_critical_degree_and_weights(self):
        degrees = DegreeVector((1, 2, 3, 1))
        self.assertEqual(degrees.critical_degree, 4)
        self.assertEqual(degrees.slot_weight(0), 6)
        self.assertEqual(degrees.slot_weight(2), 2)
        self.assertEqual(degrees.total_weight, 6 + 3 + 2 + 6)

    def test_rejects_nonpositive_degrees(self):
        with self.assertRaises(HypothesisViolation):
            DegreeVector((1, 0))

    def test_plan_has_one_row_per_monomial(self):
        plan = MacaulayPlan.for_degrees(DegreeVector((2, 2, 2)))
        self.assertEqual(plan.size, 15)
        self.assertEqual(len(plan.minor), 3)
        for k, (slot, columns) in enumerate(zip(plan.row_slot, plan.row_columns)):
            self.assertEqual(columns[plan.pure_power_position(slot)], k)


class DeterminantTests(SimpleTestCase):

    def test_agrees_with_sympy_matrix(self):
        rows = [[2, -1, 0], [1, 3, 4], [0, 5, -2]]
        expected = int(Matrix(rows).det())
        self.assertEqual(kernel_det([[QQ(c) for c in row] for row in rows], RATIONALS), QQ(expected))
        F101 = prime_field(101)
        self.assertEqual(kernel_det([[c % 101 for c in row] for row in rows], F101), expected % 101)

    def test_singular_matrix(self):
        self.assertEqual(kernel_det([[1, 2], [2, 4]], prime_field(7)), 0)

    def test_characteristic_quotient(self):
        # det(M - sI) / det(M' - sI) = (2 - s)(3 - s) / (3 - s) = 2 - s
        entries = [[QQ(2), QQ(1)], [QQ(0), QQ(3)]]
        self.assertEqual(characteristic_quotient(entries, [1], QQ), QQ(2))
        self.assertEqual(characteristic_quotient(entries, [], QQ), QQ(6))

    def test_dual_determinant(self):
        # det([[1 + eps, 2], [3, 4 + 2 eps]]) = -2 + 6 eps
        value = dual_det([[1, 2], [3, 4]], [[1, 0], [0, 2]], F)
        self.assertEqual(value, DualScalar(F.kernel(F(-2)), 6, F))

    def test_dual_arithmetic(self):
        a = DualScalar(2, 3, F)
        b = DualScalar(4, 5, F)
        self.assertEqual(a * b, DualScalar(8, 22, F))
        self.assertEqual((a / b) * b, a)
        with self.assertRaises(ZeroDivisionError):
            DualScalar(0, 1, F).inverse()


class NormalizationTests(SimpleTestCase):

    def test_pure_powers_give_one(self):
        for nvars in range(1, 5):
            for degrees in itertools.product(range(1, 4), repeat=nvars):
                polys = [pure_power(F, nvars, i, d) for i, d in enumerate(degrees)]
                self.assertEqual(resultant_scalar(polys), F.one, degrees)

    def test_pure_powers_over_rationals(self):
        for degrees in itertools.product(range(1, 3), repeat=3):
            polys = [pure_power(RATIONALS, 3, i, d) for i, d in enumerate(degrees)]
            self.assertEqual(resultant_scalar(polys), RATIONALS.one)

    def test_linear_forms_give_the_determinant(self):
        rng = random.Random(17)
        for _ in range(5):
            matrix = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
            forms = [
                MultiPoly.from_terms(RATIONALS, y_names(3), {tuple(int(k == j) for k in range(3)): c for j, c in enumerate(row)}, 1)
                for row in matrix
            ]
            self.assertEqual(resultant_scalar(forms, degrees=[1, 1, 1]), RATIONALS(int(Matrix(matrix).det())))

    def test_multihomogeneity(self):
        rng = random.Random(23)
        for _ in range(100):
            nvars = rng.randint(2, 3)
            polys, degrees = random_system(rng, F, nvars)
            slot = rng.randrange(nvars)
            lam = F.random_element(rng, nonzero=True)
            scaled = list(polys)
            scaled[slot] = polys[slot].scale(lam)
            weight = DegreeVector(tuple(degrees)).slot_weight(slot)
            self.assertEqual(resultant_scalar(scaled, degrees), lam ** weight * resultant_scalar(polys, degrees))

    def test_zero_slot_gives_zero(self):
        polys = [MultiPoly.zero(F, y_names(2)), y('y0^2+y1^2', 2)]
        self.assertEqual(resultant_scalar(polys, degrees=[1, 2]), F.zero)

    def test_zero_slot_needs_explicit_degrees(self):
        with self.assertRaises(UsageError):
            resultant_scalar([MultiPoly.zero(F, y_names(2)), y('y1', 2)])

    def test_common_zero_gives_zero(self):
        rng = random.Random(29)
        for _ in range(10):
            polys, degrees = random_system(rng, F, 3)
            # Drop every y0^d term so that (1:0:0) is a common zero.
            stripped = [
                MultiPoly.from_terms(F, p.names, {m: c for m, c in p.element.items() if m[0] != d}, d)
                for p, d in zip(polys, degrees)
            ]
            if any(p.is_zero for p in stripped):
                continue
            self.assertEqual(resultant_scalar(stripped, degrees), F.zero)

    def test_wrong_number_of_forms(self):
        with self.assertRaises(UsageError):
            resultant_scalar([y('y0', 3), y('y1', 3)])


class SylvesterAgreementTests(SimpleTestCase):

    def test_unit_case(self):
        self.assertEqual(sylvester_resultant(y('y0', 2), y('y1', 2)), F.one)

    def test_shared_root(self):
        self.assertEqual(resultant_scalar([y('y0^2-y1^2', 2), y('y0-y1', 2)]), F.zero)

    def test_random_binary_forms(self):
        rng = random.Random(31)
        for _ in range(100):
            a, b = rng.randint(1, 6), rng.randint(1, 6)
            u = random_form(F, 2, a, rng, names=y_names(2))
            v = random_form(F, 2, b, rng, names=y_names(2))
            self.assertEqual(resultant_scalar([u, v], degrees=[a, b]), sylvester_resultant(u, v))


class SingularMinorTests(SimpleTestCase):
    """The reduced minor of this system vanishes in the original coordinates."""

    def setUp(self):
        self.polys = [y('y0*y1+y2^2', 3), y('y1^2+y0*y2', 3), y('y0^2+y1*y2', 3)]

    def test_minor_is_singular(self):
        system = MacaulaySystem.from_polys(self.polys)
        self.assertIsNone(_quotient(system.plan, system.coefficient_vectors(), F))

    def test_unimodular_retry_matches_characteristic_fallback(self):
        retried = resultant_scalar(self.polys, seed=1)
        no_retries = dict(settings.FLEXLOCUS, MINOR_RETRIES=0)
        with override_settings(FLEXLOCUS=no_retries):
            fallback = resultant_scalar(self.polys, seed=1)
        self.assertEqual(retried, fallback)

    def test_unimodular_change_keeps_the_resultant(self):
        from polycore.operations import linear_substitution
        T = random_unimodular(F, 3, random.Random(3))
        moved = [linear_substitution(p, T) for p in self.polys]
        self.assertEqual(resultant_scalar(moved), resultant_scalar(self.polys))

    def test_characteristic_fallback_over_a_small_field(self):
        F7 = prime_field(7)
        texts = ['y0*y1+y2^2', 'y1^2+y0*y2', 'y0^2+y1*y2']
        rational = resultant_scalar([y(t, 3, RATIONALS) for t in texts])
        no_retries = dict(settings.FLEXLOCUS, MINOR_RETRIES=0)
        with override_settings(FLEXLOCUS=no_retries):
            value = resultant_scalar([y(t, 3, F7) for t in texts])
        self.assertEqual(value, F7.parse_scalar(RATIONALS.format_scalar(rational)))

    def test_gradient_fallback_over_a_small_field(self):
        # No y0^2 term in the first form keeps the reduced minor singular.
        F7 = prime_field(7)
        polys = [y(t, 3, F7) for t in ('y0*y1+y2^2', 'y1^2+y0*y2', 'y1*y2+y0*y1+y2^2')]
        with_retries = resultant_gradient(polys, slot=0, seed=5)
        no_retries = dict(settings.FLEXLOCUS, MINOR_RETRIES=0)
        with override_settings(FLEXLOCUS=no_retries):
            eta, gradient = unique_common_zero(polys)
        self.assertEqual(normalize_point(eta, F7), (F7(1), F7(0), F7(0)))
        self.assertEqual(gradient.values, with_retries.values)


def product_of_linear_forms(rng, field, nvars, degree):
    form = random_form(field, nvars, 1, rng, names=y_names(nvars))
    for _ in range(degree - 1):
        form = form * random_form(field, nvars, 1, rng, names=y_names(nvars))
    return form


class SmallFieldTests(SimpleTestCase):
    """Vanishing of Res against exhaustive search for common zeros."""

    def test_sparse_system_with_a_common_zero(self):
        F7 = prime_field(7)
        polys = [
            y('2*y0^2*y1', 3, F7),
            y('3*y0^2*y1+5*y0^2*y2', 3, F7),
            y('5*y0*y1^2+2*y1^2*y2+y1*y2^2', 3, F7),
        ]
        self.assertIn(((0, 0), (0, 0), (1, 0)), brute_force_common_zeros(polys, EnumerationDomain(7, 1, 3)))
        self.assertEqual(resultant_scalar(polys), F7.zero)

    def test_rational_common_zero_forces_vanishing(self):
        rng = random.Random(61)
        for prime in (7, 13, 31):
            field = prime_field(prime)
            for _ in range(40):
                nvars = rng.randint(2, 3)
                degrees = [rng.randint(1, 3) for _ in range(nvars)]
                polys = [random_form(field, nvars, d, rng, names=y_names(nvars), density=0.4) for d in degrees]
                value = resultant_scalar(polys, degrees, rng=rng)
                if brute_force_common_zeros(polys, EnumerationDomain(prime, 1, nvars)):
                    self.assertEqual(value, field.zero, (prime, degrees))

    def test_quadratic_extension_sweep(self):
        rng = random.Random(67)
        F7 = prime_field(7)
        for _ in range(30):
            nvars = rng.randint(2, 3)
            degrees = [rng.randint(1, 3) for _ in range(nvars)]
            polys = [random_form(F7, nvars, d, rng, names=y_names(nvars), density=0.4) for d in degrees]
            value = resultant_scalar(polys, degrees, rng=rng)
            if brute_force_common_zeros(polys, EnumerationDomain(7, 2, nvars)):
                self.assertEqual(value, F7.zero, degrees)

    def test_binary_quadratics_vanish_exactly_at_shared_roots(self):
        # Roots of binary forms of degree <= 2 over F_p all lie in F_{p^2}.
        rng = random.Random(73)
        for prime in (7, 13):
            field = prime_field(prime)
            domain = EnumerationDomain(prime, 2, 2)
            for _ in range(40):
                degrees = [rng.randint(1, 2), rng.randint(1, 2)]
                polys = [random_form(field, 2, d, rng, names=y_names(2), density=0.5) for d in degrees]
                shared = bool(brute_force_common_zeros(polys, domain))
                self.assertEqual(resultant_scalar(polys, degrees, rng=rng) == field.zero, shared, degrees)

    def test_products_of_linear_forms_vanish_exactly_at_rational_zeros(self):
        rng = random.Random(71)
        for prime in (7, 31):
            field = prime_field(prime)
            for _ in range(30):
                nvars = rng.randint(2, 3)
                degrees = [rng.randint(1, 3) for _ in range(nvars)]
                polys = [product_of_linear_forms(rng, field, nvars, d) for d in degrees]
                found = bool(brute_force_common_zeros(polys, EnumerationDomain(prime, 1, nvars)))
                self.assertEqual(resultant_scalar(polys, degrees, rng=rng) == field.zero, found, (prime, degrees))

    @pytest.mark.slow
    def test_quadratic_extension_sweep_over_f13(self):
        rng = random.Random(79)
        F13 = prime_field(13)
        for _ in range(20):
            degrees = [rng.randint(1, 3) for _ in range(3)]
            polys = [random_form(F13, 3, d, rng, names=y_names(3), density=0.4) for d in degrees]
            value = resultant_scalar(polys, degrees, rng=rng)
            if brute_force_common_zeros(polys, EnumerationDomain(13, 2, 3)):
                self.assertEqual(value, F13.zero, degrees)


class GradientTests(SimpleTestCase):

    def test_line_and_reducible_conic(self):
        eta, gradient = unique_common_zero([y('y0', 2), y('y0*y1', 2)])
        self.assertEqual(gradient.slot, 0)
        self.assertEqual(normalize_point(eta, F), (F(0), F(1)))

    def test_nonzero_resultant_is_a_precondition_error(self):
        with self.assertRaises(PreconditionError):
            resultant_gradient([y('y0', 2), y('y1', 2)], slot=0)

    def test_zero_slot_gradient_points_at_remaining_zero(self):
        gradient = resultant_gradient([MultiPoly.zero(F, y_names(2)), y('y1', 2)], slot=0, degrees=[1, 1])
        self.assertEqual(gradient.common_zero(), (F(1), F(0)))

    def test_hyperplanes_through_a_point_with_a_quadric(self):
        rng = random.Random(37)
        for _ in range(10):
            eta = (F.random_element(rng), F.random_element(rng), F.random_element(rng, nonzero=True))
            forms = []
            for _ in range(2):
                a0, a1 = F.random_element(rng), F.random_element(rng)
                a2 = -(a0 * eta[0] + a1 * eta[1]) / eta[2]
                forms.append(MultiPoly.from_terms(F, y_names(3), {(1, 0, 0): a0, (0, 1, 0): a1, (0, 0, 1): a2}, 1))
            g = random_form(F, 3, 2, rng, names=y_names(3))
            g = g - MultiPoly.from_terms(F, y_names(3), {(0, 0, 2): evaluate(g, eta) / eta[2] ** 2}, 2)
            found, _ = unique_common_zero(forms + [g])
            self.assertIsNotNone(found)
            self.assertEqual(normalize_point(found, F), normalize_point(eta, F))


class ClassicalIdentityTests(SimpleTestCase):

    def test_poisson_formula(self):
        rng = random.Random(41)
        for _ in range(100):
            nvars = rng.randint(2, 3)
            e = rng.randint(1, 3)
            g0 = random_form(F, nvars, e, rng, names=y_names(nvars))
            g0_prime = random_form(F, nvars, e, rng, names=y_names(nvars))
            forms = [random_form(F, nvars, 1, rng, names=y_names(nvars)) for _ in range(nvars - 1)]
            self.assertTrue(poisson_check(g0, g0_prime, forms, rng=rng))

    def test_poisson_rejects_dependent_forms(self):
        ell = y('y0+y1', 3)
        with self.assertRaises(PreconditionError):
            poisson_check(y('y0^2', 3), y('y1^2', 3), [ell, ell.scale(2)])

    def test_descent(self):
        rng = random.Random(43)
        for _ in range(100):
            nvars = rng.randint(2, 3)
            degrees = [rng.randint(1, 2) for _ in range(nvars - 1)]
            polys = [random_form(F, nvars, d, rng, names=y_names(nvars)) for d in degrees]
            self.assertTrue(descent_check(polys, rng.randint(1, 3), degrees, rng=rng))

    def test_descent_with_degenerate_restriction(self):
        polys = [y('y2', 3), y('y0^2+y1*y2+y1^2', 3)]
        self.assertTrue(descent_check(polys, 2))


class ResultantOverPolynomialRingTests(SimpleTestCase):

    def test_linear_pair_is_a_determinant(self):
        names = xy_names(2)
        polys = [
            parse_poly('x0*y0+x1*y1', RATIONALS, names=names),
            parse_poly('x1*y0-x0*y1', RATIONALS, names=names),
        ]
        R = resultant_poly(polys)
        self.assertEqual(R, parse_poly('-x0^2-x1^2', RATIONALS, names=('x0', 'x1')))

    def test_matches_specialized_scalar_resultants(self):
        rng = random.Random(47)
        bigrades = [(1, 1), (1, 1), (2, 1)]
        polys = [random_bihomogeneous(rng, F, 3, e, d) for e, d in bigrades]
        R = resultant_poly(polys, rng=rng)
        self.assertEqual(R.homogeneous_degree, resultant_x_degree(bigrades, DegreeVector((1, 1, 1))))
        for _ in range(50):
            point = tuple(F.random_element(rng) for _ in range(3))
            specialized = [specialize(p, point) for p in polys]
            self.assertEqual(evaluate(R, point), resultant_scalar(specialized, degrees=[1, 1, 1]))

    def test_binary_case_with_higher_degrees(self):
        rng = random.Random(53)
        polys = [random_bihomogeneous(rng, F, 2, 2, 2), random_bihomogeneous(rng, F, 2, 1, 3)]
        R = resultant_poly(polys, rng=rng)
        self.assertEqual(R.homogeneous_degree, 2 * 3 + 1 * 2)
        point = (F(3), F(5))
        specialized = [specialize(p, point) for p in polys]
        self.assertEqual(evaluate(R, point), sylvester_resultant(*specialized))

    def test_bound_below_degree_is_rejected(self):
        names = xy_names(2)
        polys = [parse_poly('x0*y0+x1*y1', F, names=names), parse_poly('x1*y0-x0*y1', F, names=names)]
        with self.assertRaises(UsageError):
            resultant_poly(polys, bound=1)

    def test_zero_slot_gives_zero_polynomial(self):
        names = xy_names(2)
        polys = [MultiPoly.zero(F, names), parse_poly('x0*y0+x1*y1', F, names=names)]
        self.assertTrue(resultant_poly(polys, degrees=[1, 1]).is_zero)
