from django.conf import settings
from django.test import SimpleTestCase, override_settings

from polycore.factories import RandomFormFactory
from polycore.fields import RATIONALS, prime_field
from polycore.grammar import parse_poly
from polycore.models import Hypersurface, y_names
from utils.exceptions import EnumerationTooLarge, HypothesisViolation, UsageError
from .models import EnumerationDomain, QuadraticExtension
from .operations import brute_force_common_zeros, brute_force_cone, hessian_flex_oracle, sylvester_resultant


def curve(text, field=RATIONALS):
    return Hypersurface.from_form(parse_poly(text, field, nvars=3))


class SylvesterTests(SimpleTestCase):

    def binary(self, text):
        return parse_poly(text, RATIONALS, names=y_names(2))

    def test_linear_against_quadratic(self):
        # Res(y0 - 2y1, v) = v(2, 1)
        value = sylvester_resultant(self.binary('y0-2*y1'), self.binary('y0^2-y1^2'))
        self.assertEqual(value, RATIONALS(3))

    def test_pure_powers(self):
        self.assertEqual(sylvester_resultant(self.binary('y0^3'), self.binary('y1^2')), RATIONALS.one)

    def test_zero_form(self):
        zero = self.binary('y0') - self.binary('y0')
        self.assertEqual(sylvester_resultant(zero, self.binary('y1')), RATIONALS.zero)

    def test_rejects_ternary_forms(self):
        u = parse_poly('y0+y2', RATIONALS, names=y_names(3))
        with self.assertRaises(HypothesisViolation):
            sylvester_resultant(u, u)


class HessianOracleTests(SimpleTestCase):

    def test_fermat_cubic(self):
        f = parse_poly('x0^3+x1^3+x2^3', RATIONALS)
        self.assertEqual(hessian_flex_oracle(f), parse_poly('216*x0*x1*x2', RATIONALS))

    def test_smooth_conic_has_constant_hessian(self):
        H = hessian_flex_oracle(parse_poly('x0^2+x1^2+x2^2', RATIONALS))
        self.assertEqual(H.homogeneous_degree, 0)
        self.assertEqual(H.coefficient((0, 0, 0)), RATIONALS(8))

    def test_degree_is_three_d_minus_six(self):
        for d in (3, 4, 5):
            H = hessian_flex_oracle(RandomFormFactory(degree=d))
            self.assertEqual(H.homogeneous_degree, 3 * d - 6)

    def test_over_prime_field(self):
        F = prime_field(13)
        f = parse_poly('x0^3+x1^3+x2^3', F)
        self.assertEqual(hessian_flex_oracle(f), parse_poly('8*x0*x1*x2', F))

    def test_rejects_surfaces(self):
        with self.assertRaises(HypothesisViolation):
            hessian_flex_oracle(parse_poly('x0^3+x1^3+x2^3+x3^3', RATIONALS))


class QuadraticExtensionTests(SimpleTestCase):

    def test_smallest_non_residue(self):
        self.assertEqual(QuadraticExtension(7).non_residue, 3)
        self.assertEqual(QuadraticExtension(13).non_residue, 2)

    def test_every_nonzero_element_is_invertible(self):
        arithmetic = QuadraticExtension(7)
        for u in arithmetic.elements(2):
            if u == (0, 0):
                continue
            self.assertEqual(arithmetic.mul(u, arithmetic.inverse(u)), (1, 0))

    def test_zero_has_no_inverse(self):
        with self.assertRaises(ZeroDivisionError):
            QuadraticExtension(7).inverse((0, 0))


class EnumerationDomainTests(SimpleTestCase):

    def test_point_counts(self):
        for prime, degree, nvars in ((7, 1, 3), (5, 1, 4), (3, 2, 3)):
            domain = EnumerationDomain(prime, degree, nvars)
            q = prime ** degree
            points = list(domain.points())
            self.assertEqual(len(points), (q ** nvars - 1) // (q - 1))
            self.assertEqual(len(set(points)), len(points))

    def test_points_are_normalized(self):
        domain = EnumerationDomain(5, 2, 3)
        for point in domain.points():
            self.assertEqual(domain.normalize(point), point)

    def test_normalize_scales_to_leading_one(self):
        domain = EnumerationDomain(7, 1, 3)
        self.assertEqual(domain.normalize(((0, 0), (3, 0), (6, 0))), ((0, 0), (1, 0), (2, 0)))

    def test_rejects_bad_parameters(self):
        with self.assertRaises(HypothesisViolation):
            EnumerationDomain(7, 3, 3)
        with self.assertRaises(HypothesisViolation):
            EnumerationDomain(9, 1, 3)

    def test_refuses_above_the_limit(self):
        limit = dict(settings.FLEXLOCUS, ENUMERATION_LIMIT=100)
        with override_settings(FLEXLOCUS=limit):
            domain = EnumerationDomain(7, 2, 3)
            with self.assertRaises(EnumerationTooLarge) as raised:
                domain.check_size()
            self.assertEqual(raised.exception.code, 'enumeration_limit')
            self.assertEqual(len(list(EnumerationDomain(7, 1, 3).points())), 57)


class BruteForceConeTests(SimpleTestCase):

    def setUp(self):
        self.conic = curve('x0^2+x1^2-x2^2')
        self.fermat = curve('x0^3+x1^3+x2^3')

    def test_tangent_hyperplane_count(self):
        # The tangent line x0 = x2 at (1:0:1), without the point itself.
        for degree, expected in ((1, 7), (2, 49)):
            cone = brute_force_cone(self.conic, (1, 0, 1), 1, EnumerationDomain(7, degree, 3))
            self.assertEqual(len(cone), expected)
            for q in cone:
                self.assertEqual(q[0], q[2])

    def test_conic_has_no_flexes(self):
        self.assertEqual(brute_force_cone(self.conic, (1, 0, 1), 2, EnumerationDomain(7, 2, 3)), [])

    def test_fermat_flex_line(self):
        arithmetic = QuadraticExtension(7)
        cone = brute_force_cone(self.fermat, (1, -1, 0), 2, EnumerationDomain(7, 1, 3))
        self.assertEqual(len(cone), 7)
        for q in cone:
            self.assertEqual(arithmetic.add(q[0], q[1]), (0, 0))

    def test_points_are_sorted(self):
        cone = brute_force_cone(self.conic, (1, 0, 1), 1, EnumerationDomain(5, 2, 3))
        self.assertEqual(cone, sorted(cone, key=lambda q: (next(i for i, c in enumerate(q) if c != (0, 0)), q)))

    def test_argument_checks(self):
        with self.assertRaises(UsageError):
            brute_force_cone(self.conic, (1, 0, 1), 3, EnumerationDomain(7, 1, 3))
        with self.assertRaises(UsageError):
            brute_force_cone(self.conic, (1, 0, 1), 1, EnumerationDomain(7, 1, 4))


class CommonZeroTests(SimpleTestCase):

    def binary(self, text, field=prime_field(7)):
        return parse_poly(text, field, names=y_names(2))

    def test_shared_linear_factor(self):
        zeros = brute_force_common_zeros([self.binary('y0*y1'), self.binary('y0')], EnumerationDomain(7, 1, 2))
        self.assertEqual(zeros, [((0, 0), (1, 0))])

    def test_zeros_in_the_quadratic_extension(self):
        # -1 is not a square mod 7.
        forms = [self.binary('y0^2+y1^2'), self.binary('y0^3+y0*y1^2')]
        self.assertEqual(brute_force_common_zeros(forms, EnumerationDomain(7, 1, 2)), [])
        self.assertEqual(len(brute_force_common_zeros(forms, EnumerationDomain(7, 2, 2))), 2)

    def test_rational_forms_are_reduced(self):
        forms = [self.binary('y0-7*y1', RATIONALS), self.binary('y0', RATIONALS)]
        self.assertEqual(brute_force_common_zeros(forms, EnumerationDomain(7, 1, 2)), [((0, 0), (1, 0))])

    def test_forms_must_match_the_domain(self):
        with self.assertRaises(UsageError):
            brute_force_common_zeros([self.binary('y0'), self.binary('y1')], EnumerationDomain(7, 1, 3))
