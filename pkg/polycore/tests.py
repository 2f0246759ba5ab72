import random

from django.test import SimpleTestCase
from sympy import factorial

from utils.exceptions import HypothesisViolation, UsageError
from .factories import HypersurfaceFactory, RandomFormFactory
from .fields import RATIONALS, field_from_spec, prime_field
from .grammar import format_point, format_poly, normalize_point, parse_point, parse_poly
from .models import Hypersurface, MultiPoly, xy_names
from .operations import (
    add,
    evaluate,
    interpolate_univariate,
    is_squarefree,
    iter_projective_points,
    linear_substitution,
    mul,
    normal_form,
    partial_derivative,
    polynomial_division,
    power,
    random_point,
    scale,
    specialize,
    substitute_line,
    taylor_system,
    univariate_coefficients,
    valuation,
)

F101 = prime_field(101)
F10007 = prime_field(10007)


def q(text, **kwargs):
    return parse_poly(text, RATIONALS, **kwargs)


class FieldTests(SimpleTestCase):

    def test_field_specs(self):
        self.assertEqual(field_from_spec('q'), RATIONALS)
        self.assertEqual(field_from_spec('fp:101').modulus, 101)
        self.assertEqual(str(F101), 'F_101')

    def test_rejects_non_primes_and_two(self):
        for spec in ('fp:4', 'fp:2', 'fp:abc', 'zz'):
            with self.assertRaises(HypothesisViolation):
                field_from_spec(spec)

    def test_rational_scalars_in_prime_field(self):
        field = prime_field(7)
        self.assertEqual(field.format_scalar(field('1/2')), '4')
        self.assertEqual(field.format_scalar(field(-1)), '6')
        with self.assertRaises(HypothesisViolation):
            field('1/7')

    def test_rationals_are_lowest_terms(self):
        self.assertEqual(RATIONALS.format_scalar(RATIONALS('6/4')), '3/2')
        self.assertEqual(RATIONALS.format_scalar(RATIONALS('-6/4')), '-3/2')


class ArithmeticTests(SimpleTestCase):

    def test_difference_of_squares(self):
        product = q('x0+x1') * q('x0-x1')
        self.assertEqual(product, q('x0^2-x1^2'))
        self.assertEqual(product.homogeneous_degree, 2)

    def test_zero_is_absorbing(self):
        f = q('x0^2+3*x0*x1')
        self.assertTrue((f * 0).is_zero)
        self.assertEqual(format_poly(f * 0), '0')

    def test_cube_of_binomial(self):
        self.assertEqual(q('x0+x1') ** 3, q('x0^3+3*x0^2*x1+3*x0*x1^2+x1^3'))

    def test_ring_axioms_on_random_triples(self):
        rng = random.Random(5)
        for _ in range(10):
            a, b, c = (RandomFormFactory(nvars=3, degree=rng.randint(1, 3)) for _ in range(3))
            self.assertEqual((a * b) * c, a * (b * c))
            self.assertEqual(a * (b + c), a * b + a * c)

    def test_grades(self):
        a = RandomFormFactory(nvars=3, degree=2)
        b = RandomFormFactory(nvars=3, degree=3)
        self.assertEqual((a * b).grade, 5)
        self.assertIsNone((a + b).grade)
        self.assertEqual((a ** 3).grade, 6)
        self.assertEqual(a.scale(5).grade, 2)

    def test_functional_forms(self):
        a = q('x0+x1')
        b = q('x0-x1')
        self.assertEqual(mul(a, b), q('x0^2-x1^2'))
        self.assertEqual(add(a, b), q('2*x0', nvars=2))
        self.assertEqual(scale(a, RATIONALS('1/2')), q('1/2*x0+1/2*x1'))
        self.assertEqual(mul(a, 3), scale(a, 3))
        self.assertEqual(power(a, 2), q('x0^2+2*x0*x1+x1^2'))
        self.assertEqual(power(a, 2).grade, 2)
        self.assertIsNone(add(a, q('x0^2', nvars=2)).grade)

    def test_declared_grade_is_checked(self):
        with self.assertRaises(HypothesisViolation):
            q('x0^2+x1', grade=2)

    def test_mismatched_operands(self):
        with self.assertRaises(UsageError):
            q('x0+x1') + q('x0+x1+x2')
        with self.assertRaises(UsageError):
            q('x0') * parse_poly('x0', F101)


class GrammarTests(SimpleTestCase):

    def test_canonical_text(self):
        self.assertEqual(format_poly(q('x0^3 + x1^3 + x2^3')), 'x0^3+x1^3+x2^3')
        self.assertEqual(format_poly(q('x1^2 - x0^2')), '-x0^2+x1^2')
        self.assertEqual(format_poly(q('x0*x2-x1^2')), '-x1^2+x0*x2')
        self.assertEqual(format_poly(parse_poly('-x0', prime_field(7))), '6*x0')
        self.assertEqual(format_poly(q('1/2*x0 + 3')), '1/2*x0+3')

    def test_round_trip(self):
        for seed in range(5):
            f = RandomFormFactory(nvars=4, degree=3, seed=seed)
            self.assertEqual(q(format_poly(f), nvars=4), f)

    def test_bihomogeneous_ring_inferred(self):
        f = q('x0*y1 - x1*y0')
        self.assertEqual(f.names, xy_names(2))

    def test_syntax_errors(self):
        for text in ('', 'x0^', 'x0++x1', 'x0*', 'z1', '3x0'):
            with self.assertRaises(HypothesisViolation):
                q(text)

    def test_points(self):
        self.assertEqual(normalize_point(parse_point('2,4,6', RATIONALS), RATIONALS), (1, 2, 3))
        field = prime_field(13)
        point = normalize_point(parse_point('0,2,3', field), field)
        self.assertEqual(format_point(point, field), '0,1,8')
        with self.assertRaises(HypothesisViolation):
            normalize_point((0, 0), RATIONALS)
        with self.assertRaises(HypothesisViolation):
            parse_point('1,,2', RATIONALS)


class DerivativeAndEvaluationTests(SimpleTestCase):

    def test_power_rule(self):
        self.assertEqual(partial_derivative(q('x0^3'), 0), q('3*x0^2'))

    def test_absent_variable(self):
        self.assertTrue(partial_derivative(q('x0*x1', nvars=3), 2).is_zero)

    def test_euler_identity(self):
        for degree in range(1, 6):
            f = RandomFormFactory(nvars=3, degree=degree)
            lhs = sum(
                (q(f'x{i}', nvars=3) * partial_derivative(f, i) for i in range(3)),
                MultiPoly.zero(RATIONALS, f.names),
            )
            self.assertEqual(lhs, f.scale(degree))

    def test_evaluate(self):
        self.assertEqual(evaluate(q('x0^2+x1'), (2, 3)), 7)
        self.assertEqual(evaluate(q('x0^3+x1^3+x2^3'), (1, -1, 0)), 0)

    def test_homogeneity(self):
        rng = random.Random(3)
        f = RandomFormFactory(nvars=3, degree=4)
        p = random_point(RATIONALS, 3, rng)
        lam = RATIONALS(5)
        scaled = tuple(lam * c for c in p)
        self.assertEqual(evaluate(f, scaled), lam ** 4 * evaluate(f, p))


class LineRestrictionTests(SimpleTestCase):

    def test_tangent_line_of_conic(self):
        u = substitute_line(q('x0*x2-x1^2'), (1, 0, 0), (0, 1, 0))
        self.assertEqual(univariate_coefficients(u), [0, 0, -1])
        self.assertEqual(valuation(u), 2)

    def test_direction_along_point(self):
        f = q('x0^3+x1^3+x2^3')
        self.assertTrue(substitute_line(f, (1, -1, 0), (1, -1, 0)).is_zero)
        self.assertEqual(valuation(substitute_line(f, (1, -1, 0), (1, -1, 0))), float('inf'))

    def test_zero_direction(self):
        f = q('x0^2+x1^2+x2^2')
        self.assertEqual(univariate_coefficients(substitute_line(f, (1, 2, 3), (0, 0, 0))), [14])


class TaylorSystemTests(SimpleTestCase):

    def test_square(self):
        f_1, f_2 = taylor_system(q('x0^2'))
        names = xy_names(1)
        self.assertEqual(f_1, q('2*x0*y0', names=names))
        self.assertEqual(f_2, q('2*y0^2', names=names))
        self.assertEqual(f_1.grade, (1, 1))
        self.assertEqual(f_2.grade, (0, 2))

    def test_top_term_is_factorial_times_form(self):
        f = RandomFormFactory(nvars=3, degree=3)
        top = taylor_system(f)[-1]
        expected = {(0, 0, 0) + m: c * 6 for m, c in f.element.items()}
        self.assertEqual(top, MultiPoly.from_terms(RATIONALS, xy_names(3), expected))

    def test_taylor_consistency(self):
        rng = random.Random(11)
        for trial in range(50):
            nvars = rng.randint(2, 4)
            degree = rng.randint(1, 5)
            f = RandomFormFactory(nvars=nvars, degree=degree, density=0.6)
            p = random_point(RATIONALS, nvars, rng)
            r = random_point(RATIONALS, nvars, rng)
            coefficients = univariate_coefficients(substitute_line(f, p, r))
            coefficients += [0] * (degree + 1 - len(coefficients))
            self.assertEqual(coefficients[0], evaluate(f, p))
            for k, f_k in enumerate(taylor_system(f), start=1):
                self.assertEqual(coefficients[k] * int(factorial(k)), evaluate(f_k, p + r))

    def test_vanishes_on_diagonal_at_points_of_the_curve(self):
        for f_k in taylor_system(q('x0^3+x1^3+x2^3')):
            self.assertEqual(evaluate(f_k, (1, -1, 0, 1, -1, 0)), 0)

    def test_specialize_gives_cone_equations(self):
        f_1 = taylor_system(q('x0^3+x1^3+x2^3'))[0]
        self.assertEqual(specialize(f_1, (1, -1, 0)), q('3*y0+3*y1', nvars=3))


class SquarefreeTests(SimpleTestCase):

    def test_visible_square(self):
        self.assertFalse(is_squarefree(q('x0^2*x1')))

    def test_distinct_lines(self):
        self.assertTrue(is_squarefree(q('x0*x1*x2')))

    def test_random_cubic_over_large_prime(self):
        self.assertTrue(is_squarefree(RandomFormFactory(field=F10007, nvars=3, degree=3)))

    def test_small_characteristic_is_refused(self):
        with self.assertRaises(HypothesisViolation):
            is_squarefree(parse_poly('x0^3+x1^3+x2^3', prime_field(3)))

    def test_hypersurface_validation(self):
        with self.assertRaises(HypothesisViolation):
            Hypersurface.from_form(q('x0^2*x1', nvars=3))
        V = Hypersurface.from_form(q('x0^3+x1^3+x2^3'))
        self.assertEqual((V.n, V.d, len(V.taylor)), (2, 3, 3))

    def test_factory_builds_valid_hypersurfaces(self):
        V = HypersurfaceFactory(form__field=F10007, form__nvars=4, form__degree=3)
        self.assertEqual((V.n, V.d), (3, 3))


class DivisionTests(SimpleTestCase):

    def test_normal_form_modulo_conic(self):
        self.assertEqual(normal_form(q('x1^2', nvars=3), q('x0*x2-x1^2')), q('x0*x2'))

    def test_division_identity(self):
        f = RandomFormFactory(field=F101, nvars=3, degree=3)
        g = RandomFormFactory(field=F101, nvars=3, degree=6)
        quotient, remainder = polynomial_division(g, f)
        self.assertEqual(quotient * f + remainder, g)
        self.assertEqual(normal_form(g * f, f), MultiPoly.zero(F101, f.names))

    def test_lex_with_a_chosen_leading_variable(self):
        g = q('x0*x2^2')
        f = q('x0*x2-x1^2')
        quotient, remainder = polynomial_division(g, f, ('lex', 2))
        self.assertEqual(quotient, q('x2', nvars=3))
        self.assertEqual(remainder, q('x1^2*x2'))
        # Under grevlex x1^2 leads, and x0*x2^2 has no x1 factor.
        self.assertEqual(polynomial_division(g, f)[1], g)

    def test_unknown_order(self):
        with self.assertRaises(UsageError):
            polynomial_division(q('x0^2'), q('x0'), 'deglex')

    def test_linear_substitution_swaps_variables(self):
        f = q('x0^2*x1+x2^3')
        swap = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
        self.assertEqual(linear_substitution(f, swap), q('x0*x1^2+x2^3'))


class InterpolationAndEnumerationTests(SimpleTestCase):

    def test_interpolate_quadratic(self):
        u = interpolate_univariate([0, 1, 2], [1, 2, 5], RATIONALS)
        self.assertEqual(univariate_coefficients(u), [1, 0, 1])

    def test_projective_point_count(self):
        points = list(iter_projective_points(prime_field(3), 3))
        self.assertEqual(len(points), 13)
        self.assertEqual(len(set(points)), 13)
        self.assertEqual(points[0], (1, 0, 0))
