import math
import random
from fractions import Fraction

import pytest
from django.core.cache import cache
from django.test import SimpleTestCase

from oracle.models import EnumerationDomain
from oracle.operations import brute_force_cone, hessian_flex_oracle
from polycore.factories import HypersurfaceFactory, RandomFormFactory
from polycore.fields import RATIONALS, prime_field
from polycore.grammar import normalize_point, parse_poly
from polycore.models import Hypersurface
from polycore.operations import evaluate, iter_projective_points, normal_form, substitute_line, valuation
from utils.exceptions import HypothesisViolation, InternalInconsistency, PreconditionError, UsageError
from .models import FlexCertificate, FlexPolynomial, OsculationVerdict, Trilean, harmonic_sum
from .operations import (
    FRAME_ATTEMPTS,
    certify,
    choose_frame,
    contact_order,
    degree_report,
    flex_line,
    flex_polynomial,
    hessian_determinant,
    hessian_identity_check,
    is_flex,
    is_singular,
    osculation_bound_check,
    r_poly_degree,
    rho_degree,
    swap_identity_check,
    zero_cone_system,
)
from .sampling import flex_scheme_jacobian_rank, sample_flex_points, slice_flex_scheme
from .signals import flex_polynomial_computed

F13 = prime_field(13)
F10007 = prime_field(10007)
MERSENNE = prime_field(2147483647)


def hypersurface(text, field=RATIONALS, nvars=None):
    return Hypersurface.from_form(parse_poly(text, field, nvars=nvars))


def expected_rho(V):
    """-det H(f) / (d-1)^2 reduced modulo f."""
    scale = V.field(f'-1/{(V.d - 1) ** 2}')
    return normal_form(hessian_flex_oracle(V.f).scale(scale), V.f)


class ContactOrderTests(SimpleTestCase):

    def setUp(self):
        self.conic = hypersurface('x0*x2-x1^2')

    def test_line_on_quadric_surface(self):
        V = hypersurface('x0*x1-x2*x3')
        self.assertEqual(contact_order(V, (1, 0, 0, 0), (0, 0, 1, 0)), math.inf)

    def test_tangent_and_transversal_lines(self):
        self.assertEqual(contact_order(self.conic, (1, 0, 0), (0, 1, 0)), 2)
        self.assertEqual(contact_order(self.conic, (1, 0, 0), (0, 0, 1)), 1)

    def test_proportional_direction(self):
        with self.assertRaises(PreconditionError):
            contact_order(self.conic, (1, 0, 0), (3, 0, 0))

    def test_point_off_the_curve(self):
        with self.assertRaises(PreconditionError) as raised:
            contact_order(self.conic, (0, 1, 0), (1, 0, 0))
        self.assertEqual(raised.exception.code, 'not_on_hypersurface')

    def test_wrong_number_of_coordinates(self):
        with self.assertRaises(UsageError):
            contact_order(self.conic, (1, 0), (0, 1))


class ConeTests(SimpleTestCase):

    def test_cone_equations(self):
        V = HypersurfaceFactory(form__nvars=4, form__degree=3)
        p = (0, 0, 0, 1)
        point = tuple(V.field(c) for c in p)
        cone = zero_cone_system(V, p, 3)
        self.assertEqual([g.homogeneous_degree for g in cone], [1, 2, 3])
        # f_k(p, p) is a multiple of f(p).
        value = evaluate(V.f, point)
        for k, g in enumerate(cone, start=1):
            self.assertEqual(evaluate(g, point), value * math.perm(V.d, k))

    def test_cone_order_range(self):
        V = hypersurface('x0*x2-x1^2')
        for k in (0, 3):
            with self.assertRaises(UsageError):
                zero_cone_system(V, (1, 0, 0), k)


class DegreeFormulaTests(SimpleTestCase):

    def test_plane_cubic(self):
        report = degree_report(2, 3)
        self.assertEqual(report.deg_rho, 3)
        self.assertEqual(report.deg_flex_locus, 9)
        self.assertEqual(report.max_equation_degree, 3)
        self.assertEqual(report.inflexion_bound, 9)
        self.assertIsNone(report.deg_line_locus)

    def test_cubic_surface(self):
        report = degree_report(3, 3)
        self.assertEqual((report.deg_rho, report.deg_flex_locus), (9, 27))
        self.assertEqual((report.deg_line_locus, report.deg_line_equation), (27, 9))
        self.assertIsNone(report.inflexion_bound)

    def test_quintic_threefold_in_p3(self):
        report = degree_report(3, 5)
        self.assertEqual((report.deg_rho, report.deg_flex_locus), (31, 155))
        self.assertEqual(report.max_equation_degree, 31)

    def test_plane_curves(self):
        for d in range(2, 8):
            self.assertEqual(rho_degree(2, d), 3 * d - 6)
            self.assertEqual(degree_report(2, d).inflexion_bound, 3 * d * (d - 2))

    def test_resultant_degree(self):
        self.assertEqual(r_poly_degree(2, 3), rho_degree(2, 3) + 2)
        self.assertEqual(r_poly_degree(3, 4), rho_degree(3, 4) + 6)

    def test_harmonic_sum(self):
        self.assertEqual(harmonic_sum(2, 3), Fraction(5, 6))
        self.assertEqual(harmonic_sum(2, 1), 0)

    def test_low_degree_is_ruled(self):
        with self.assertRaises(HypothesisViolation) as raised:
            degree_report(3, 2)
        self.assertEqual(raised.exception.code, 'ruled')
        with self.assertRaises(HypothesisViolation) as raised:
            degree_report(1, 3)
        self.assertEqual(raised.exception.code, 'dimension')

    def test_report_lines(self):
        lines = degree_report(3, 3).as_lines()
        self.assertIn('deg rho = 9', lines)
        self.assertIn('deg line locus = 27', lines)


class PlaneCurveFlexTests(SimpleTestCase):

    def test_conic_has_constant_rho(self):
        flex = flex_polynomial(hypersurface('x0*x2-x1^2'), use_cache=False)
        self.assertEqual(flex.rho, parse_poly('-2', RATIONALS, nvars=3))
        self.assertEqual(flex.degree, 0)

    def test_rho_matches_the_hessian(self):
        for field in (RATIONALS, F10007):
            for d in (3, 4, 5):
                V = HypersurfaceFactory(form__field=field, form__degree=d)
                flex = flex_polynomial(V, use_cache=False)
                self.assertEqual(flex.rho.homogeneous_degree, 3 * d - 6)
                self.assertEqual(flex.rho, expected_rho(V))
                self.assertTrue(hessian_identity_check(V, flex))

    def test_cofactor_reproduces_the_resultant(self):
        V = HypersurfaceFactory(form__field=F10007, form__degree=4)
        flex = flex_polynomial(V, use_cache=False)
        N = 2
        self.assertEqual(flex.ell ** N * flex.rho + V.f * flex.sigma, flex.resultant)
        self.assertEqual(flex.resultant.homogeneous_degree, r_poly_degree(2, 4))

    def test_hessian_by_cofactors(self):
        f = RandomFormFactory(degree=4)
        self.assertEqual(hessian_determinant(f), hessian_flex_oracle(f))

    def test_fermat_cubic(self):
        V = hypersurface('x0^3+x1^3+x2^3', F13)
        rho = flex_polynomial(V, use_cache=False).rho
        coefficient = rho.coefficient((1, 1, 1))
        self.assertTrue(coefficient)
        self.assertEqual(rho, parse_poly('x0*x1*x2', F13).scale(coefficient))

    def test_fermat_cubic_has_nine_rational_flexes(self):
        V = hypersurface('x0^3+x1^3+x2^3', F13)
        flex = flex_polynomial(V, use_cache=False)
        domain = EnumerationDomain(13, 1, 3)
        flexes = []
        for p in iter_projective_points(F13, 3):
            if evaluate(V.f, p):
                continue
            found = is_flex(V, p)
            self.assertEqual(found, is_flex(V, p, flex=flex))
            self.assertEqual(found, bool(brute_force_cone(V, p, 2, domain)))
            if found:
                flexes.append(p)
        self.assertEqual(len(flexes), 9)

    def test_flex_line_of_fermat_cubic(self):
        V = hypersurface('x0^3+x1^3+x2^3')
        certificate = flex_line(V, (1, -1, 0))
        self.assertEqual(certificate.unique_line, Trilean.YES)
        self.assertEqual(certificate.line_direction, (0, 0, 1))
        self.assertEqual(certificate.contact_order, 3)
        self.assertFalse(certificate.line_in_hypersurface)

    def test_conic_has_no_flexes(self):
        V = hypersurface('x0*x2-x1^2')
        self.assertFalse(is_flex(V, (1, 0, 0)))
        with self.assertRaises(PreconditionError) as raised:
            flex_line(V, (1, 0, 0))
        self.assertEqual(raised.exception.code, 'not_flex')

    def test_node_is_a_flex_without_a_line(self):
        V = hypersurface('x1^2*x2-x0^3-x0^2*x2')
        node = (0, 0, 1)
        self.assertTrue(is_singular(V, node))
        self.assertTrue(is_flex(V, node))
        self.assertFalse(evaluate(flex_polynomial(V, use_cache=False).rho, node))
        certificate = certify(V, node)
        self.assertTrue(certificate.is_flex)
        self.assertEqual(certificate.unique_line, Trilean.INCONCLUSIVE)
        self.assertIsNone(certificate.line_direction)

    def test_certificate_off_the_curve(self):
        certificate = certify(hypersurface('x0*x2-x1^2'), (0, 2, 0))
        self.assertFalse(certificate.on_hypersurface)
        self.assertFalse(certificate.is_flex)
        self.assertEqual(certificate.point, (0, 1, 0))

    def test_rho_does_not_depend_on_ell(self):
        V = HypersurfaceFactory(form__field=F10007, form__degree=3)
        first = flex_polynomial(V, ell=parse_poly('x1', F10007, nvars=3), use_cache=False)
        second = flex_polynomial(V, ell=parse_poly('x0+2*x1-x2', F10007), use_cache=False)
        self.assertEqual(first.rho, second.rho)
        self.assertNotEqual(first.ell, second.ell)

    def test_swap_identity(self):
        V = HypersurfaceFactory(form__field=F10007, form__degree=3)
        rng = random.Random(3)
        for degree in (1, 2):
            g = RandomFormFactory(field=F10007, degree=degree)
            h = RandomFormFactory(field=F10007, degree=degree)
            self.assertTrue(swap_identity_check(V, g, h, rng=rng))

    def test_ell_must_be_linear(self):
        V = HypersurfaceFactory(form__degree=3)
        with self.assertRaises(HypothesisViolation):
            flex_polynomial(V, ell=parse_poly('x0^2', RATIONALS, nvars=3), use_cache=False)


class SurfaceFlexTests(SimpleTestCase):

    def test_quadric_surface_is_ruled(self):
        with self.assertRaises(HypothesisViolation) as raised:
            flex_polynomial(hypersurface('x0*x1-x2*x3'), use_cache=False)
        self.assertEqual(raised.exception.code, 'ruled')

    def test_cubic_surface_containing_a_line(self):
        A = RandomFormFactory(field=F10007, nvars=4, degree=2)
        B = RandomFormFactory(field=F10007, nvars=4, degree=2)
        x0, x1 = parse_poly('x0', F10007, nvars=4), parse_poly('x1', F10007, nvars=4)
        V = Hypersurface.from_form(x0 * A + x1 * B)
        p = (0, 0, 1, 5)
        self.assertTrue(is_flex(V, p))
        certificate = flex_line(V, p)
        self.assertEqual(certificate.unique_line, Trilean.YES)
        self.assertEqual(certificate.contact_order, math.inf)
        self.assertTrue(certificate.line_in_hypersurface)
        direction = certificate.line_direction
        self.assertEqual((direction[0], direction[1]), (F10007.zero, F10007.zero))

    @pytest.mark.slow
    def test_fermat_cubic_surface(self):
        V = hypersurface('x0^3+x1^3+x2^3+x3^3', F10007)
        p = (1, -1, 2, -2)
        flex = flex_polynomial(V, use_cache=False)
        self.assertEqual(flex.degree, 9)
        self.assertFalse(evaluate(flex.rho, normalize_point(tuple(F10007(c) for c in p), F10007)))
        certificate = flex_line(V, p)
        self.assertEqual(certificate.contact_order, math.inf)
        self.assertEqual(certificate.line_direction, normalize_point((0, 0, F10007(1), F10007(-1)), F10007))

    @pytest.mark.slow
    def test_rho_vanishes_on_lines_of_the_fermat_cubic_surface(self):
        V = hypersurface('x0^3+x1^3+x2^3+x3^3', F10007)
        rho = flex_polynomial(V, use_cache=False).rho
        # (s:-s:u:-u), (s:u:-s:-u) and (s:u:-u:-s)
        lines = (
            ((1, -1, 0, 0), (0, 0, 1, -1)),
            ((1, 0, -1, 0), (0, 1, 0, -1)),
            ((1, 0, 0, -1), (0, 1, -1, 0)),
        )
        for p, q in lines:
            self.assertTrue(substitute_line(V.f, p, q).is_zero)
            self.assertTrue(substitute_line(rho, p, q).is_zero, (p, q))

    @pytest.mark.slow
    def test_flex_polynomial_degrees_of_surfaces(self):
        for d, expected in ((3, 9), (4, 20)):
            V = HypersurfaceFactory(form__field=F10007, form__nvars=4, form__degree=d)
            flex = flex_polynomial(V, use_cache=False)
            self.assertEqual(flex.rho.homogeneous_degree, expected)
            self.assertEqual(flex.resultant.homogeneous_degree, r_poly_degree(3, d))

    @pytest.mark.slow
    def test_sampled_flexes_of_a_quartic_surface(self):
        V = HypersurfaceFactory(form__field=MERSENNE, form__nvars=4, form__degree=4, form__seed=401)
        flex = flex_polynomial(V, use_cache=False)
        points = sample_flex_points(V, flex, 5, seed=11)
        self.assertEqual(len(points), 5)
        for p in points:
            self.assertTrue(is_flex(V, p))
            certificate = flex_line(V, p)
            self.assertEqual(certificate.unique_line, Trilean.YES)
            self.assertEqual(certificate.contact_order, 4)
            self.assertFalse(certificate.line_in_hypersurface)
            self.assertEqual(flex_scheme_jacobian_rank(V, flex, p), 2)

    @pytest.mark.slow
    def test_plane_slices_stay_within_the_flex_locus_degree(self):
        V = HypersurfaceFactory(form__field=MERSENNE, form__nvars=4, form__degree=4, form__seed=401)
        flex = flex_polynomial(V, use_cache=False)
        bound = degree_report(3, 4).deg_flex_locus
        rng = random.Random(13)
        for _ in range(3):
            piece = slice_flex_scheme(V, flex, rng)
            self.assertLessEqual(piece.eliminant_degree, bound)
            self.assertLessEqual(piece.root_count, piece.eliminant_degree)
            self.assertLessEqual(len(piece.points), bound)
            for p in piece.points:
                self.assertFalse(evaluate(V.f, p))
                self.assertFalse(evaluate(flex.rho, p))

    @pytest.mark.slow
    def test_flexes_of_a_random_cubic_surface_lie_on_lines(self):
        # Random within the surfaces through the rational line x0 = x1 = 0.
        A = RandomFormFactory(field=MERSENNE, nvars=4, degree=2, seed=301)
        B = RandomFormFactory(field=MERSENNE, nvars=4, degree=2, seed=302)
        x0, x1 = parse_poly('x0', MERSENNE, nvars=4), parse_poly('x1', MERSENNE, nvars=4)
        V = Hypersurface.from_form(x0 * A + x1 * B)
        flex = flex_polynomial(V, use_cache=False)
        points = sample_flex_points(V, flex, 2, seed=17)
        self.assertEqual(len(points), 2)
        for p in points:
            certificate = flex_line(V, p)
            self.assertEqual(certificate.contact_order, math.inf)
            self.assertTrue(certificate.line_in_hypersurface)


@pytest.mark.slow
class ExhaustiveConsistencyTests(SimpleTestCase):
    """Flexness by rho, by the point resultant and by brute force over F_{p^2} agree everywhere."""

    def check_curve(self, V, prime):
        flex = flex_polynomial(V, use_cache=False)
        domain = EnumerationDomain(prime, 2, 3)
        for p in iter_projective_points(V.field, 3):
            if evaluate(V.f, p):
                continue
            by_rho = not evaluate(flex.rho, p)
            self.assertEqual(is_flex(V, p), by_rho, p)
            self.assertEqual(is_flex(V, p, flex=flex), by_rho, p)
            self.assertEqual(bool(brute_force_cone(V, p, 2, domain)), by_rho, p)

    def test_random_plane_cubics(self):
        for prime in (7, 13):
            field = prime_field(prime)
            for seed in (1, 2):
                self.check_curve(HypersurfaceFactory(form__field=field, form__degree=3, form__seed=prime * 100 + seed), prime)

    def test_nodal_cubic_over_f7(self):
        V = hypersurface('x1^2*x2-x0^3-x0^2*x2', prime_field(7))
        self.assertTrue(is_singular(V, (0, 0, 1)))
        self.check_curve(V, 7)


class OsculationTests(SimpleTestCase):

    def test_smooth_cubic_within_bound(self):
        V = hypersurface('x0^3+x1^3+x2^3')
        report = osculation_bound_check(V, (1, -1, 0), samples=20)
        self.assertEqual(report.verdict, OsculationVerdict.WITHIN_BOUND)
        self.assertEqual(report.max_order, 3)
        self.assertGreater(report.samples, 0)
        self.assertLessEqual(report.samples, 20)

    def test_exhaustive_sweep_finds_lines_on_a_quadric(self):
        V = hypersurface('x0*x1-x2*x3', prime_field(7))
        report = osculation_bound_check(V, (1, 0, 0, 0), exhaustive=True)
        self.assertEqual(report.verdict, OsculationVerdict.LINE_FOUND)
        line = substitute_line(V.f, tuple(V.field(c) for c in (1, 0, 0, 0)), report.direction)
        self.assertEqual(valuation(line), math.inf)

    def test_exhaustive_sweep_needs_a_prime_field(self):
        with self.assertRaises(UsageError):
            osculation_bound_check(hypersurface('x0*x2-x1^2'), (1, 0, 0), exhaustive=True)


class ScriptedRandom(random.Random):
    """Serves ``script`` from randrange before the seeded stream takes over."""

    def __new__(cls, script, seed=0):
        # Python 3.10's Random.__new__ seeds from the first positional argument.
        return super().__new__(cls, seed)

    def __init__(self, script, seed=0):
        super().__init__(seed)
        self.script = list(script)

    def randrange(self, *args, **kwargs):
        if self.script:
            return self.script.pop(0)
        return super().randrange(*args, **kwargs)


class FrameTests(SimpleTestCase):

    def setUp(self):
        self.V = hypersurface('x0*x1*x2', prime_field(7))

    def test_random_form_dividing_f_is_redrawn(self):
        # The first draw is ell = x0, a factor of f.
        frame = choose_frame(self.V, None, ScriptedRandom([1, 0, 0]))
        self.assertNotEqual(frame.ell, parse_poly('x0', prime_field(7), nvars=3))
        self.assertEqual(frame.ell.homogeneous_degree, 1)
        self.assertIsNotNone(frame.T)

    def test_repeated_failure_is_an_internal_error(self):
        with self.assertRaises(InternalInconsistency):
            choose_frame(self.V, None, ScriptedRandom([0] * 3 * FRAME_ATTEMPTS))


class CertificateTests(SimpleTestCase):

    def test_flex_off_the_hypersurface_is_rejected(self):
        with self.assertRaises(InternalInconsistency):
            FlexCertificate((1, 0, 0), on_hypersurface=False, is_flex=True)

    def test_line_needs_enough_contact(self):
        with self.assertRaises(InternalInconsistency):
            FlexCertificate((1, 0, 0), True, True, line_direction=(0, 1, 0), contact_order=2, n=2)


class FlexCacheTests(SimpleTestCase):

    def setUp(self):
        cache.clear()
        self.V = hypersurface('x0^3+x1^3+x2^3-x0*x1*x2', F10007)

    def test_payload_round_trip(self):
        flex = flex_polynomial(self.V, use_cache=False)
        self.assertEqual(FlexPolynomial.from_payload(flex.as_payload()), flex)

    def test_second_call_is_served_from_cache(self):
        received = []

        def listener(sender, flex, key, **kwargs):
            received.append(key)

        flex_polynomial_computed.connect(listener)
        try:
            first = flex_polynomial(self.V, seed=5)
            second = flex_polynomial(self.V, seed=5)
        finally:
            flex_polynomial_computed.disconnect(listener)
        self.assertEqual(len(received), 1)
        self.assertEqual(cache.get(received[0]), first.as_payload())
        self.assertEqual(first, second)

    def test_explicit_rng_bypasses_the_cache(self):
        received = []

        def listener(sender, flex, key, **kwargs):
            received.append(key)

        flex_polynomial_computed.connect(listener)
        try:
            flex_polynomial(self.V, rng=random.Random(1))
        finally:
            flex_polynomial_computed.disconnect(listener)
        self.assertEqual(received, [])
