import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from flex.models import Trilean
from flex.operations import flex_line
from polycore.fields import RATIONALS, prime_field
from polycore.grammar import parse_poly
from polycore.models import Hypersurface
from .base import flatten_errors
from .serializers import FlexCertificateSerializer, JobConfigSerializer

FERMAT = 'x0^3+x1^3+x2^3'


def run(*args):
    out, err = StringIO(), StringIO()
    call_command(*args, stdout=out, stderr=err)
    return out.getvalue()


class DegreesCommandTests(SimpleTestCase):

    def test_cubic_surface_text(self):
        lines = run('degrees', '-n', '3', '-d', '3').splitlines()
        self.assertIn('deg rho = 9', lines)
        self.assertIn('deg flex locus = 27', lines)
        self.assertIn('deg line locus = 27', lines)

    def test_json(self):
        data = json.loads(run('degrees', '-n', '2', '-d', '4', '--json'))
        self.assertEqual(data['deg_rho'], 6)
        self.assertEqual(data['inflexion_bound'], 24)
        self.assertIsNone(data['deg_line_locus'])

    def test_ruled_range_exits_with_two(self):
        with self.assertRaises(CommandError) as raised:
            run('degrees', '-n', '3', '-d', '2')
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn('ruled', str(raised.exception))


class RhoCommandTests(SimpleTestCase):

    def test_fermat_cubic(self):
        lines = run('rho', FERMAT, '--field', 'fp:101').splitlines()
        self.assertTrue(lines[0].startswith('rho = '))
        rho = parse_poly(lines[0][len('rho = '):], prime_field(101), nvars=3)
        self.assertEqual(list(rho.element.keys()), [(1, 1, 1)])
        self.assertEqual(lines[1:3], ['degree = 3', 'formula degree = 3'])

    def test_output_is_reproducible(self):
        first = run('rho', 'x0^3+x1^3+x2^3+x0*x1*x2', '--field', 'fp:10007', '--seed', '7', '--json')
        second = run('rho', 'x0^3+x1^3+x2^3+x0*x1*x2', '--field', 'fp:10007', '--seed', '7', '--json')
        self.assertEqual(first, second)
        payload = json.loads(first)
        self.assertEqual(payload['flex_polynomial']['degree'], 3)
        self.assertEqual(payload['degrees']['deg_rho'], 3)

    def test_polynomial_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            source = Path(tmp) / 'fermat.txt'
            source.write_text(FERMAT + '\n')
            self.assertEqual(run('rho', str(source), '--field', 'fp:101'), run('rho', FERMAT, '--field', 'fp:101'))

    def test_out_file_has_the_same_bytes(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'rho.txt'
            printed = run('rho', FERMAT, '--field', 'fp:101', '--out', str(target))
            self.assertEqual(target.read_text(), printed)

    def test_visible_square_is_rejected(self):
        with self.assertRaises(CommandError) as raised:
            run('rho', 'x0^2*x1')
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn('squarefree', str(raised.exception))

    def test_prime_below_two_d_plus_one(self):
        with self.assertRaises(CommandError) as raised:
            run('rho', FERMAT, '--field', 'fp:5')
        self.assertIn('2d+1', str(raised.exception))

    def test_bad_field_spec(self):
        with self.assertRaises(CommandError) as raised:
            run('rho', FERMAT, '--field', 'fp:9')
        self.assertEqual(raised.exception.returncode, 2)


class PointCommandTests(SimpleTestCase):

    def test_line_in_quadric(self):
        output = run('contact', 'x0*x3-x1*x2', '--point', '1,0,0,0', '--dir', '0,0,1,0')
        self.assertEqual(output.strip(), 'infinity')

    def test_contact_json(self):
        data = json.loads(run('contact', 'x0*x2-x1^2', '--point', '2,0,0', '--dir', '0,3,0', '--json'))
        self.assertEqual(data, {'point': '1,0,0', 'direction': '0,1,0', 'contact_order': 2})

    def test_singular_point_is_a_flex(self):
        output = run('isflex', 'x1^2*x2-x0^3-x0^2*x2', '--field', 'fp:13', '--point', '0,0,1')
        self.assertEqual(output.strip(), 'true')

    def test_smooth_point_of_a_conic(self):
        data = json.loads(run('isflex', 'x0*x2-x1^2', '--point', '1,0,0', '--json'))
        self.assertTrue(data['on_hypersurface'])
        self.assertFalse(data['is_flex'])
        self.assertEqual(data['unique_line'], 'no-evidence')

    def test_point_off_the_hypersurface(self):
        with self.assertRaises(CommandError) as raised:
            run('isflex', FERMAT, '--point', '1,1,1')
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn('does not lie on the hypersurface', str(raised.exception))

    def test_point_with_wrong_length(self):
        with self.assertRaises(CommandError):
            run('isflex', FERMAT, '--point', '1,-1')

    def test_flex_line_text(self):
        lines = run('flexline', FERMAT, '--point', '1,-1,0').splitlines()
        self.assertEqual(lines, ['flex at 1,-1,0: line towards 0,0,1', 'contact order = 3'])

    def test_flex_line_certificate_round_trip(self):
        data = json.loads(run('flexline', FERMAT, '--point', '1,-1,0', '--json'))
        self.assertEqual(data['unique_line'], Trilean.YES)
        self.assertEqual(data['contact_order'], 3)
        serializer = FlexCertificateSerializer(data=data, context={'field': RATIONALS})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        V = Hypersurface.from_form(parse_poly(FERMAT, RATIONALS))
        self.assertEqual(serializer.save(), flex_line(V, (1, -1, 0)))

    def test_flex_line_in_the_surface(self):
        data = json.loads(run('flexline', 'x0^3+x1^3+x2^3+x3^3', '--field', 'fp:10007', '--point', '1,-1,2,-2', '--json'))
        self.assertEqual(data['contact_order'], 'infinity')

    def test_flex_line_at_a_non_flex(self):
        with self.assertRaises(CommandError) as raised:
            run('flexline', 'x0*x2-x1^2', '--point', '1,0,0')
        self.assertEqual(raised.exception.returncode, 2)


class ResultantCommandTests(SimpleTestCase):

    def test_pure_powers(self):
        self.assertEqual(run('res', 'y0^2; y1^3').strip(), '1')

    def test_common_zero(self):
        self.assertEqual(run('res', 'y0-y1; y0^2-y1^2', '--field', 'fp:101').strip(), '0')

    def test_parametric_system(self):
        self.assertEqual(run('res', 'x0*y0+x1*y1; x1*y0-x0*y1').strip(), '-x0^2-x1^2')

    def test_json(self):
        data = json.loads(run('res', 'y0; y1', '--json'))
        self.assertEqual(data, {'field': 'q', 'forms': ['y0', 'y1'], 'resultant': '1'})


class JobConfigTests(SimpleTestCase):

    def test_defaults(self):
        serializer = JobConfigSerializer(data={'command': 'rho', 'polynomial': FERMAT})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.validated_data
        self.assertEqual(config['field'], RATIONALS)
        self.assertEqual(config['seed'], 20240601)
        self.assertEqual(config['hypersurface'].d, 3)

    def test_seed_must_fit_in_64_bits(self):
        for seed in (-1, 2 ** 64):
            serializer = JobConfigSerializer(data={'command': 'rho', 'polynomial': FERMAT, 'seed': seed})
            self.assertFalse(serializer.is_valid())
            self.assertIn('seed', serializer.errors)

    def test_missing_polynomial(self):
        serializer = JobConfigSerializer(data={'command': 'rho'})
        self.assertFalse(serializer.is_valid())
        self.assertIn('polynomial', serializer.errors)

    def test_flatten_errors(self):
        errors = {'field': ['bad'], 'non_field_errors': ['input must be squarefree']}
        self.assertEqual(flatten_errors(errors), ['field: bad', 'input must be squarefree'])
