from flex.operations import degree_report
from cli.base import FlexCommand
from cli.serializers import DegreeReportSerializer


class Command(FlexCommand):
    help = 'Degree formulas of the flex locus for given n and d'
    takes_polynomial = False

    def add_arguments(self, parser):
        parser.add_argument('-n', dest='n', type=int, required=True, help='dimension of the ambient P^n')
        parser.add_argument('-d', dest='d', type=int, required=True, help='degree of the hypersurface')
        parser.add_argument('--json', action='store_true', help='emit JSON instead of text')
        parser.add_argument('--out', help='also write the output to this file')

    def get_config(self, options):
        return {'n': options['n'], 'd': options['d'], 'json': options['json']}

    def run(self, config):
        report = degree_report(config['n'], config['d'])
        return report.as_lines(), DegreeReportSerializer(report).data
