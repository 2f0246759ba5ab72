from flex.operations import degree_report, flex_polynomial
from polycore.grammar import format_poly
from cli.base import FlexCommand
from cli.serializers import DegreeReportSerializer, FlexPolynomialSerializer


class Command(FlexCommand):
    help = 'Compute the flex polynomial rho of a hypersurface, reduced modulo f'

    def run(self, config):
        V = config['hypersurface']
        flex = flex_polynomial(V, seed=config['seed'])
        report = degree_report(V.n, V.d)

        lines = [
            f'rho = {format_poly(flex.rho)}',
            f'degree = {flex.degree}',
            f'formula degree = {report.deg_rho}',
        ]
        if flex.is_ruled:
            lines.append('rho vanishes modulo f: every point is a flex')
        payload = {
            'flex_polynomial': FlexPolynomialSerializer(flex).data,
            'degrees': DegreeReportSerializer(report).data,
        }
        return lines, payload
