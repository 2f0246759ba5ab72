from flex.models import Trilean
from flex.operations import flex_line
from polycore.grammar import format_point
from cli.base import FlexCommand
from cli.serializers import ContactOrderField, FlexCertificateSerializer


class Command(FlexCommand):
    help = 'Certify the flex line at a flex point'
    takes_point = True

    def run(self, config):
        V = config['hypersurface']
        certificate = flex_line(V, config['point'], seed=config['seed'])
        payload = FlexCertificateSerializer(certificate, context={'field': V.field}).data

        point = format_point(certificate.point, V.field)
        if certificate.unique_line != Trilean.YES:
            return [f'flex at {point}: flex line inconclusive'], payload
        order = ContactOrderField().to_representation(certificate.contact_order)
        lines = [
            f'flex at {point}: line towards {format_point(certificate.line_direction, V.field)}',
            f'contact order = {order}',
        ]
        if certificate.line_in_hypersurface:
            lines.append('the line lies in the hypersurface')
        return lines, payload
