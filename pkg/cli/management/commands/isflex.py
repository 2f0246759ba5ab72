from flex.models import FlexCertificate
from flex.operations import is_flex, require_on_hypersurface
from polycore.grammar import normalize_point
from cli.base import FlexCommand
from cli.serializers import FlexCertificateSerializer


class Command(FlexCommand):
    help = 'Decide whether a point of the hypersurface is a flex'
    takes_point = True

    def run(self, config):
        V, p = config['hypersurface'], config['point']
        require_on_hypersurface(V, p)
        verdict = is_flex(V, p, seed=config['seed'])
        certificate = FlexCertificate(normalize_point(p, V.field), True, verdict, n=V.n)
        payload = FlexCertificateSerializer(certificate, context={'field': V.field}).data
        return ['true' if verdict else 'false'], payload
