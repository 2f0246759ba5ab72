from polycore.grammar import format_poly
from resultant.operations import resultant_poly, resultant_scalar
from cli.base import FlexCommand
from cli.serializers import ResultantJobSerializer


class Command(FlexCommand):
    help = 'Resultant of ";"-separated forms in y0..yn (x-variables are kept as parameters)'
    config_serializer_class = ResultantJobSerializer

    def run(self, config):
        forms, field = config['forms'], config['field']
        if forms[0].nvars == 2 * len(forms):
            value = resultant_poly(forms, seed=config['seed'])
            text = format_poly(value)
        else:
            value = resultant_scalar(forms, seed=config['seed'])
            text = field.format_scalar(value)
        return [text], {'field': field.spec, 'forms': [format_poly(f) for f in forms], 'resultant': text}
