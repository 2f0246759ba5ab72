from flex.operations import contact_order
from polycore.grammar import normalize_point
from cli.base import FlexCommand
from cli.serializers import ContactOrderField, ContactSerializer


class Command(FlexCommand):
    help = 'Order of contact of the line through --point and --dir with the hypersurface'
    takes_point = True
    takes_direction = True

    def run(self, config):
        V = config['hypersurface']
        p, q = config['point'], config['direction']
        order = contact_order(V, p, q)
        payload = ContactSerializer(
            {'point': normalize_point(p, V.field), 'direction': normalize_point(q, V.field), 'contact_order': order},
            context={'field': V.field},
        ).data
        return [str(ContactOrderField().to_representation(order))], payload
