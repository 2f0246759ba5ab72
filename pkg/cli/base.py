"""
Shared plumbing of the flexlocus management commands.

Each command validates its options through a serializer, runs one flex
computation and renders either text lines or JSON. Toolkit exceptions
become CommandError with exit code 2 (hypothesis and usage errors) or 3
(internal inconsistencies).
"""

import logging
import time
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from rest_framework.renderers import JSONRenderer

from utils.exceptions import FlexlocusError, error_message
from .serializers import JobConfigSerializer

logger = logging.getLogger(__name__)


def flatten_errors(errors, prefix=''):
    """Serializer errors as 'key: message' strings."""
    if isinstance(errors, dict):
        lines = []
        for key, value in errors.items():
            label = '' if key == 'non_field_errors' else f'{key}: '
            lines.extend(flatten_errors(value, prefix + label))
        return lines
    if isinstance(errors, (list, tuple)):
        return [line for item in errors for line in flatten_errors(item, prefix)]
    return [f'{prefix}{errors}']


class FlexCommand(BaseCommand):
    """
    Base class for commands that act on one hypersurface.

    Subclasses implement ``run(config)`` returning ``(lines, payload)``:
    the text lines and the JSON-ready data of the result.
    """
    config_serializer_class = JobConfigSerializer
    takes_polynomial = True
    takes_point = False
    takes_direction = False

    def add_arguments(self, parser):
        if self.takes_polynomial:
            parser.add_argument('polynomial', help='polynomial text, or a file containing it')
        parser.add_argument('--field', help='q or fp:P (default from FLEXLOCUS_FIELD)')
        parser.add_argument('--seed', type=int, help='random seed (default from FLEXLOCUS_SEED)')
        parser.add_argument('--json', action='store_true', help='emit JSON instead of text')
        parser.add_argument('--out', help='also write the output to this file')
        if self.takes_point:
            parser.add_argument('--point', required=True, help='comma-separated coordinates')
        if self.takes_direction:
            parser.add_argument('--dir', dest='direction', required=True, help='comma-separated coordinates')

    def get_config(self, options):
        data = {
            'command': self.command_name(),
            'json': options.get('json', False),
        }
        for key in ('polynomial', 'field', 'seed', 'point', 'direction'):
            if options.get(key) is not None:
                data[key] = options[key]
        serializer = self.config_serializer_class(data=data)
        if not serializer.is_valid():
            raise CommandError('; '.join(flatten_errors(serializer.errors)), returncode=2)
        return serializer.validated_data

    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def render(self, lines, payload, as_json):
        if as_json:
            return JSONRenderer().render(payload, renderer_context={'indent': 2}).decode()
        return '\n'.join(lines)

    def run(self, config):
        raise NotImplementedError

    def handle(self, *args, **options):
        started = time.perf_counter()
        try:
            config = self.get_config(options)
            lines, payload = self.run(config)
        except FlexlocusError as e:
            logger.info(f"{self.command_name()} failed: {error_message(e)}")
            raise CommandError(error_message(e), returncode=getattr(e, 'exit_code', 3))

        output = self.render(lines, payload, config['json'])
        self.stdout.write(output)
        if options.get('out'):
            Path(options['out']).write_text(output + '\n')
        self.stderr.write(f"{self.command_name()} finished in {time.perf_counter() - started:.2f}s")
