import logging

import pytest
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

logger = logging.getLogger(__name__)

SUITE = ['polycore', 'resultant', 'flex', 'oracle', 'cli']


class Command(BaseCommand):
    help = 'Run the acceptance test suite (slow checks only with --full)'

    def add_arguments(self, parser):
        parser.add_argument('--full', action='store_true', help='include the slow acceptance checks')

    def handle(self, *args, **options):
        arguments = ['-q'] + [str(settings.BASE_DIR / app) for app in SUITE]
        if not options['full']:
            arguments += ['-m', 'not slow']
        logger.info(f"running pytest {' '.join(arguments)}")
        status = pytest.main(arguments)
        if status != 0:
            raise CommandError(f'selftest failed with pytest status {int(status)}', returncode=3)
        self.stdout.write(self.style.SUCCESS('selftest passed'))
