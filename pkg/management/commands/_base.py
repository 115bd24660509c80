import logging

from django.core.exceptions import ImproperlyConfigured
from django.core.management.base import BaseCommand, CommandError

from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, QaoaLimitsError
from superapp.apps.qaoa_limits.reports import build_report, dumps_report, write_text
from superapp.apps.qaoa_limits.settings import qaoa_settings, resolve_threads

logger = logging.getLogger(__name__)

FORMAT_JSON = 'json'
FORMAT_CSV = 'csv'


class QaoaLimitsCommand(BaseCommand):
    """
    Shared plumbing for qaoa_limits commands: common flags, error mapping
    to exit codes, and report output.

    Subclasses implement add_command_arguments() and run(), which returns
    (run_config, result, csv_text); csv_text is None when the command has
    no tabular output.
    """

    requires_system_checks = []
    report_name = None

    def add_arguments(self, parser):
        self.add_command_arguments(parser)
        parser.add_argument(
            '--threads',
            type=int,
            help='Worker threads (default: QAOA_LIMITS_THREADS, then settings, then all cores)'
        )
        parser.add_argument(
            '--output',
            type=str,
            help='File to write the report to (default: stdout)'
        )
        parser.add_argument(
            '--format',
            type=str,
            choices=[FORMAT_JSON, FORMAT_CSV],
            default=FORMAT_JSON,
            help='Report format'
        )
        parser.add_argument(
            '--seed',
            type=int,
            default=0,
            help='Master random seed'
        )

    def add_command_arguments(self, parser):
        pass

    def run(self, options, config):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            config = qaoa_settings()
            options['threads'] = resolve_threads(options.get('threads'))
            run_config, result, csv_text = self.run(options, config)

            if options['format'] == FORMAT_CSV:
                if csv_text is None:
                    raise InvalidParameterError(f'{self.report_name} has no CSV output; use --format json')
                text = csv_text
            else:
                run_config = dict(run_config, seed=options['seed'])
                text = dumps_report(build_report(self.report_name, run_config, result, config['SCHEMA_VERSION']))

            if options.get('output'):
                write_text(options['output'], text)
                self.stderr.write(self.style.SUCCESS(f'Report written to {options["output"]}'))
            else:
                self.stdout.write(text, ending='')

        except QaoaLimitsError as e:
            logger.error(f'{self.report_name} failed: {e}')
            raise CommandError(str(e), returncode=e.exit_code)
        except ImproperlyConfigured as e:
            logger.error(f'{self.report_name} misconfigured: {e}')
            raise CommandError(str(e), returncode=InvalidParameterError.exit_code)

    def warn(self, message):
        self.stderr.write(self.style.WARNING(message))
