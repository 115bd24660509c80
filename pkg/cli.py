"""
qaoa-limits <predict|transfer|mc|simulate|experiment|landscape> [flags]

Thin front end over the app's management commands. Outside a configured
Django project it installs minimal settings (this app only, logging to
stderr at QAOA_LIMITS_LOG_LEVEL, default WARNING).
"""
import os
import sys

import django
from django.conf import settings
from django.core.management import execute_from_command_line

from superapp.apps.qaoa_limits.settings import extend_superapp_settings

PROGRAM = 'qaoa-limits'
LOG_LEVEL_ENV_VAR = 'QAOA_LIMITS_LOG_LEVEL'

SUBCOMMANDS = {
    'predict': 'predict_angles',
    'transfer': 'transfer_angles',
    'mc': 'mc_estimate',
    'simulate': 'simulate',
    'experiment': 'experiment_guessed_angles',
    'landscape': 'landscape',
}


def standalone_settings():
    main_settings = {
        'INSTALLED_APPS': [],
        'USE_TZ': True,
        'LOGGING': {
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'plain': {'format': '%(levelname)s %(name)s: %(message)s'},
            },
            'handlers': {
                'stderr': {
                    'class': 'logging.StreamHandler',
                    'stream': 'ext://sys.stderr',
                    'formatter': 'plain',
                },
            },
            'loggers': {
                'superapp.apps.qaoa_limits': {
                    'handlers': ['stderr'],
                    'level': os.environ.get(LOG_LEVEL_ENV_VAR, 'WARNING').upper(),
                    'propagate': False,
                },
            },
        },
    }
    extend_superapp_settings(main_settings)
    return main_settings


def configure():
    if not settings.configured:
        settings.configure(**standalone_settings())
    django.setup()


def usage():
    return f'usage: {PROGRAM} <{"|".join(SUBCOMMANDS)}> [flags]\n'


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ('-h', '--help'):
        sys.stdout.write(usage())
        return 0 if argv else 2
    subcommand, rest = argv[0], argv[1:]
    if subcommand not in SUBCOMMANDS:
        sys.stderr.write(f'{PROGRAM}: unknown command "{subcommand}"\n{usage()}')
        return 2

    configure()
    # CommandError exits with its returncode inside execute_from_command_line
    execute_from_command_line([PROGRAM, SUBCOMMANDS[subcommand], *rest])
    return 0
