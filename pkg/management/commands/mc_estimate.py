import logging

from superapp.apps.qaoa_limits.exceptions import InvalidParameterError
from superapp.apps.qaoa_limits.management.commands._base import QaoaLimitsCommand
from superapp.apps.qaoa_limits.reports import parse_angle_list, read_angles, rows_to_csv, write_samples_csv
from superapp.apps.qaoa_limits.sk_montecarlo import FLIP_TERM_PAIRED, FLIP_TERMS
from superapp.apps.qaoa_limits.tasks.montecarlo import run_mc_estimate

logger = logging.getLogger(__name__)


class Command(QaoaLimitsCommand):
    help = 'Monte-Carlo estimate of the finite-size SK-QAOA energy'
    report_name = 'mc'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--n',
            type=int,
            required=True,
            help='Number of spins'
        )
        parser.add_argument(
            '--angles',
            type=str,
            help='Angle file {p, betas, gammas}'
        )
        parser.add_argument(
            '--angle-values',
            type=str,
            help='Inline angles "b1,...,bp;g1,...,gp"'
        )
        parser.add_argument(
            '--samples',
            type=int,
            help='Number of samples (default: QAOA_LIMITS.MONTE_CARLO.SAMPLES)'
        )
        parser.add_argument(
            '--force',
            action='store_true',
            help='Sample depths whose variance bound is astronomically large'
        )
        parser.add_argument(
            '--flip-term',
            choices=FLIP_TERMS,
            default=FLIP_TERM_PAIRED,
            help='Flip term of the Poisson intensities (literal is biased, for comparison only)'
        )
        parser.add_argument(
            '--samples-output',
            type=str,
            help='CSV file for the raw sample stream'
        )

    def run(self, options, config):
        if bool(options['angles']) == bool(options['angle_values']):
            raise InvalidParameterError('Pass exactly one of --angles and --angle-values')
        angles = read_angles(options['angles']) if options['angles'] else parse_angle_list(options['angle_values'])
        samples = options['samples'] or config['MONTE_CARLO']['SAMPLES']
        limits = config['LIMITS']

        if angles.p > limits['MAX_MC_P_WITHOUT_FORCE'] and options['force']:
            self.warn(f'Sampling at p={angles.p}: expect an unusable variance bound')
        estimate, result = run_mc_estimate(
            options['n'],
            angles,
            samples,
            options['seed'],
            threads=options['threads'],
            force=options['force'],
            max_p_without_force=limits['MAX_MC_P_WITHOUT_FORCE'],
            max_exact_n=limits['MAX_EXACT_SK_N'],
            max_p_infinite=limits['MAX_P_INFINITE'],
            flip_term=options['flip_term'],
        )
        if options['samples_output']:
            write_samples_csv(options['samples_output'], estimate.samples)

        run_config = {'n': options['n'], 'angles': angles.as_dict(), 'samples': samples, 'force': options['force'],
                      'flip_term': options['flip_term']}
        csv_text = rows_to_csv(['sample_index', 'value'], enumerate(estimate.samples))
        return run_config, result, csv_text
