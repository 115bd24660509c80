import logging

from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError
from superapp.apps.qaoa_limits.management.commands._base import QaoaLimitsCommand
from superapp.apps.qaoa_limits.reports import parse_numbers, rows_to_csv, write_angles
from superapp.apps.qaoa_limits.tasks.predict import (
    MODEL_CHUNG_LU,
    MODELS,
    parse_distribution,
    predict_angles,
    predict_q_sweep,
    predict_sweep,
)

logger = logging.getLogger(__name__)


class Command(QaoaLimitsCommand):
    help = 'Optimize the infinite-size QAOA energy of a random-graph or spin-glass model'
    report_name = 'predict'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--model',
            type=str,
            required=True,
            choices=MODELS,
            help='Energy model to optimize'
        )
        parser.add_argument(
            '--p',
            type=int,
            required=True,
            help='QAOA depth'
        )
        parser.add_argument(
            '--d',
            type=float,
            help='Average degree (er, diluted-p1)'
        )
        parser.add_argument(
            '--dist',
            type=str,
            help='Chung-Lu degree distribution, e.g. "4:2/3,9:1/3"'
        )
        parser.add_argument(
            '--D',
            type=int,
            default=2,
            dest='arity',
            help='Interaction arity for the D-spin models'
        )
        parser.add_argument(
            '--restarts',
            type=int,
            help='Random restarts (default: QAOA_LIMITS.OPTIMIZER.RESTARTS)'
        )
        parser.add_argument(
            '--budget',
            type=int,
            help='Function evaluations per restart (default: QAOA_LIMITS.OPTIMIZER.BUDGET)'
        )
        parser.add_argument(
            '--sweep',
            type=str,
            help='Comma-separated degrees; optimizes each and reports rescaled angles across them'
        )
        parser.add_argument(
            '--q-sweep',
            type=str,
            help='Comma-separated label probabilities q for the chung-lu mixture low:q,high:1-q'
        )
        parser.add_argument(
            '--q-degrees',
            type=str,
            default='4,9',
            help='The two expected degrees "low,high" of --q-sweep'
        )
        parser.add_argument(
            '--angles-output',
            type=str,
            help='Also write the optimal angles to this angle file'
        )

    def run(self, options, config):
        optimizer = config['OPTIMIZER']
        kwargs = {
            'D': options['arity'],
            'restarts': options['restarts'] or optimizer['RESTARTS'],
            'seed': options['seed'],
            'budget': options['budget'] or optimizer['BUDGET'],
            'threads': options['threads'],
            'xatol': optimizer['XATOL'],
            'fatol': optimizer['FATOL'],
            'max_p': config['LIMITS']['MAX_P_INFINITE'],
            'tolerance': config['TOLERANCES']['IMAG_RESIDUE'],
        }
        run_config = {
            'model': options['model'],
            'p': options['p'],
            'd': options['d'],
            'dist': options['dist'],
            'D': options['arity'],
            'restarts': kwargs['restarts'],
            'budget': kwargs['budget'],
        }

        if options['q_sweep']:
            if options['model'] != MODEL_CHUNG_LU:
                raise InvalidParameterError(f'--q-sweep applies to the chung-lu model, got {options["model"]}')
            qs = parse_numbers(options['q_sweep'], '--q-sweep')
            low, high = parse_numbers(options['q_degrees'], '--q-degrees', count=2)
            run_config.update({'q_sweep': qs, 'q_degrees': [low, high]})
            result = predict_q_sweep(options['p'], qs, low=low, high=high, **kwargs)
            header = ['q', 'mean_degree', 'energy'] + [f'{name}_{j}' for name in ('beta', 'gamma', 'rescaled_gamma')
                                                          for j in range(options['p'])]
            rows = [
                [row['q'], row['mean_degree'], row['energy']] + row['betas'] + row['gammas'] + row['rescaled_gammas']
                for row in result['rows']
            ]
            return run_config, result, rows_to_csv(header, rows)

        if options['sweep']:
            degrees = parse_numbers(options['sweep'], '--sweep')
            run_config['sweep'] = degrees
            result = predict_sweep(options['model'], options['p'], degrees, **kwargs)
            header = ['d', 'energy'] + [f'{name}_{j}' for name in ('beta', 'gamma', 'rescaled_gamma')
                                        for j in range(options['p'])]
            rows = [
                [row['d'], row['energy']] + row['betas'] + row['gammas'] + row['rescaled_gammas']
                for row in result['rows']
            ]
            return run_config, result, rows_to_csv(header, rows)

        result = predict_angles(
            options['model'],
            options['p'],
            d=options['d'],
            dist=parse_distribution(options['dist']),
            **kwargs,
        )
        self.stderr.write(f'{options["model"]} p={options["p"]}: energy {result["energy"]:.8f}')
        if options['angles_output']:
            write_angles(options['angles_output'], AngleVector.from_dict(result['angles']))
        csv_text = rows_to_csv(
            ['restart', 'iterations', 'evaluations', 'final_value'],
            ((e['restart'], e['iterations'], e['evaluations'], e['value']) for e in result['trace']),
        )
        return run_config, result, csv_text
