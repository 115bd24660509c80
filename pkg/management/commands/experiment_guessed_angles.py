from superapp.apps.qaoa_limits.exceptions import InvalidParameterError
from superapp.apps.qaoa_limits.infinite_limit import DegreeDistribution
from superapp.apps.qaoa_limits.management.commands._base import QaoaLimitsCommand
from superapp.apps.qaoa_limits.reports import parse_numbers, rows_to_csv
from superapp.apps.qaoa_limits.tasks.experiment import (
    GUESS_SK_TRANSFER,
    GUESS_SOURCES,
    run_experiment,
    run_q_sweep_experiment,
)
from superapp.apps.qaoa_limits.tasks.simulate import ENSEMBLE_CHUNG_LU, ENSEMBLE_ER

DEFAULT_CHUNG_LU = '4:2/3,9:1/3'


class Command(QaoaLimitsCommand):
    help = 'Warm-start QAOA on random 16-vertex graphs from instance-independent angles and compare to random restarts'
    report_name = 'experiment'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--ensemble',
            type=str,
            choices=[ENSEMBLE_ER, ENSEMBLE_CHUNG_LU],
            default=ENSEMBLE_ER,
            help='Graph ensemble'
        )
        parser.add_argument('--n', type=int, default=16, help='Vertices per instance')
        parser.add_argument('--p', type=int, default=3, help='QAOA depth')
        parser.add_argument('--d', type=float, default=4.0, help='Average degree (er)')
        parser.add_argument(
            '--dist',
            type=str,
            default=DEFAULT_CHUNG_LU,
            help='Degree distribution (chung-lu)'
        )
        parser.add_argument('--instances', type=int, default=50, help='Number of random instances')
        parser.add_argument('--restarts', type=int, default=200, help='Random restarts per instance')
        parser.add_argument(
            '--guess',
            type=str,
            choices=GUESS_SOURCES,
            default=GUESS_SK_TRANSFER,
            help='Where the guessed angles come from'
        )
        parser.add_argument(
            '--budget',
            type=int,
            help='Function evaluations per optimization (default: QAOA_LIMITS.OPTIMIZER.BUDGET)'
        )
        parser.add_argument(
            '--q-sweep',
            type=str,
            help='Comma-separated q; runs the chung-lu experiment on each mixture low:q,high:1-q'
        )
        parser.add_argument(
            '--q-degrees',
            type=str,
            default='4,9',
            help='The two expected degrees "low,high" of --q-sweep'
        )

    def run(self, options, config):
        if options['q_sweep']:
            return self.run_q_sweep(options, config)
        dist = DegreeDistribution.parse(options['dist']) if options['ensemble'] == ENSEMBLE_CHUNG_LU else None
        budget = options['budget'] or config['OPTIMIZER']['BUDGET']
        result = run_experiment(
            options['ensemble'],
            n=options['n'],
            p=options['p'],
            instances=options['instances'],
            restarts=options['restarts'],
            seed=options['seed'],
            d=options['d'],
            dist=dist,
            source=options['guess'],
            budget=budget,
            threads=options['threads'],
            max_qubits=config['LIMITS']['MAX_EXPERIMENT_QUBITS'],
        )
        summary = result['summary']
        self.stderr.write(
            f'{summary["fraction_guess_at_least_as_good"]:.0%} of instances: guess-started run at least as good; '
            f'mean attempts to beat it {summary["mean_attempts_to_beat"]:.1f}'
        )
        run_config = {
            'ensemble': options['ensemble'],
            'n': options['n'],
            'p': options['p'],
            'd': options['d'] if options['ensemble'] == ENSEMBLE_ER else None,
            'dist': options['dist'] if options['ensemble'] == ENSEMBLE_CHUNG_LU else None,
            'instances': options['instances'],
            'restarts': options['restarts'],
            'guess': options['guess'],
            'budget': budget,
        }
        header = [
            'instance', 'edges', 'guess_energy', 'from_guess_energy', 'best_random_energy', 'attempts_to_beat',
            'distance_all', 'distance_betas', 'distance_gammas',
        ]
        rows = [
            [
                row['instance'], row['edges'], row['guess_energy'], row['from_guess_energy'],
                row['best_random_energy'], '' if row['attempts_to_beat'] is None else row['attempts_to_beat'],
                row['distances']['all'], row['distances']['betas'], row['distances']['gammas'],
            ]
            for row in result['instances']
        ]
        return run_config, result, rows_to_csv(header, rows)

    def run_q_sweep(self, options, config):
        if options['ensemble'] != ENSEMBLE_CHUNG_LU:
            raise InvalidParameterError(f'--q-sweep applies to the chung-lu ensemble, got {options["ensemble"]}')
        qs = parse_numbers(options['q_sweep'], '--q-sweep')
        low, high = parse_numbers(options['q_degrees'], '--q-degrees', count=2)
        budget = options['budget'] or config['OPTIMIZER']['BUDGET']
        result = run_q_sweep_experiment(
            qs,
            low=low,
            high=high,
            n=options['n'],
            p=options['p'],
            instances=options['instances'],
            restarts=options['restarts'],
            seed=options['seed'],
            source=options['guess'],
            budget=budget,
            threads=options['threads'],
            max_qubits=config['LIMITS']['MAX_EXPERIMENT_QUBITS'],
        )
        run_config = {
            'ensemble': ENSEMBLE_CHUNG_LU,
            'n': options['n'],
            'p': options['p'],
            'q_sweep': qs,
            'q_degrees': [low, high],
            'instances': options['instances'],
            'restarts': options['restarts'],
            'guess': options['guess'],
            'budget': budget,
        }
        header = [
            'q', 'mean_degree', 'fraction_guess_at_least_as_good', 'mean_attempts_to_beat',
            'distance_all', 'distance_betas', 'distance_gammas', 'baseline_all',
        ]
        rows = []
        for entry in result['sweep']:
            summary = entry['summary']
            rows.append([
                entry['q'], entry['mean_degree'], summary['fraction_guess_at_least_as_good'],
                summary['mean_attempts_to_beat'], summary['mean_distance']['all'], summary['mean_distance']['betas'],
                summary['mean_distance']['gammas'], summary['random_baseline_distance']['all'],
            ])
        return run_config, result, rows_to_csv(header, rows)
