from superapp.apps.qaoa_limits.exceptions import InvalidParameterError
from superapp.apps.qaoa_limits.management.commands._base import QaoaLimitsCommand
from superapp.apps.qaoa_limits.reports import parse_angle_list, read_angles
from superapp.apps.qaoa_limits.tasks.simulate import ENSEMBLES, simulate


class Command(QaoaLimitsCommand):
    help = 'Exact statevector QAOA energy on a graph file or a sampled instance'
    report_name = 'simulate'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--graph',
            type=str,
            help='Graph file: JSON {n, edges, labels?} or a plain edge list'
        )
        parser.add_argument(
            '--ensemble',
            type=str,
            choices=ENSEMBLES,
            help='Sample an instance from this ensemble instead of reading --graph'
        )
        parser.add_argument(
            '--n',
            type=int,
            help='Instance size for --ensemble'
        )
        parser.add_argument(
            '--d',
            type=float,
            help='Average degree (er)'
        )
        parser.add_argument(
            '--dist',
            type=str,
            help='Degree distribution (chung-lu), e.g. "4:2/3,9:1/3"'
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
            '--shots',
            type=int,
            default=1000,
            help='Measurement draws for the best sampled cut'
        )

    def run(self, options, config):
        if bool(options['angles']) == bool(options['angle_values']):
            raise InvalidParameterError('Pass exactly one of --angles and --angle-values')
        angles = read_angles(options['angles']) if options['angles'] else parse_angle_list(options['angle_values'])
        result = simulate(
            angles,
            graph_path=options['graph'],
            ensemble=options['ensemble'],
            n=options['n'],
            d=options['d'],
            dist=options['dist'],
            seed=options['seed'],
            shots=options['shots'],
            max_qubits=config['LIMITS']['MAX_SIMULATOR_QUBITS'],
        )
        run_config = {
            'graph': options['graph'],
            'ensemble': options['ensemble'],
            'n': options['n'],
            'd': options['d'],
            'dist': options['dist'],
            'angles': angles.as_dict(),
            'shots': options['shots'],
        }
        return run_config, result, None
