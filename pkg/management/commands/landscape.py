from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.management.commands._base import QaoaLimitsCommand
from superapp.apps.qaoa_limits.reports import parse_angle_list
from superapp.apps.qaoa_limits.tasks.landscape import landscape, landscape_csv, parse_axis
from superapp.apps.qaoa_limits.tasks.predict import MODELS, energy_functional, parse_distribution


class Command(QaoaLimitsCommand):
    help = 'Grid of infinite-size energies over one layer (beta, gamma)'
    report_name = 'landscape'

    def add_command_arguments(self, parser):
        parser.add_argument('--model', type=str, required=True, choices=MODELS, help='Energy model')
        parser.add_argument('--p', type=int, default=1, help='QAOA depth')
        parser.add_argument('--d', type=float, help='Average degree (er, diluted-p1)')
        parser.add_argument('--dist', type=str, help='Degree distribution (chung-lu)')
        parser.add_argument('--D', type=int, default=2, dest='arity', help='Interaction arity (D-spin models)')
        parser.add_argument(
            '--beta',
            type=str,
            default='-1.5707963267948966:1.5707963267948966:61',
            help='Beta axis start:stop:num'
        )
        parser.add_argument(
            '--gamma',
            type=str,
            default='-3.141592653589793:3.141592653589793:121',
            help='Gamma axis start:stop:num'
        )
        parser.add_argument('--layer', type=int, default=0, help='Layer whose angles are scanned')
        parser.add_argument(
            '--base',
            type=str,
            help='Angles "b1,...,bp;g1,...,gp" for the layers that are not scanned (default: zeros)'
        )

    def run(self, options, config):
        p = options['p']
        f = energy_functional(
            options['model'],
            p,
            d=options['d'],
            dist=parse_distribution(options['dist']),
            D=options['arity'],
            max_p=config['LIMITS']['MAX_P_INFINITE'],
            tolerance=config['TOLERANCES']['IMAG_RESIDUE'],
        )
        base = parse_angle_list(options['base']) if options['base'] else AngleVector((0.0,) * p, (0.0,) * p)
        rows, minimum = landscape(
            f,
            base,
            parse_axis(options['beta']),
            parse_axis(options['gamma']),
            layer=options['layer'],
            max_points=config['LIMITS']['MAX_LANDSCAPE_POINTS'],
        )
        run_config = {
            'model': options['model'],
            'p': p,
            'd': options['d'],
            'dist': options['dist'],
            'D': options['arity'],
            'beta': options['beta'],
            'gamma': options['gamma'],
            'layer': options['layer'],
            'base': base.as_dict(),
        }
        result = {
            'minimum': {'beta': minimum[0], 'gamma': minimum[1], 'energy': minimum[2]},
            'rows': [{'beta': b, 'gamma': g, 'energy': e} for b, g, e in rows],
        }
        return run_config, result, landscape_csv(rows)
