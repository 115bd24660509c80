from superapp.apps.qaoa_limits.infinite_limit import transfer_sk_to_er
from superapp.apps.qaoa_limits.management.commands._base import QaoaLimitsCommand
from superapp.apps.qaoa_limits.reports import read_angles, write_angles


class Command(QaoaLimitsCommand):
    help = 'Transfer SK-optimal angles to MaxCut on random graphs of average degree d'
    report_name = 'transfer'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--angles',
            type=str,
            required=True,
            help='SK angle file {p, betas, gammas}'
        )
        parser.add_argument(
            '--d',
            type=float,
            required=True,
            help='Average degree of the target graphs'
        )
        parser.add_argument(
            '--angles-output',
            type=str,
            help='Angle file to write the transferred angles to'
        )

    def run(self, options, config):
        sk_angles = read_angles(options['angles'])
        transferred = transfer_sk_to_er(sk_angles, options['d'])
        if options['angles_output']:
            write_angles(options['angles_output'], transferred)
        run_config = {'angles': options['angles'], 'd': options['d']}
        result = {'sk_angles': sk_angles.as_dict(), 'angles': transferred.as_dict()}
        return run_config, result, None
