from ghzlab.bowtie import BowTie, bowtie_game
from ghzlab.exceptions import DomainError
from ghzlab.f2linear import from_hex
from ghzlab.games import coordinate_value, ghz, repeat
from ghzlab.management.base import LabCommand


class Command(LabCommand):
    help = 'Exact per-coordinate value of GHZ^n, optionally under a bow-tie distribution'
    command_name = 'coord-value'

    def add_arguments(self, parser):
        self.add_common_arguments(parser)
        parser.add_argument('--coordinate', type=int, help='1-based coordinate (default: all)')
        parser.add_argument('--bowtie', help='Corners x0,x1,y0,y1 as hex words')

    def execute_lab(self, options):
        config = self.build_config(options)
        n = config.n
        if options.get('bowtie'):
            corners = [from_hex(c) for c in options['bowtie'].split(',')]
            if len(corners) != 4:
                raise DomainError('--bowtie needs four hex words x0,x1,y0,y1')
            if any(c >> n for c in corners):
                raise DomainError(f"--bowtie corners must be words of F_2^{n}")
            b = BowTie.canonical(*corners)
            game = bowtie_game(b, n)
        else:
            b = None
            game = ghz() if n == 1 else repeat(ghz(), n)
        coordinates = [options['coordinate']] if options.get('coordinate') else range(1, n + 1)
        values = {}
        for j in coordinates:
            values[str(j)] = coordinate_value(game, j, threads=config.threads)[0]
            self.stdout.write(f"val^({j})({game.name}) = {values[str(j)]}")
        report = {'game': game.name, 'n': n, 'values': values}
        if b is not None:
            report['bowtie'] = b.to_json()
            report['differing'] = list(b.differing())
        self.emit(report, config, f"coord_value_n{n}")
