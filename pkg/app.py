"""
Trust game toolkit - unified entry point

Examples:
  python app.py shapley trustgame/examples/g3.txt
  python app.py banzhaf trustgame/examples/g3.txt --oracle
  python app.py value trustgame/examples/g3.txt --coalition 1,2
  python app.py core trustgame/examples/g3.txt
  python app.py marginal trustgame/examples/gf.json --edge k2,j --target i
  python app.py sweep trustgame/examples/gf.json --edge i,j --targets i,j,k2 > sweep.tsv
  python app.py verify trustgame/examples/g3.txt --max-n 10
  python app.py verify --manifest config/job_config_verify.json
"""

import argparse
import sys
from pathlib import Path

script_dir = Path(__file__).parent
repo_root = script_dir
if str(repo_root) not in sys.path:
    sys.path.insert(0, str(repo_root))

from trustgame.python.cli import Command, run


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--format',
        choices=['edge_list', 'json'],
        default=None,
        help='Graph file format (default: by extension, .json is JSON)'
    )
    common.add_argument(
        '--verbose',
        action='store_true',
        help='Enable debug logging on stderr'
    )
    common.add_argument(
        '--threads',
        type=int,
        default=None,
        help='Worker threads for exhaustive checkers (default: physical cores, capped by config)'
    )
    common.add_argument(
        '--seed',
        type=int,
        default=None,
        help='Seed for sampled checks (default: from config)'
    )
    common.add_argument(
        '--max-n',
        type=int,
        default=None,
        help='Override every exhaustive guard (also TRUSTGAME_MAX_N)'
    )

    parser = argparse.ArgumentParser(
        description='Trust game toolkit: values, decomposition, core and checks',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__
    )
    subparsers = parser.add_subparsers(
        dest='command',
        help='Available commands',
        required=True
    )

    def add_verb(name: str, help_text: str, graph_required: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text, parents=[common])
        sub.add_argument(
            'graph',
            nargs=None if graph_required else '?',
            help='Graph file (edge list "from to weight" per line, or JSON)'
        )
        return sub

    parser_value = add_verb('value', 'Characteristic function v(S) of one coalition')
    parser_value.add_argument(
        '--coalition',
        type=str,
        default='',
        help='Comma-separated player labels (default: empty coalition)'
    )

    for verb in ('shapley', 'banzhaf'):
        parser_alloc = add_verb(verb, f'Closed-form {verb.capitalize()} value')
        parser_alloc.add_argument(
            '--oracle',
            action='store_true',
            help='Add the brute-force value and the max abs difference'
        )

    add_verb('core', 'Core allocation, membership check and identity')
    add_verb('decompose', 'Unanimity decomposition (terms and aggregated dividends)')

    parser_marginal = add_verb('marginal', 'Slope of a player value in one edge weight')
    parser_marginal.add_argument('--edge', type=str, required=True, help='Edge as from,to')
    parser_marginal.add_argument('--target', type=str, required=True, help='Player label')
    parser_marginal.add_argument('--method', choices=['shapley', 'banzhaf'], default='shapley')

    parser_sweep = add_verb('sweep', 'Values of target players while one edge weight runs over [0, 1]')
    parser_sweep.add_argument('--edge', type=str, required=True, help='Edge as from,to')
    parser_sweep.add_argument('--targets', type=str, default=None, help='Player labels (default: head,tail)')
    parser_sweep.add_argument('--steps', type=int, default=None, help='Grid points (default: from config)')
    parser_sweep.add_argument('--method', choices=['shapley', 'banzhaf'], default='shapley')
    parser_sweep.add_argument('--json', action='store_true', help='Emit JSON instead of TSV')

    parser_verify = add_verb('verify', 'Run the verification suites', graph_required=False)
    parser_verify.add_argument(
        '--manifest',
        type=str,
        default=None,
        help='Verify job manifest (job_type "verify"), e.g. config/job_config_verify.json'
    )
    parser_verify.add_argument(
        '--suites',
        type=str,
        default=None,
        help='Comma-separated suites (default: all)'
    )
    parser_verify.add_argument(
        '--sample',
        type=int,
        default=None,
        help='Sampled superadditivity/monotonicity checks with this many draws'
    )

    add_verb('props', 'Graph summary: in-degrees, isolated and zero-Shapley players')

    parser_attr = add_verb('attribution', 'Per-edge breakdown of one player value')
    parser_attr.add_argument('--player', type=str, required=True, help='Player label')
    parser_attr.add_argument('--method', choices=['shapley', 'banzhaf'], default='shapley')

    return parser


def main():
    parser = build_parser()
    args = parser.parse_args()

    if args.command == 'verify' and args.manifest:
        from trustgame.run_verify_job import main as verify_job_main
        argv = ['run_verify_job.py', args.manifest]
        if args.verbose:
            argv.append('--verbose')
        if args.threads is not None:
            argv.extend(['--threads', str(args.threads)])
        if args.max_n is not None:
            argv.extend(['--max-n', str(args.max_n)])
        if args.suites is not None:
            argv.extend(['--suites', args.suites])
        if args.sample is not None:
            argv.extend(['--sample', str(args.sample)])
        if args.seed is not None:
            argv.extend(['--seed', str(args.seed)])
        sys.argv = argv
        return verify_job_main()

    if not args.graph:
        parser.error(f'{args.command}: a graph file is required')

    options = {
        key: value
        for key, value in vars(args).items()
        if key not in ('command', 'graph', 'manifest')
    }
    return run(Command(verb=args.command, graph_path=args.graph, options=options))


if __name__ == '__main__':
    sys.exit(main())
