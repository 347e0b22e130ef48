#!/usr/bin/env python3

import argparse
import sys
from pathlib import Path


script_dir = Path(__file__).parent
repo_root = script_dir.parent
if str(repo_root) not in sys.path:
    sys.path.insert(0, str(repo_root))

from trustgame.python.cli import Command, run
from trustgame.python.cli.suites import SUITES
from trustgame.python.core import config_utils, logger
from trustgame.python.core.config_utils import ConfigError


def main():
    parser = argparse.ArgumentParser(
        description='Trust game verify job - runs the suites listed in a job manifest'
    )
    parser.add_argument(
        'manifest_path',
        help='Path to the verify job manifest JSON file'
    )
    parser.add_argument(
        '--verbose',
        action='store_true',
        help='Enable verbose output'
    )
    parser.add_argument('--threads', type=int, default=None, help='Worker threads')
    parser.add_argument('--max-n', type=int, default=None, help='Override every exhaustive guard')
    parser.add_argument('--suites', type=str, default=None, help='Comma-separated suites, replaces the manifest list')
    parser.add_argument('--sample', type=int, default=None, help='Sample count, replaces the manifest value')
    parser.add_argument('--seed', type=int, default=None, help='Sampling seed, replaces the manifest value')

    args = parser.parse_args()
    if args.verbose:
        logger.set_level('debug')

    try:
        manifest = config_utils.load_manifest(args.manifest_path)
        job_id = config_utils.validate_manifest_type(manifest, 'verify')
        manifest = config_utils.merge_configs(manifest)
    except ConfigError as e:
        logger.error(str(e))
        return 1

    graph = manifest.get('graph')
    if not graph:
        logger.error(f"Manifest '{job_id}' names no 'graph'")
        return 1
    if args.suites is not None:
        suites = [s.strip() for s in args.suites.split(',') if s.strip()]
    else:
        suites = manifest.get('suites') or list(SUITES)

    logger.header("Trust game verify job")
    logger.kv("Job ID:", job_id)
    logger.kv("Graph:", graph)
    logger.kv("Suites:", ", ".join(suites))
    logger.separator()

    options = {
        'suites': suites,
        'config': manifest.get('config') or {},
        'sample': args.sample if args.sample is not None else manifest.get('sample'),
        'seed': args.seed if args.seed is not None else manifest.get('seed'),
        'threads': args.threads,
        'max_n': args.max_n,
        'verbose': args.verbose,
    }
    exit_code = run(Command(verb='verify', graph_path=str(config_utils.resolve_repo_path(graph)), options=options))

    logger.separator()
    logger.info(f"Verify job {job_id} finished with exit code {exit_code}")
    return exit_code


if __name__ == '__main__':
    sys.exit(main())
