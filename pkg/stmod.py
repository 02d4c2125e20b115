"""
stmod command line

    stmod run CONFIG [--window W] [--nmax N] [--seed S] [--out FILE] [--timings] [--db URL]
    stmod preset paper-table|gaps-p3 [same flags]
    stmod history [--limit N] [--db URL]

Exit codes: 0 success, 1 some row is a mismatch, 2 config error.
"""
import argparse
import logging
import os
import sys

from app import create_app
from models.errors import ConfigError
from services import config_service, preset_service, report_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2


def _add_run_flags(parser):
    parser.add_argument('--window', type=int, help='sphere window W (default 2 * radical length of kG)')
    parser.add_argument('--nmax', type=int, help='universal ghost iteration cap')
    parser.add_argument('--seed', type=int, help='seed for randomized decompositions')
    parser.add_argument('--out', help='results file (JSON)')
    parser.add_argument('--timings', action='store_true', help='record runtime_ms in the results file')
    parser.add_argument('--db', help='database URL for the run history')
    parser.add_argument('--parallel', action='store_true', help='dispatch rows through Celery')


def build_parser():
    parser = argparse.ArgumentParser(prog='stmod', description='Ghost numbers and stable module computations')
    sub = parser.add_subparsers(dest='command', required=True)

    run_parser = sub.add_parser('run', help='run a config file')
    run_parser.add_argument('config')
    _add_run_flags(run_parser)

    preset_parser = sub.add_parser('preset', help='run a built-in config')
    preset_parser.add_argument('name', choices=preset_service.list_presets())
    _add_run_flags(preset_parser)

    history_parser = sub.add_parser('history', help='list stored runs')
    history_parser.add_argument('--limit', type=int, default=20)
    history_parser.add_argument('--db', help='database URL for the run history')
    return parser


def _overrides(args):
    overrides = {'database_url': getattr(args, 'db', None)}
    if getattr(args, 'command', None) != 'history':
        overrides.update({
            'window': args.window,
            'nmax': args.nmax,
            'seed': args.seed,
            'record_timings': True if args.timings else None,
        })
    return overrides


def _read_config(args):
    if args.command == 'preset':
        return preset_service.load_preset(args.name), args.name
    with open(args.config, 'r', encoding='utf-8') as f:
        return f.read(), os.path.basename(args.config)


def _history(app, args):
    if not app.history_enabled:
        print('No run history: set STMOD_DATABASE_URL or pass --db', file=sys.stderr)
        return EXIT_CONFIG
    from database.db_runs import list_runs
    for run in list_runs(args.limit):
        print(f"{run['id']:5d}  {run['created_at'] or '-':<26}  {run['config_name']:<24} "
              f"seed {run['seed']}  rows {run['row_count']}  exit {run['exit_status']}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        app = create_app(_overrides(args))
    except ConfigError as e:
        print(f"stmod: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == 'history':
        return _history(app, args)

    settings = app.settings
    try:
        text, name = _read_config(args)
        config = config_service.parse_config(text, name)
        if args.seed is None and config.seed is not None:
            settings['seed'] = config.seed
        report = report_service.run(config, settings, parallel=args.parallel)
    except (ConfigError, OSError) as e:
        logger.error(f"Config error: {e}")
        print(f"stmod: {e}", file=sys.stderr)
        return EXIT_CONFIG

    sys.stdout.write(report.to_text())
    out = args.out or config.output
    if out:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(report.to_json())
    if app.history_enabled:
        from database.db_runs import save_report
        save_report(report, settings)
    return report.exit_status


if __name__ == '__main__':
    sys.exit(main())
