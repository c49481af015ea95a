"""Command-line front end: ``lg-eva <subcommand> [options]``.

Exit codes: 0 success, 1 usage or schema error, 2 I/O error, 3 numerical
failure.
"""
import argparse
import logging
import sys

from lgeva import scans
from lgeva import spin as sp
from lgeva import utils as ut
from lgeva.config import load_config
from lgeva.errors import LgEvaError, RecordSchemaError

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is our I/O code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '%s: error: %s\n' % (self.prog, message))


def parse_two_j(text):
    """``"4"`` or ``"1..20"`` (inclusive) into ``(two_j_min, two_j_max)``."""
    try:
        if '..' in text:
            lo, hi = text.split('..', 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected 2j as N or MIN..MAX, got %r" % (text,))


def parse_schedule(text):
    try:
        return sp.AngleSchedule.from_string(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--two-j', type=parse_two_j, metavar='N|MIN..MAX',
                        help='spin range as 2j')
    common.add_argument('--lambda-min', type=float)
    common.add_argument('--lambda-max', type=float)
    common.add_argument('--lambda-step', type=float)
    common.add_argument('--schedule', type=parse_schedule,
                        metavar='a1,a2,a3,a4', help='angles in radians')
    common.add_argument('--odd-mode', choices=sp.ODD_MODES)
    common.add_argument('--zero-beam-rate', type=float, metavar='RATE',
                        help='zero-beam angle per block angle; 2 is the '
                             'uncalibrated reading')
    common.add_argument('--format', dest='fmt', choices=scans.FORMATS,
                        default='csv')
    common.add_argument('--out', metavar='PATH', help="output file, '-' for stdout")
    common.add_argument('--seed', type=int)
    common.add_argument('--tol', type=float)
    common.add_argument('--workers', type=int)
    common.add_argument('--config', metavar='PATH', help='extra INI file')
    common.add_argument('-v', '--verbose', action='store_true')

    parser = _Parser(prog='lg-eva', description=(
        'Leggett-Garg scans for arbitrary spin and macrorealism '
        'certification of four-time records.'))
    sub = parser.add_subparsers(dest='mode', metavar='MODE')
    sub.required = True
    sub.add_parser('gp-scan', parents=[common],
                   help='block-scheme LG sum for each spin in range')
    sub.add_parser('kb-scan', parents=[common],
                   help='parity-scheme sum on a grid; --two-j adds finite-spin series')
    sub.add_parser('unsharp-scan', parents=[common],
                   help='LG sums against sharpness with threshold crossings')
    certify = sub.add_parser('certify', parents=[common],
                             help='macrorealism verdict of a record file')
    certify.add_argument('record', metavar='RECORD.json')
    sub.add_parser('audit', parents=[common],
                   help='LGI/NSIT, LG-CH and NIRM agreement on seeded corpora')
    return parser


def config_from_args(args):
    config = load_config(args.config)
    overrides = dict(mode=args.mode, schedule=args.schedule,
                     odd_mode=args.odd_mode,
                     zero_beam_rate=args.zero_beam_rate, fmt=args.fmt, out=args.out,
                     seed=args.seed, tol=args.tol, workers=args.workers,
                     lambda_min=args.lambda_min, lambda_max=args.lambda_max,
                     lambda_step=args.lambda_step)
    if args.two_j is not None:
        overrides['two_j_min'], overrides['two_j_max'] = args.two_j
        if args.mode == 'kb-scan':
            overrides['kb_two_j'] = list(range(args.two_j[0],
                                               args.two_j[1] + 1))
    return scans.ScanConfig.from_config(config, **overrides).validate()


def run(cfg, record=None):
    if cfg.mode == 'gp-scan':
        ut.write_table(scans.run_gp_scan(cfg), cfg.out, cfg.fmt)
    elif cfg.mode == 'kb-scan':
        ut.write_table(scans.run_kb_scan(cfg), cfg.out, cfg.fmt)
    elif cfg.mode == 'unsharp-scan':
        table, _ = scans.run_unsharp_scan(cfg)
        ut.write_table(table, cfg.out, cfg.fmt)
    elif cfg.mode == 'certify':
        ut.write_json(scans.run_certify(record, cfg.tol), cfg.out)
    elif cfg.mode == 'audit':
        table, summary = scans.run_audit(cfg)
        ut.write_table(table, cfg.out, cfg.fmt)
        if summary['disagreements']:
            logger.warning("%d records where the criteria disagree",
                           summary['disagreements'])


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    try:
        cfg = config_from_args(args)
        run(cfg, getattr(args, 'record', None))
    except ArithmeticError as e:
        sys.stderr.write('numerical failure: %s\n' % e)
        return EXIT_NUMERIC
    except RecordSchemaError as e:
        for message in e.messages:
            sys.stderr.write('schema error: %s\n' % message)
        return EXIT_USAGE
    except (LgEvaError, ValueError) as e:
        sys.stderr.write('error: %s\n' % e)
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write('I/O error: %s: %s\n' % (e.filename or '', e.strerror or e))
        return EXIT_IO
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
