"""Command line interface.

.. code-block:: bash

    skchemo run config.txt --out diagnostics.csv
    skchemo run --scenario thm13-r0 --set nx=32 --set ny=32 -v
    skchemo sweep --scenario sweep-r1 --mu 0.5,2,8,32 --workers 4
    skchemo fit diagnostics.csv --column linf_n --model alg --window 10,100
    skchemo selftest --quick
    skchemo scenarios

Exit status is 0 on success, 1 on a numerical failure or a failed check and
2 on a configuration error.

"""

import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from skchemo import io
from skchemo.errors import (BlowUpError, ConfigurationError, FitError,
                            SolverError)
from skchemo.oracles import fit_decay
from skchemo.runner import SCENARIOS, make_config, run, sweep_mu
from skchemo.selftest import selftest


logger = logging.getLogger('skchemo')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated numbers, "
                                         "got '{}'".format(text))


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated integers, "
                                         "got '{}'".format(text))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='skchemo',
        description="Chemotaxis-Navier-Stokes simulator with singular "
        "sensitivity and logistic source.")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="-v for progress, -vv for solver output")
    sub = parser.add_subparsers(dest='command', required=True)

    def add_config_arguments(p):
        p.add_argument('config', nargs='?', help="key = value file")
        p.add_argument('--scenario', help="start from a named scenario")
        p.add_argument('--set', action='append', default=[],
                       metavar='KEY=VALUE', help="override a key")
        p.add_argument('--out', help="CSV output path")

    p = sub.add_parser('run', help="integrate one configuration")
    add_config_arguments(p)
    p.add_argument('--vtk', help="write the final state with meshio")

    p = sub.add_parser('sweep', help="repeat a run for several mu")
    add_config_arguments(p)
    p.add_argument('--mu', type=_floats, required=True)
    p.add_argument('--workers', type=int, default=1)

    p = sub.add_parser('fit', help="fit a decay rate to a CSV column")
    p.add_argument('csv')
    p.add_argument('--column', required=True)
    p.add_argument('--model', choices=('exp', 'alg'), required=True)
    p.add_argument('--window', type=_floats, required=True)

    p = sub.add_parser('selftest', help="evaluate the acceptance criteria")
    p.add_argument('--quick', action='store_true')
    p.add_argument('--only', type=_ints)
    p.add_argument('--mutate-stencil', action='store_true',
                   help="flip the Laplacian stencil; the suite must fail")

    sub.add_parser('scenarios', help="list the named scenarios")
    return parser


def _config(args):
    mapping = io.config.from_file(args.config) if args.config else {}
    mapping.update(io.config.parse_overrides(args.set))
    if args.out is not None:
        mapping['out_path'] = args.out
    if getattr(args, 'vtk', None) is not None:
        mapping['vtk_path'] = args.vtk
    return make_config(mapping, scenario=args.scenario)


def cmd_run(args) -> int:
    result = run(_config(args))
    row = result.rows[-1]
    print("t = {:.6g}: mass = {:.6g}, dev_inf = {:.6e}, energy = {:.6e}"
          .format(row.t, row.mass, row.dev_inf, row.energy_f))
    for check in result.checks:
        print(check)
    for fit in result.fits:
        print("fit {:<11s} rate = {:.6g}, amplitude = {:.6g}, r2 = {:.6f}"
              .format(fit.model, fit.rate, fit.amplitude, fit.r_squared))
    return EXIT_OK if all(c.passed for c in result.checks) else EXIT_FAILURE


def cmd_sweep(args) -> int:
    config = _config(args)
    rows = sweep_mu(config, args.mu, workers=args.workers)
    header = ('mu', 'bounded', 'final_dev_inf', 'rate')
    print(','.join(header))
    for row in rows:
        print("{:g},{},{:.16e},{:.16e}".format(row.mu, int(row.bounded),
                                               row.final_dev_inf, row.rate))
    if config.out_path is not None:
        io.csv.to_file(config.out_path, header,
                       [(r.mu, float(r.bounded), r.final_dev_inf, r.rate)
                        for r in rows])
    return EXIT_OK if all(row.bounded for row in rows) else EXIT_FAILURE


def cmd_fit(args) -> int:
    table = io.csv.from_file(args.csv)
    if args.column not in table or 't' not in table:
        raise ConfigurationError("Column '{}' not found in '{}'."
                                 .format(args.column, args.csv))
    if len(args.window) != 2:
        raise ConfigurationError("--window expects two numbers.")
    fit = fit_decay(table['t'], table[args.column], args.model,
                    tuple(args.window))
    print("model = {}\nrate = {:.16e}\namplitude = {:.16e}\nr_squared = "
          "{:.16e}\nsamples = {}".format(fit.model, fit.rate, fit.amplitude,
                                         fit.r_squared, fit.samples))
    return EXIT_OK


def cmd_selftest(args) -> int:
    report = selftest(quick=args.quick, only=args.only,
                      mutate_stencil=args.mutate_stencil)
    sys.stdout.write(report.text())
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_scenarios(args) -> int:
    for name, values in SCENARIOS.items():
        print("# {}".format(name))
        print(io.config.to_text(values))
    return EXIT_OK


COMMANDS = {
    'run': cmd_run,
    'sweep': cmd_sweep,
    'fit': cmd_fit,
    'selftest': cmd_selftest,
    'scenarios': cmd_scenarios,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose,
                                                       logging.DEBUG)
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except (BlowUpError, SolverError, FitError) as e:
        logger.error("%s", e)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
