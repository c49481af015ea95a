"""Parameter sweeps, certification and audits behind the command line.

Every ``run_*`` function is pure apart from logging: it takes a
:class:`ScanConfig` and returns a ``pandas.DataFrame`` (plus a summary where
noted). Writing files is left to :mod:`lgeva.utils`.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from lgeva import dynamics as dyn
from lgeva import macrorealism as mr
from lgeva import numerics as nm
from lgeva import spin as sp
from lgeva import utils as ut
from lgeva.errors import ScanConfigError
from lgeva.evaluator import Evaluator

logger = logging.getLogger(__name__)

MODES = ('gp-scan', 'kb-scan', 'unsharp-scan', 'certify', 'audit')
FORMATS = ('csv', 'json')


@dataclass
class ScanConfig(object):
    mode: str = 'gp-scan'
    two_j_min: int = 1
    two_j_max: int = 20
    lambda_min: float = 0.5
    lambda_max: float = 1.0
    lambda_step: float = 1e-4
    schedule: sp.AngleSchedule = sp.CANONICAL_SCHEDULE
    odd_mode: str = 'rabi'
    zero_beam_rate: float = 0.5
    kb_points: int = 315
    kb_grid: int = 10 ** 4
    kb_two_j: list = field(default_factory=list)
    fmt: str = 'csv'
    out: str = None
    seed: int = 20141104
    tol: float = mr.DEFAULT_TOL
    band: float = mr.DEFAULT_TOL
    random_records: int = 1000
    quantum_records: int = 200
    workers: int = 1

    def validate(self):
        if self.mode not in MODES:
            raise ScanConfigError("unknown mode %r" % (self.mode,))
        if self.fmt not in FORMATS:
            raise ScanConfigError("format must be one of %s" % (FORMATS,))
        if self.two_j_min < 1 or self.two_j_max < self.two_j_min:
            raise ScanConfigError("empty spin range 2j = %d..%d"
                                  % (self.two_j_min, self.two_j_max))
        if self.lambda_step <= 0:
            raise ScanConfigError("lambda step must be positive")
        if not 0 < self.lambda_min <= self.lambda_max <= 1:
            raise ScanConfigError("lambda range [%g, %g] is not inside (0, 1]"
                                  % (self.lambda_min, self.lambda_max))
        if self.odd_mode not in sp.ODD_MODES:
            raise ScanConfigError("odd mode must be one of %s"
                                  % (sp.ODD_MODES,))
        if self.zero_beam_rate <= 0:
            raise ScanConfigError("zero-beam rate must be positive")
        if self.kb_points < 2 or self.kb_grid < 3:
            raise ScanConfigError("kb grids need at least 2 points")
        if self.workers < 1:
            raise ScanConfigError("workers must be positive")
        return self

    @classmethod
    def from_config(cls, config, **overrides):
        """Build from the ``[scan]`` and ``[audit]`` sections of a ConfigParser."""
        scan, audit = config['scan'], config['audit']
        values = dict(
            two_j_min=scan.getint('two_j_min'),
            two_j_max=scan.getint('two_j_max'),
            lambda_min=scan.getfloat('lambda_min'),
            lambda_max=scan.getfloat('lambda_max'),
            lambda_step=scan.getfloat('lambda_step'),
            odd_mode=scan.get('odd_mode'),
            zero_beam_rate=scan.getfloat('zero_beam_rate'),
            kb_points=scan.getint('kb_points'),
            kb_grid=scan.getint('kb_grid'),
            seed=scan.getint('seed'),
            workers=scan.getint('workers'),
            band=audit.getfloat('band'),
            random_records=audit.getint('random_records'),
            quantum_records=audit.getint('quantum_records'),
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def spins(self):
        return [sp.SpinValue(t) for t in range(self.two_j_min,
                                               self.two_j_max + 1)]

    @property
    def lambdas(self):
        n = int(math.floor((self.lambda_max - self.lambda_min)
                           / self.lambda_step + 1e-6)) + 1
        return [round(self.lambda_min + k * self.lambda_step, 12)
                for k in range(n)]


def _map(fn, items, workers):
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_gp_scan(cfg):
    """Block-scheme LG sum for every spin in range, closed and simulated."""
    cfg.validate()

    def row(spin):
        return {
            'two_j': spin.two_j,
            'j': spin.j,
            'K_closed': sp.gp_lg_sum(spin, cfg.schedule),
            'K_simulated': sp.gp_lg_sum_simulated(
                spin, cfg.schedule, 1.0, cfg.odd_mode, cfg.zero_beam_rate),
        }

    table = pd.DataFrame(_map(row, cfg.spins, cfg.workers),
                         columns=['two_j', 'j', 'K_closed', 'K_simulated'])
    logger.info("gp scan: %d spins, K_simulated in [%.12g, %.12g]",
                len(table), table.K_simulated.min(), table.K_simulated.max())
    return table


def run_kb_scan(cfg):
    """Parity sum on a grid of ``x`` in [0, π] with its maxima.

    The ``limit`` series is the large-spin expression; one extra series per
    entry of ``cfg.kb_two_j`` uses the finite-spin correlation. Each series
    ends with an ``argmax`` row.
    """
    cfg.validate()
    xs = np.linspace(0.0, math.pi, cfg.kb_points)
    series = [('limit', sp.kb_K)]
    for two_j in cfg.kb_two_j:
        spin = sp.SpinValue(two_j)
        series.append(('2j=%d' % two_j,
                       lambda x, spin=spin: sp.kb_finite_k(spin, x)))
    rows = []
    for name, f in series:
        rows.extend({'series': name, 'kind': 'grid', 'x': float(x),
                     'K': f(x)} for x in xs)
        x_star, k_star = sp.maximize(f, 0.0, math.pi, cfg.kb_grid)
        rows.append({'series': name, 'kind': 'argmax', 'x': x_star,
                     'K': k_star})
        logger.info("kb scan %s: max K = %.6f at x = %.6f", name, k_star,
                    x_star)
    return pd.DataFrame(rows, columns=['series', 'kind', 'x', 'K'])


def run_unsharp_scan(cfg):
    """LG sums of both schemes against sharpness, with threshold crossings.

    Returns
    -------
    table : pandas.DataFrame
        ``grid`` rows ``(lambda, K_gp, K_kb)`` followed by one
        ``crossing_gp`` and one ``crossing_kb`` row holding the analytic
        threshold and, in ``lambda_grid``, the first grid point violating.
    crossings : dict
    """
    cfg.validate()
    spin = sp.SpinValue(cfg.two_j_min)
    _, kb_max = sp.kb_optimum(cfg.kb_grid)

    def row(lam):
        return {'kind': 'grid', 'lambda': lam,
                'K_gp': sp.gp_lg_sum_simulated(spin, cfg.schedule, lam,
                                               cfg.odd_mode,
                                               cfg.zero_beam_rate),
                'K_kb': lam ** 2 * kb_max}

    table = pd.DataFrame(_map(row, cfg.lambdas, cfg.workers))
    crossings = {}
    for scheme, k_sharp in (('gp', table.K_gp.iloc[-1] / cfg.lambdas[-1] ** 2),
                            ('kb', kb_max)):
        violating = table[table['K_' + scheme] > 2]
        crossings[scheme] = {
            'threshold': sp.sharpness_threshold(k_sharp) if k_sharp > 2 else None,
            'first_violating_grid_lambda': (float(violating['lambda'].iloc[0])
                                            if len(violating) else None),
        }
        logger.info("%s threshold %s, first violating grid point %s", scheme,
                    crossings[scheme]['threshold'],
                    crossings[scheme]['first_violating_grid_lambda'])
    extra = pd.DataFrame([
        {'kind': 'crossing_' + scheme, 'lambda': c['threshold'],
         'lambda_grid': c['first_violating_grid_lambda']}
        for scheme, c in crossings.items()])
    table = pd.concat([table, extra], ignore_index=True)
    return table[['kind', 'lambda', 'K_gp', 'K_kb', 'lambda_grid']], crossings


def violation_sweep(spin, lam, steps=100, odd_mode='rabi'):
    """Largest LG variant over equidistant schedules with step in [0, π].

    Returns
    -------
    float
        The maximum over the sweep of the maximum of the eight LG sums.
    """
    worst = -math.inf
    for step in np.linspace(0.0, math.pi, steps):
        schedule = sp.AngleSchedule.equidistant(step)
        rec = mr.gp_record(spin, schedule, lam, odd_mode)
        worst = max(worst, max(mr.lg_sums(rec)))
    return worst


def run_certify(path, tol=mr.DEFAULT_TOL):
    """Full macrorealism report of the record stored at ``path``."""
    record = ut.read_record(path)
    eva = Evaluator(record, tol)
    report = eva.verdict().as_dict()
    report['principal_lgch'] = report['lgch_values'][0]
    report['checks'] = {check: eva.run(check) for check in ut.load_checks()}
    report['macrorealist'] = all(c['test_status'] == 'pass'
                                 for name, c in report['checks'].items()
                                 if name != 'mr_equivalence')
    return report


def quantum_corpus(rng, count):
    """Records of genuine quantum measurements on maximally mixed states.

    Even indices use the block scheme (random spin, equidistant schedule
    and sharpness); odd indices use random qubit unitaries with an unsharp
    σz measurement and true sequential statistics.
    """
    sigma_z = dyn.DichotomicObservable.from_matrix(nm.SIGMA_Z)
    records = []
    for k in range(count):
        lam = float(rng.uniform(0.5, 1.0))
        if k % 2 == 0:
            spin = sp.SpinValue(int(rng.integers(1, 6)))
            schedule = sp.AngleSchedule.equidistant(rng.uniform(0, math.pi))
            records.append(mr.gp_record(spin, schedule, lam))
        else:
            unitaries = [nm.random_unitary(2, rng) for _ in range(4)]
            records.append(mr.quantum_record(
                dyn.maximally_mixed(2), dyn.make_unsharp(sigma_z, lam),
                unitaries))
    return records


def run_audit(cfg):
    """Check the three macrorealism criteria against each other on corpora.

    Returns
    -------
    table : pandas.DataFrame
        One row per record.
    summary : dict
        Record counts and disagreement counts for both LGI readings.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    corpora = [('random', mr.random_nsit_record(rng))
               for _ in range(cfg.random_records)]
    corpora += [('quantum', rec)
                for rec in quantum_corpus(rng, cfg.quantum_records)]

    def row(item):
        source, rec = item
        audit = mr.equivalence_audit(rec, cfg.tol, cfg.band)
        return {'source': source, 'max_lg': max(mr.lg_sums(rec)),
                'lgi_nsit': audit.lgi_nsit,
                'lgi_canonical_nsit': audit.lgi_canonical_nsit,
                'lgch': audit.lgch, 'nirm': audit.nirm,
                'boundary': audit.boundary, 'agree': audit.agree,
                'agree_canonical': audit.agree_canonical}

    table = pd.DataFrame(_map(row, corpora, cfg.workers))
    summary = {
        'records': len(table),
        'violating': int((~table.nirm).sum()),
        'disagreements': int((~table.agree).sum()),
        'canonical_disagreements': int((~table.agree_canonical).sum()),
        'boundary': int(table.boundary.sum()),
    }
    logger.info("audit: %s", summary)
    return table, summary
