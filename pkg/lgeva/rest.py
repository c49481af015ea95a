"""Connexion handlers for ``lg-api.yaml``.

Record endpoints receive an ExperimentRecord as ``body``; every handler
returns ``(result, status)``.
"""
import json
import logging

from lgeva import macrorealism as mr
from lgeva import scans
from lgeva import utils as ut
from lgeva.evaluator import Evaluator
from lgeva.errors import LgEvaError, RecordSchemaError

logger = logging.getLogger(__name__)


def _error(code, e):
    logger.warning("request failed: %s", e)
    return {'code': code, 'message': '%s' % e}, code


def _evaluator(body, tol):
    return Evaluator(ut.parse_record(body), tol)


def _rows(df):
    return json.loads(ut.significant(df).to_json(orient='records',
                                                 double_precision=15))


def certify(body, tol=mr.DEFAULT_TOL):
    try:
        eva = _evaluator(body, tol)
        return eva.verdict().as_dict(), 200
    except RecordSchemaError as e:
        return {'code': 400, 'message': 'invalid record',
                'errors': e.messages}, 400
    except ArithmeticError as e:
        return _error(500, e)


def checks_all(body, tol=mr.DEFAULT_TOL):
    try:
        eva = _evaluator(body, tol)
    except RecordSchemaError as e:
        return {'code': 400, 'message': 'invalid record',
                'errors': e.messages}, 400
    results = {}
    for check in ut.load_checks():
        logger.info("Running - %s", check)
        try:
            results[check] = eva.run(check)
        except ArithmeticError as e:
            results[check] = {'name': check, 'msg': 'Exception: %s' % e,
                              'points': 0, 'test_status': eva.test_status(0),
                              'score': {'earned': 0, 'total': 100}}
    return results, 200


def _check_handler(check):
    def handler(body, tol=mr.DEFAULT_TOL):
        try:
            eva = _evaluator(body, tol)
            return eva.run(check), 200
        except RecordSchemaError as e:
            return {'code': 400, 'message': 'invalid record',
                    'errors': e.messages}, 400
        except ArithmeticError as e:
            return _error(500, e)
    handler.__name__ = check
    return handler


mr_lgi = _check_handler('mr_lgi')
mr_lgi_canonical = _check_handler('mr_lgi_canonical')
mr_lgch = _check_handler('mr_lgch')
mr_nsit = _check_handler('mr_nsit')
mr_nirm = _check_handler('mr_nirm')
mr_equivalence = _check_handler('mr_equivalence')


def gp_scan(two_j_min=1, two_j_max=20, odd_mode='rabi'):
    try:
        cfg = scans.ScanConfig('gp-scan', two_j_min=two_j_min,
                               two_j_max=two_j_max, odd_mode=odd_mode)
        return _rows(scans.run_gp_scan(cfg)), 200
    except (LgEvaError, ValueError) as e:
        return _error(400, e)


def kb_scan(points=315):
    try:
        cfg = scans.ScanConfig('kb-scan', kb_points=points)
        return _rows(scans.run_kb_scan(cfg)), 200
    except (LgEvaError, ValueError) as e:
        return _error(400, e)


def unsharp_scan(lambda_min=0.5, lambda_max=1.0, lambda_step=0.01):
    try:
        cfg = scans.ScanConfig('unsharp-scan', lambda_min=lambda_min,
                               lambda_max=lambda_max, lambda_step=lambda_step)
        table, crossings = scans.run_unsharp_scan(cfg)
        return {'rows': _rows(table), 'crossings': crossings}, 200
    except (LgEvaError, ValueError) as e:
        return _error(400, e)
