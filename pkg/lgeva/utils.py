import json
import logging
import math
import os
import sys

import jsonschema
import pandas as pd
import yaml

from lgeva import numerics as nm
from lgeva.errors import RecordSchemaError
from lgeva.macrorealism import ExperimentRecord, PAIRS, pair_key

logger = logging.getLogger(__name__)

API_FILE = os.path.join(os.path.dirname(__file__), 'lg-api.yaml')
SIGNIFICANT_DIGITS = 12
SUM_TOL = nm.STRUCTURAL_TOL


def load_api(path=API_FILE):
    with open(path, 'r') as f:
        return yaml.safe_load(f)


def load_checks(api=None):
    """ load_checks
    Returns the names of the checks flagged with ``x-check`` in the API
    document, in document order
    Parameters
    ----------
    api : dict, optional
        Parsed OpenAPI document; the packaged one by default
    Returns
    -------
    list
        Check names, which are also ``Evaluator`` method names
    """
    api = api or load_api()
    checks = []
    for path, operations in api['paths'].items():
        for operation in operations.values():
            if operation.get('x-check'):
                checks.append(path.split('/')[-1])
    return checks


def record_validator(api=None):
    api = api or load_api()
    schema = {'$ref': '#/components/schemas/ExperimentRecord',
              'components': api['components']}
    return jsonschema.Draft4Validator(schema)


def _field(error):
    return '/'.join(str(p) for p in error.absolute_path) or '<root>'


def parse_record(doc, validator=None):
    """ parse_record
    Validates a JSON document against the ExperimentRecord schema and builds
    the record
    Parameters
    ----------
    doc : dict
        Decoded JSON with ``pairs`` and ``singles``
    Returns
    -------
    ExperimentRecord
    Raises
    ------
    RecordSchemaError
        With one message per offending field; probability sums are checked
        only once the structure is valid
    """
    validator = validator or record_validator()
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    messages = ['%s: %s' % (_field(e), e.message) for e in errors]
    if messages:
        raise RecordSchemaError(messages)
    for pair in PAIRS:
        key = pair_key(pair)
        total = sum(doc['pairs'][key].values())
        if abs(total - 1) > SUM_TOL:
            messages.append('pairs/%s: probabilities sum to %r, expected 1'
                            % (key, total))
    if messages:
        raise RecordSchemaError(messages)
    try:
        return ExperimentRecord.from_json(doc)
    except ValueError as e:
        raise RecordSchemaError(['<root>: %s' % e])


def read_record(path):
    """Read and validate a record file; OSError propagates unchanged."""
    with open(path, 'r') as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise RecordSchemaError(['%s: malformed JSON: %s' % (path, e)])
    return parse_record(doc)


def write_record(record, path):
    with open(path, 'w') as f:
        json.dump(record.to_json(), f, indent=2, sort_keys=True)


def _round(value):
    if isinstance(value, float) and math.isfinite(value):
        return float('%.*g' % (SIGNIFICANT_DIGITS, value))
    return value


def significant(df):
    """Copy of ``df`` with float columns rounded to 12 significant digits."""
    out = df.copy()
    for col in out.columns:
        if pd.api.types.is_float_dtype(out[col]):
            out[col] = out[col].map(_round)
    return out


def write_table(df, path=None, fmt='csv'):
    """ write_table
    Writes a scan table as CSV or JSON records, to ``path`` or stdout
    """
    df = significant(df)
    if fmt == 'csv':
        text = df.to_csv(index=False, float_format='%.12g')
    elif fmt == 'json':
        text = df.to_json(orient='records', double_precision=15) + '\n'
    else:
        raise ValueError("format must be csv or json, got %r" % (fmt,))
    _emit(text, path)


def _jsonable(value):
    if hasattr(value, 'tolist'):
        return value.tolist()
    raise TypeError("%r is not JSON serializable" % (value,))


def write_json(doc, path=None):
    _emit(json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + '\n',
          path)


def _emit(text, path):
    if path is None or path == '-':
        sys.stdout.write(text)
        return
    with open(path, 'w') as f:
        f.write(text)
    logger.info("wrote %s", path)
