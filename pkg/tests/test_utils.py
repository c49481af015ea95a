import json

import pandas as pd
import pytest

from lgeva import utils as ut
from lgeva.errors import RecordSchemaError


def planted_doc(fixture_path):
    with open(fixture_path('classical_planted.json')) as f:
        return json.load(f)


def test_parse_valid_record(fixture_path):
    rec = ut.parse_record(planted_doc(fixture_path))
    assert rec.single(3) == pytest.approx(0.9)


def test_field_level_messages(fixture_path):
    doc = planted_doc(fixture_path)
    doc['pairs']['12']['pp'] = 1.4
    del doc['singles']['4']
    with pytest.raises(RecordSchemaError) as e:
        ut.parse_record(doc)
    messages = e.value.messages
    assert len(messages) == 2
    assert any(m.startswith('pairs/12/pp') for m in messages)
    assert any(m.startswith('singles') for m in messages)


def test_probability_sum_flagged(fixture_path):
    doc = planted_doc(fixture_path)
    doc['pairs']['23']['mm'] = 0.2
    with pytest.raises(RecordSchemaError) as e:
        ut.parse_record(doc)
    assert e.value.messages[0].startswith('pairs/23')


def test_probability_sum_tolerance_matches_pair_statistics(fixture_path):
    doc = planted_doc(fixture_path)
    doc['pairs']['12']['pp'] += 5e-10
    with pytest.raises(RecordSchemaError) as e:
        ut.parse_record(doc)
    assert len(e.value.messages) == 1
    assert e.value.messages[0].startswith('pairs/12')


def test_probability_sum_within_tolerance(fixture_path):
    doc = planted_doc(fixture_path)
    doc['pairs']['12']['pp'] += 5e-11
    rec = ut.parse_record(doc)
    assert rec.joint((1, 2), 1, 1) == pytest.approx(0.4)


def test_unknown_fields_rejected(fixture_path):
    doc = planted_doc(fixture_path)
    doc['pairs']['13'] = doc['pairs']['12']
    with pytest.raises(RecordSchemaError):
        ut.parse_record(doc)


def test_malformed_json(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"pairs": ')
    with pytest.raises(RecordSchemaError):
        ut.read_record(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        ut.read_record(str(tmp_path / 'absent.json'))


def test_write_record_round_trip(tmp_path, classical_planted):
    path = str(tmp_path / 'rec.json')
    ut.write_record(classical_planted, path)
    assert ut.read_record(path) == classical_planted


def test_significant_digits():
    df = pd.DataFrame({'x': [1 / 3, float('nan')], 'n': [1, 2]})
    out = ut.significant(df)
    assert out.x[0] == 0.333333333333
    assert out.n.tolist() == [1, 2]


def test_write_table_csv(tmp_path):
    path = str(tmp_path / 'table.csv')
    ut.write_table(pd.DataFrame({'two_j': [1], 'K': [2 ** 1.5]}), path)
    with open(path) as f:
        assert f.read().splitlines() == ['two_j,K', '1,2.82842712475']


def test_write_table_rejects_format():
    with pytest.raises(ValueError):
        ut.write_table(pd.DataFrame({'a': [1]}), None, 'xml')
