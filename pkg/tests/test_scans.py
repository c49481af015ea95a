import math

import pytest

from lgeva import scans
from lgeva import spin as sp
from lgeva.errors import ScanConfigError


def test_gp_scan_constant_column():
    table = scans.run_gp_scan(scans.ScanConfig())
    assert table.two_j.tolist() == list(range(1, 21))
    assert (table.K_closed - sp.TSIRELSON).abs().max() < 1e-10
    assert (table.K_simulated - sp.TSIRELSON).abs().max() < 1e-10


def test_gp_scan_static_odd_mode():
    cfg = scans.ScanConfig(two_j_min=2, two_j_max=2, odd_mode='static')
    table = scans.run_gp_scan(cfg)
    assert table.K_simulated[0] == pytest.approx(2.552, abs=1e-3)
    assert table.K_closed[0] == pytest.approx(sp.TSIRELSON, abs=1e-10)


def test_gp_scan_workers_keep_order():
    serial = scans.run_gp_scan(scans.ScanConfig(two_j_max=6))
    threaded = scans.run_gp_scan(scans.ScanConfig(two_j_max=6, workers=3))
    assert serial.equals(threaded)


@pytest.mark.parametrize('overrides', [
    {'two_j_min': 5, 'two_j_max': 3},
    {'lambda_step': 0},
    {'lambda_min': 0.0},
    {'lambda_max': 1.5},
    {'fmt': 'xml'},
    {'odd_mode': 'bogus'},
    {'workers': 0},
])
def test_invalid_config(overrides):
    with pytest.raises(ScanConfigError):
        scans.ScanConfig(**overrides).validate()


def test_lambda_grid():
    cfg = scans.ScanConfig(lambda_min=0.5, lambda_max=1.0, lambda_step=0.0001)
    lambdas = cfg.lambdas
    assert len(lambdas) == 5001
    assert lambdas[-1] == 1.0
    assert 0.8409 in lambdas


def test_kb_scan():
    table = scans.run_kb_scan(scans.ScanConfig(kb_two_j=[200]))
    limit = table[table.series == 'limit']
    grid = limit[limit.kind == 'grid']
    assert len(grid) == 315
    assert grid.x.iloc[-1] == pytest.approx(math.pi)
    assert grid.K.iloc[-1] == pytest.approx(0.0, abs=1e-12)
    argmax = limit[limit.kind == 'argmax'].iloc[0]
    assert argmax.x == pytest.approx(1.054, abs=0.002)
    assert argmax.K == pytest.approx(2.481, abs=0.001)
    finite = table[(table.series == '2j=200') & (table.kind == 'argmax')]
    assert finite.K.iloc[0] >= 2.47


def test_unsharp_scan_crossings():
    cfg = scans.ScanConfig(lambda_min=0.84, lambda_max=0.9,
                           lambda_step=0.0001)
    table, crossings = scans.run_unsharp_scan(cfg)
    assert crossings['gp']['threshold'] == pytest.approx(2 ** -0.25, abs=1e-9)
    assert crossings['gp']['first_violating_grid_lambda'] == pytest.approx(
        0.8409, abs=1e-4)
    assert crossings['kb']['threshold'] == pytest.approx(0.8978, abs=1e-3)
    assert crossings['kb']['first_violating_grid_lambda'] == pytest.approx(
        0.8978, abs=1e-3)
    row = table[(table.kind == 'grid') & (table['lambda'] == 0.841)].iloc[0]
    assert row.K_gp > 2
    assert row.K_gp == pytest.approx(0.841 ** 2 * sp.TSIRELSON, abs=1e-10)
    assert set(table.kind.iloc[-2:]) == {'crossing_gp', 'crossing_kb'}


def test_unsharp_scan_end_points():
    cfg = scans.ScanConfig(lambda_min=0.5, lambda_max=1.0, lambda_step=0.25)
    table, _ = scans.run_unsharp_scan(cfg)
    grid = table[table.kind == 'grid']
    first, last = grid.iloc[0], grid.iloc[-1]
    assert first.K_gp < 2 and first.K_kb < 2
    assert last.K_gp == pytest.approx(sp.TSIRELSON, abs=1e-10)
    assert last.K_kb == pytest.approx(2.481, abs=1e-3)


@pytest.mark.parametrize('two_j', [1, 2, 3])
def test_no_violation_below_threshold(two_j):
    spin = sp.SpinValue(two_j)
    assert scans.violation_sweep(spin, 0.84, steps=100) <= 2
    assert scans.violation_sweep(spin, 1.0, steps=100) > 2.8


def test_certify_max_violation(fixture_path):
    report = scans.run_certify(fixture_path('max_violation.json'))
    assert report['principal_lgch'] == pytest.approx(0.2071067, abs=1e-6)
    assert not report['nirm']['feasible']
    assert report['nirm']['certificate']['side'] == 'upper'
    assert not report['macrorealist']


def test_certify_planted(fixture_path):
    report = scans.run_certify(fixture_path('classical_planted.json'))
    assert report['nirm']['feasible']
    assert sum(report['nirm']['witness'].values()) == pytest.approx(1)
    assert report['macrorealist']
    assert set(report['checks']) == {'mr_lgi', 'mr_lgi_canonical', 'mr_lgch',
                                     'mr_nsit', 'mr_nirm', 'mr_equivalence'}


def test_audit_agrees():
    cfg = scans.ScanConfig(random_records=100, quantum_records=20)
    table, summary = scans.run_audit(cfg)
    assert summary['records'] == 120
    assert summary['disagreements'] == 0
    assert table.source.value_counts().to_dict() == {'random': 100,
                                                     'quantum': 20}


def test_audit_is_reproducible():
    cfg = scans.ScanConfig(random_records=30, quantum_records=6, seed=7)
    first, _ = scans.run_audit(cfg)
    second, _ = scans.run_audit(cfg)
    assert first.equals(second)
