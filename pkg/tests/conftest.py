import math
import os

import numpy as np
import pytest

from lgeva import dynamics as dyn
from lgeva import macrorealism as mr
from lgeva import numerics as nm
from lgeva import utils as ut

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


@pytest.fixture
def rng():
    return np.random.default_rng(20141104)


@pytest.fixture
def fixture_path():
    def path(name):
        return os.path.join(FIXTURES, name)
    return path


@pytest.fixture
def max_violation(fixture_path):
    return ut.read_record(fixture_path('max_violation.json'))


@pytest.fixture
def classical_planted(fixture_path):
    return ut.read_record(fixture_path('classical_planted.json'))


@pytest.fixture
def signalling():
    # |0> rotated to |+x> at t1 and left there; measuring at t1 disturbs t2
    sigma_z = dyn.DichotomicObservable.from_matrix(nm.SIGMA_Z)
    rotate = nm.expm_i_hermitian(nm.SIGMA_Y, math.pi / 4)
    unitaries = [rotate, nm.IDENTITY_2, nm.IDENTITY_2, nm.IDENTITY_2]
    return mr.quantum_record(dyn.QuantumState.from_ket([1, 0]), sigma_z,
                             unitaries)
