"""Layered configuration: built-in defaults, ``config.ini``, explicit file."""
import configparser
import logging

logger = logging.getLogger(__name__)

DEFAULTS = {
    'scan': {
        'seed': '20141104',
        'two_j_min': '1',
        'two_j_max': '20',
        'lambda_min': '0.5',
        'lambda_max': '1.0',
        'lambda_step': '0.0001',
        'kb_grid': '10000',
        'kb_points': '315',
        'odd_mode': 'rabi',
        'zero_beam_rate': '0.5',
        'workers': '1',
    },
    'audit': {
        'random_records': '1000',
        'quantum_records': '200',
        'band': '1e-8',
    },
    'service': {
        'port': '9090',
        'api': 'lg-api.yaml',
    },
}


def load_config(path=None):
    """Return a ConfigParser with defaults, ./config.ini and ``path`` applied.

    Parameters
    ----------
    path : str, optional
        Extra INI file read last. Missing files are ignored, like
        ``ConfigParser.read`` does.
    """
    config = configparser.ConfigParser()
    config.read_dict(DEFAULTS)
    files = ['config.ini']
    if path is not None:
        files.append(path)
    found = config.read(files)
    logger.debug("configuration files read: %s", found)
    return config
