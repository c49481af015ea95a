#!/usr/bin/env python3
import logging
import os

import connexion
from connexion.resolver import RestyResolver

from lgeva.config import load_config

logging.basicConfig(level=logging.INFO)


def create_app(config=None):
    config = config or load_config()
    app = connexion.FlaskApp(__name__, specification_dir=os.path.join(
        os.path.dirname(os.path.abspath(__file__)), 'lgeva'))
    app.add_api(config['service']['api'],
                arguments={'title': 'Leggett-Garg evaluator'},
                resolver=RestyResolver('lgeva.rest'))
    return app


if __name__ == '__main__':
    config = load_config()
    create_app(config).run(port=config['service'].getint('port'))
