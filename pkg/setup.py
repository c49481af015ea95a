# coding: utf-8

from setuptools import setup, find_packages

NAME = "lg_eva"
VERSION = "1.0.0"

# To install the library, run the following
#
# python setup.py install
#
# prerequisite: setuptools
# http://pypi.python.org/pypi/setuptools

REQUIRES = [
    "connexion[swagger-ui]>=2.6.0,<3",
    "swagger-ui-bundle>=0.0.6",
    "flask",
    "jsonschema",
    "numpy>=1.17",
    "pandas",
    "pyyaml",
    "scipy",
]

setup(
    name=NAME,
    version=VERSION,
    description="Leggett-Garg evaluator",
    author_email="",
    url="",
    keywords=["OpenAPI", "Leggett-Garg", "macrorealism", "spin"],
    install_requires=REQUIRES,
    packages=find_packages(exclude=['tests']),
    package_data={'lgeva': ['lg-api.yaml']},
    include_package_data=True,
    entry_points={
        'console_scripts': ['lg-eva=lgeva.cli:main']},
    long_description="""\
    Leggett-Garg temporal correlations for arbitrary spin, unsharp
    measurement thresholds and macrorealism certification of four-time
    records.
    """
)
