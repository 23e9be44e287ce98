#!/usr/bin/env python3
# flake8: noqa
"""Setup script for the ddtlab repository."""
from os.path import dirname
from os.path import realpath
from setuptools import find_packages
from setuptools import setup
from ddtlab.version import __version__


def _read_requirements_file():
    req_file_path = '%s/requirements.txt' % dirname(realpath(__file__))
    with open(req_file_path) as f:
        return [line.strip() for line in f]


setup(
    name='ddtlab',
    version=__version__,
    packages=find_packages(exclude=['tests', 'tests.*']),
    install_requires=_read_requirements_file(),
    description='ddtlab: escape-time experiments on how SGD and SGLD select '
                'flat minima',
    zip_safe=False,
)
