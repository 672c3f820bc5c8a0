# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
# -*- coding: utf-8 -*-
"""Setup script for faster_er"""

from setuptools import setup, find_packages
import os

here = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(here, 'VERSION'),
          'r', encoding='utf-8') as version_file:
    version = version_file.read().strip()

with open(os.path.join(here, 'README.rst'),
          'r', encoding='utf-8') as readme_file:
    readme = readme_file.read()

with open(os.path.join(here, 'CHANGELOG.rst'),
          'r', encoding='utf-8') as changelog_file:
    changelog = changelog_file.read()

requirements = [
    'anyblok',
    'jsonschema',
    'networkx',
    'python-slugify',
    'rapidfuzz',
]

test_requirements = [
    'pytest',
    'pytest-cov',
]

setup(
    name='faster_er',
    version=version,
    description="On-demand entity resolution over dirty property graphs",
    long_description=readme + '\n\n' + changelog,
    author="faster_er contributors",
    packages=find_packages(),
    entry_points={
        'console_scripts': [
            'faster=faster_er.cli:main',
        ],
        'faster_er.matchers': [
            'oracle=faster_er.matchers:OracleMatcher',
            'similarity=faster_er.matchers:SimilarityMatcher',
        ],
    },
    include_package_data=True,
    package_data={
        'faster_er': ['fixtures/*/*.csv', 'fixtures/*/*.json'],
        'faster_er.gdd_rules': ['query.schema.json'],
    },
    install_requires=requirements,
    zip_safe=False,
    keywords='entity resolution, property graph, blocking, deduplication',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
    python_requires='>=3.8',
    test_suite='tests',
    tests_require=test_requirements,
)
