#!/usr/bin/env python3
# -*- Mode: Python; coding: utf-8; indent-tabs-mode: nil; tab-width: 4 -*-
### BEGIN LICENSE
# Copyright (C) 2026, the copolarity-lab authors
# This program is free software: you can redistribute it and/or modify it
# under the terms of the GNU General Public License version 3, as published
# by the Free Software Foundation.
#
# This program is distributed in the hope that it will be useful, but
# WITHOUT ANY WARRANTY; without even the implied warranties of
# MERCHANTABILITY, SATISFACTORY QUALITY, or FITNESS FOR A PARTICULAR
# PURPOSE.  See the GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License along
# with this program.  If not, see <http://www.gnu.org/licenses/>.
### END LICENSE


from setuptools import setup
import os

def package_files(directory):
    paths = []
    for (path, directories, filenames) in os.walk(directory):
        for filename in filenames:
            paths.append(os.path.join(path, filename))
    return paths

extra_files_profiles = package_files('./data/profiles')
extra_files_reps = package_files('./data/reps')

app_prefix = '/usr/'

setup(
    name='copolarity-lab',
    version='0.3.0',
    license='GPL-3',
    description='Numerical copolarity analysis of isometric Lie group actions.',
    long_description="""copolarity-lab computes fat sections of linear isometric
 actions: canonical sections through regular points, their copolarity,
 the fat Weyl group reduction, slice representations, shape operators and
 Jacobi field splittings, Lie triple systems of symmetric pairs, and
 invariant metrics on homogeneous spaces. Every result is written as a
 JSON report with the residuals, tolerances and seeds behind it.""",
    packages=[
        "copolarity_lab_lib",
        "copolarity_lab",
    ],
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.7',
    ],
    include_package_data=True,
    data_files=[
        (app_prefix + 'bin', ['bin/copolarity-lab']),
        (app_prefix + 'share/copolarity-lab/data/profiles', extra_files_profiles),
        (app_prefix + 'share/copolarity-lab/data/reps', extra_files_reps),
    ]
)
