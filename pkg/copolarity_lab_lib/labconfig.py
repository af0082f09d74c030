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

__all__ = [
    'ProjectPathNotFound',
    'get_data_file',
    'get_data_path',
    'get_version',
    'read_profile',
    ]

# Where the project looks for its data (tolerance profiles, sample
# representations). By default, this is ../data, relative to the trunk layout
__copolarity_lab_data_directory__ = '../data/'
__license__ = 'GPL-3'
__version__ = '0.3.0'

import configparser
import logging
import os

logger = logging.getLogger('copolarity_lab_lib')


class ProjectPathNotFound(Exception):
    """Raised when we can't find the project directory."""


class ProfileNotFound(Exception):
    """Raised when a tolerance profile does not exist."""


def get_data_file(*path_segments):
    """Get the full path to a data file.

    Returns the path to a file underneath the data directory (as defined by
    `get_data_path`). Equivalent to os.path.join(get_data_path(),
    *path_segments).
    """
    return os.path.join(get_data_path(), *path_segments)


def get_data_path():
    """Retrieve copolarity-lab data path

    This path is by default <copolarity_lab_lib_path>/../data/ in trunk
    and /usr/share/copolarity-lab/data in an installed version.
    """
    path = os.path.join(
        os.path.dirname(__file__), __copolarity_lab_data_directory__)

    # We try first if the data exists in the local folder and then
    # in the system installation path
    abs_data_path = os.path.abspath(path)
    if not os.path.exists(abs_data_path):
        abs_data_path = '/usr/share/copolarity-lab/data/'
    if not os.path.exists(abs_data_path):
        raise ProjectPathNotFound

    return abs_data_path


def get_version():
    return __version__


def read_profile(name='default'):
    """Read a tolerance/sampling profile.

    ``name`` is either a profile under data/profiles (without the .ini
    suffix) or a path to an ini file.
    """
    if os.path.isfile(name):
        path = name
    else:
        path = get_data_file('profiles', '%s.ini' % (name,))
    config = configparser.ConfigParser()
    if not config.read(path):
        raise ProfileNotFound(path)
    logger.debug('read profile %s', path)

    profile = {
        'rel_rank_tol': config.getfloat('tolerances', 'rel_rank_tol', fallback=1e-8),
        'abs_zero_tol': config.getfloat('tolerances', 'abs_zero_tol', fallback=1e-10),
        'containment_tol': config.getfloat('tolerances', 'containment_tol', fallback=1e-7),
        'samples': config.getint('sampling', 'samples', fallback=200),
        'trials': config.getint('sampling', 'trials', fallback=100),
        'budget': config.getint('sampling', 'budget', fallback=16),
        'quadrature_points': config.getint('sampling', 'quadrature_points', fallback=64),
    }
    return profile
