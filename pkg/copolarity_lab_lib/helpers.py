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

"""Helpers for the application."""
import hashlib
import logging
import os


ENV_THREADS = 'COPOLARITY_LAB_THREADS'


def set_up_logging(opts):
    # add a handler to prevent basicConfig
    root = logging.getLogger()
    root.addHandler(logging.NullHandler())

    formatter = logging.Formatter(
        "%(levelname)s:%(name)s: %(funcName)s() '%(message)s'")

    logger = logging.getLogger('copolarity_lab')
    lib_logger = logging.getLogger('copolarity_lab_lib')
    # one stream handler each, however often the command line is parsed
    for log in (logger, lib_logger):
        if not any(isinstance(h, logging.StreamHandler) for h in log.handlers):
            handler = logging.StreamHandler()
            handler.setFormatter(formatter)
            log.addHandler(handler)

    # Set the logging level to show debug messages.
    if opts.verbose:
        logger.setLevel(logging.DEBUG)
        logger.debug('logging enabled')
    if opts.verbose and opts.verbose > 1:
        lib_logger.setLevel(logging.DEBUG)


def worker_count():
    """Thread cap for parallel restarts, from COPOLARITY_LAB_THREADS."""
    raw = os.environ.get(ENV_THREADS, '')
    try:
        count = int(raw)
    except ValueError:
        if raw:
            logging.getLogger('copolarity_lab_lib').warning(
                'ignoring non-integer %s=%r', ENV_THREADS, raw)
        return 1
    return max(1, count)


def file_digest(path):
    sha = hashlib.sha256()
    with open(path, 'rb') as handle:
        for chunk in iter(lambda: handle.read(65536), b''):
            sha.update(chunk)
    return 'sha256:' + sha.hexdigest()
