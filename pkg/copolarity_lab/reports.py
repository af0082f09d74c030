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
"""Check records shared by the analysis pipelines and the JSON reports."""

import dataclasses

import numpy as np


@dataclasses.dataclass(frozen=True)
class Check:
    """One verified claim: its residual, the tolerance it was held to, the verdict.

    Informational checks are reported but do not decide the verdict.
    """
    name: str
    passed: bool
    residual: float = 0.0
    tolerance: float = 0.0
    note: str = ''
    informational: bool = False

    def as_dict(self):
        return {
            'name': self.name,
            'passed': bool(self.passed),
            'residual': float(self.residual),
            'tolerance': float(self.tolerance),
            'note': self.note,
            'informational': self.informational,
        }


def within(name, residual, tolerance, note=''):
    return Check(name, bool(residual <= tolerance), float(residual), float(tolerance), note)


def equality(name, left, right, note=''):
    """Integer identity check."""
    return Check(name, int(left) == int(right), float(abs(int(left) - int(right))), 0.0,
                 note or '%d == %d' % (int(left), int(right)))


@dataclasses.dataclass
class Report:
    name: str
    checks: list = dataclasses.field(default_factory=list)
    values: dict = dataclasses.field(default_factory=dict)

    def add(self, check):
        self.checks.append(check)
        return check

    @property
    def passed(self):
        return all(c.passed for c in self.checks if not c.informational)

    def failures(self):
        return [c for c in self.checks if not c.passed and not c.informational]

    def as_dict(self):
        return {
            'name': self.name,
            'passed': self.passed,
            'checks': [c.as_dict() for c in self.checks],
            'values': to_plain(self.values),
        }


def to_plain(value):
    """Convert numpy scalars and arrays into JSON-serializable Python values."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value
