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
"""JSON input documents.

One schema serves every command.  The top-level ``kind`` selects the
payload: ``linear_rep``, ``sym_pair`` or ``triple_datum``.  Matrices are
either flat row-major lists or lists of rows.
"""

import dataclasses
import json
import logging

import numpy as np

from copolarity_lab_lib.helpers import file_digest

from . liealg import LieRep, StructureConstants
from . numkernel import DEFAULT_POLICY, orthonormal_basis
from . resolution import make_triple_datum
from . symmpair import cartan_decompose

logger = logging.getLogger('copolarity_lab')

KINDS = ('linear_rep', 'sym_pair', 'triple_datum')


class SchemaError(Exception):
    """Input violates the schema; ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__('%s: %s' % (field, message))
        self.field = field


@dataclasses.dataclass(frozen=True, eq=False)
class LinearRepInput:
    rep: LieRep
    section: object = None
    points: tuple = ()


@dataclasses.dataclass(frozen=True, eq=False)
class SymPairInput:
    pair: object
    m_basis: object = None


@dataclasses.dataclass(frozen=True, eq=False)
class Document:
    kind: str
    payload: object
    digest: str


def _require(doc, key, field=None):
    if key not in doc:
        raise SchemaError(field or key, 'missing required field')
    return doc[key]


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(field, 'expected a number, got %r' % (value,))
    return float(value)


def _integer(value, field):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(field, 'expected an integer, got %r' % (value,))
    return value


def _vector(value, size, field):
    if not isinstance(value, list):
        raise SchemaError(field, 'expected a list')
    if size is not None and len(value) != size:
        raise SchemaError(field, 'expected %d entries, got %d' % (size, len(value)))
    return np.array([_number(x, '%s[%d]' % (field, i)) for i, x in enumerate(value)])


def _matrix(value, rows, cols, field):
    """A rows x cols matrix, flat row-major or as a list of rows."""
    if not isinstance(value, list):
        raise SchemaError(field, 'expected a list')
    if value and all(isinstance(row, list) for row in value):
        if len(value) != rows:
            raise SchemaError(field, 'expected %d rows, got %d' % (rows, len(value)))
        for i, row in enumerate(value):
            if len(row) != cols:
                raise SchemaError(field, 'row %d has %d entries, expected %d'
                                  % (i, len(row), cols))
        return np.array([_vector(row, cols, '%s[%d]' % (field, i))
                         for i, row in enumerate(value)]).reshape(rows, cols)
    if len(value) != rows * cols:
        raise SchemaError(field, 'expected %d row-major entries, got %d'
                          % (rows * cols, len(value)))
    return _vector(value, rows * cols, field).reshape(rows, cols)


def _matrix_list(value, size, field):
    if not isinstance(value, list):
        raise SchemaError(field, 'expected a list of matrices')
    return [_matrix(m, size, size, '%s[%d]' % (field, i)) for i, m in enumerate(value)]


def _columns(value, size, field):
    """A list of vectors, returned as the columns of a matrix."""
    if not isinstance(value, list):
        raise SchemaError(field, 'expected a list of vectors')
    vectors = [_vector(v, size, '%s[%d]' % (field, i)) for i, v in enumerate(value)]
    return np.column_stack(vectors) if vectors else np.zeros((size, 0))


def parse_linear_rep(doc, policy=DEFAULT_POLICY):
    n = _integer(_require(doc, 'ambient_dim'), 'ambient_dim')
    if n < 1:
        raise SchemaError('ambient_dim', 'must be positive')
    gens = _matrix_list(_require(doc, 'generators'), n, 'generators')
    discrete = _matrix_list(doc.get('discrete_elements', []), n, 'discrete_elements')
    orthogonal = doc.get('orthogonal', True)
    if not isinstance(orthogonal, bool):
        raise SchemaError('orthogonal', 'expected a boolean')
    rep = LieRep(n, np.array(gens) if gens else np.zeros((0, n, n)), tuple(discrete),
                 policy, orthogonal)
    section = None
    if 'section' in doc:
        section = orthonormal_basis(_columns(doc['section'], n, 'section'), policy, n)
    points = ()
    if 'points' in doc:
        points = tuple(_columns(doc['points'], n, 'points').T)
    return LinearRepInput(rep, section, points)


def _structure_constants(doc):
    raw = _require(doc, 'structure_constants')
    if not isinstance(raw, list) or not raw:
        raise SchemaError('structure_constants', 'expected a non-empty d x d x d list')
    d = len(raw)
    c = np.array([_matrix(layer, d, d, 'structure_constants[%d]' % i)
                  for i, layer in enumerate(raw)])
    return StructureConstants.from_tensor(c)


def parse_sym_pair(doc, policy=DEFAULT_POLICY):
    sc = _structure_constants(doc)
    d = sc.d
    involution = _matrix(_require(doc, 'involution'), d, d, 'involution')
    inner = _matrix(_require(doc, 'inner'), d, d, 'inner')
    embedding = None
    if 'embedding' in doc:
        raw = doc['embedding']
        if not isinstance(raw, list) or len(raw) != d:
            raise SchemaError('embedding', 'expected %d matrices' % d)
        first = raw[0]
        if not isinstance(first, list) or not first:
            raise SchemaError('embedding[0]', 'expected a non-empty matrix')
        size = len(first) if isinstance(first[0], list) \
            else int(round(np.sqrt(len(first))))
        embedding = np.array(_matrix_list(raw, size, 'embedding'))
    pair = cartan_decompose(sc, inner, involution, embedding, policy)
    m_basis = _columns(doc['m_basis'], d, 'm_basis') if 'm_basis' in doc else None
    return SymPairInput(pair, m_basis)


def _indices(doc, key):
    value = doc.get(key, [])
    if not isinstance(value, list):
        raise SchemaError(key, 'expected a list of indices')
    return [_integer(i, '%s[%d]' % (key, j)) for j, i in enumerate(value)]


def parse_triple_datum(doc, policy=DEFAULT_POLICY):
    sc = _structure_constants(doc)
    if 'n_indices' not in doc:
        raise SchemaError('n_indices', 'missing required field')
    inner = _matrix(doc['inner'], sc.d, sc.d, 'inner') if 'inner' in doc else None
    return make_triple_datum(sc, _indices(doc, 'h_indices'), _indices(doc, 'n_indices'),
                             inner, policy)


PARSERS = {
    'linear_rep': parse_linear_rep,
    'sym_pair': parse_sym_pair,
    'triple_datum': parse_triple_datum,
}


def parse_document(doc, policy=DEFAULT_POLICY):
    if not isinstance(doc, dict):
        raise SchemaError('<document>', 'top level must be an object')
    kind = _require(doc, 'kind')
    if kind not in KINDS:
        raise SchemaError('kind', 'expected one of %s, got %r' % (', '.join(KINDS), kind))
    return kind, PARSERS[kind](doc, policy)


def load_document(path, policy=DEFAULT_POLICY):
    with open(path, encoding='utf-8') as handle:
        text = handle.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as error:
        raise SchemaError('<json>', 'line %d column %d: %s'
                          % (error.lineno, error.colno, error.msg))
    kind, payload = parse_document(doc, policy)
    logger.debug('loaded %s document from %s', kind, path)
    return Document(kind, payload, file_digest(path))
