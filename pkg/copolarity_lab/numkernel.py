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
"""Tolerance-aware dense linear algebra.

Every rank decision in copolarity-lab goes through this module: a column
space, a null space, an intersection of subspaces.  All of them are decided
by singular values against a :class:`TolerancePolicy`, so two subspaces
computed from the same data always agree on their dimensions.
"""

import dataclasses
import logging

import numpy as np
from scipy import linalg

logger = logging.getLogger('copolarity_lab')


class KernelError(Exception):
    """Base class for numkernel failures."""


class DimensionMismatch(KernelError):
    pass


class NonFiniteEntries(KernelError):
    pass


class NotSquare(KernelError):
    pass


@dataclasses.dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds shared by every rank and containment decision.

    Parameters
    ----------
    rel_rank_tol : float
        singular values below ``rel_rank_tol * sigma_max`` are treated as zero
    abs_zero_tol : float
        a matrix whose largest singular value is below this is the zero matrix
    containment_tol : float
        residual bound for "vector lies in subspace" claims
    """
    rel_rank_tol: float = 1e-8
    abs_zero_tol: float = 1e-10
    containment_tol: float = 1e-7

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(
                    "%s must be strictly positive, got %r" % (field.name, value))
        if self.rel_rank_tol >= 1:
            raise ValueError("rel_rank_tol must be < 1, got %r" % self.rel_rank_tol)

    def with_overrides(self, **overrides):
        """Return a copy with every non-None override applied."""
        changes = {k: float(v) for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes)

    def as_dict(self):
        return dataclasses.asdict(self)


DEFAULT_POLICY = TolerancePolicy()


def as_matrix(a, rows=None, cols=None, name='matrix'):
    """Validate ``a`` as a finite 2-d float array of the given shape."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch("%s must be 2-dimensional, got shape %s" % (name, m.shape))
    if rows is not None and m.shape[0] != rows:
        raise DimensionMismatch("%s must have %d rows, got %d" % (name, rows, m.shape[0]))
    if cols is not None and m.shape[1] != cols:
        raise DimensionMismatch("%s must have %d columns, got %d" % (name, cols, m.shape[1]))
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntries("%s has NaN or infinite entries" % name)
    return m


def as_vector(v, size=None, name='vector'):
    x = np.asarray(v, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch("%s must be 1-dimensional, got shape %s" % (name, x.shape))
    if size is not None and x.shape[0] != size:
        raise DimensionMismatch("%s must have %d entries, got %d" % (name, size, x.shape[0]))
    if not np.all(np.isfinite(x)):
        raise NonFiniteEntries("%s has NaN or infinite entries" % name)
    return x


def as_square(a, name='matrix'):
    m = as_matrix(a, name=name)
    if m.shape[0] != m.shape[1]:
        raise NotSquare("%s must be square, got shape %s" % (name, m.shape))
    return m


@dataclasses.dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of R^ambient_dim given by orthonormal basis columns."""
    ambient_dim: int
    basis: np.ndarray
    tol_used: float = DEFAULT_POLICY.rel_rank_tol

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                "basis of shape %s does not fit ambient dimension %d"
                % (basis.shape, self.ambient_dim))
        if basis.shape[1] > self.ambient_dim:
            raise DimensionMismatch("more basis vectors than ambient dimensions")
        if basis.shape[1]:
            gram_error = np.max(np.abs(basis.T @ basis - np.eye(basis.shape[1])))
            if gram_error > max(10 * self.tol_used, 1e-9):
                raise KernelError("basis is not orthonormal (error %.3g)" % gram_error)
        basis.setflags(write=False)
        object.__setattr__(self, 'basis', basis)

    @classmethod
    def zero(cls, ambient_dim, tol=DEFAULT_POLICY.rel_rank_tol):
        return cls(ambient_dim, np.zeros((ambient_dim, 0)), tol)

    @classmethod
    def full(cls, ambient_dim, tol=DEFAULT_POLICY.rel_rank_tol):
        return cls(ambient_dim, np.eye(ambient_dim), tol)

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self):
        return self.basis @ self.basis.T

    def project(self, v):
        return self.basis @ (self.basis.T @ v)

    def coordinates(self, v):
        return self.basis.T @ v

    def embed(self, z):
        return self.basis @ z

    def residual(self, vectors):
        """Largest distance of the given column vectors from the subspace."""
        v = np.asarray(vectors, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.shape[1] == 0:
            return 0.0
        rest = v - self.project(v)
        return float(np.max(np.linalg.norm(rest, axis=0)))

    def contains(self, vectors, tol=DEFAULT_POLICY.containment_tol):
        v = np.asarray(vectors, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        scale = max(1.0, float(np.max(np.linalg.norm(v, axis=0)))) if v.shape[1] else 1.0
        return self.residual(v) <= tol * scale

    def is_subspace_of(self, other, tol=DEFAULT_POLICY.containment_tol):
        _check_ambient(self, other)
        return other.residual(self.basis) <= tol

    def __repr__(self):
        return 'Subspace(dim=%d, ambient_dim=%d)' % (self.dim, self.ambient_dim)


def _check_ambient(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(
            "ambient dimensions differ: %d != %d" % (a.ambient_dim, b.ambient_dim))


def numerical_rank(singular_values, policy=DEFAULT_POLICY):
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or s[0] <= policy.abs_zero_tol:
        return 0
    return int(np.count_nonzero(s >= policy.rel_rank_tol * s[0]))


def rank_split(matrix, policy=DEFAULT_POLICY):
    """Column space and null space of ``matrix`` from a single SVD.

    Both spaces come from the same rank decision, so
    ``column.dim + null.dim == matrix.shape[1]`` holds exactly.
    """
    m = as_matrix(matrix)
    rows, cols = m.shape
    tol = policy.rel_rank_tol
    if rows == 0 or cols == 0:
        return Subspace.zero(rows, tol), Subspace.full(cols, tol)
    u, s, vt = linalg.svd(m, full_matrices=True)
    rank = numerical_rank(s, policy)
    return Subspace(rows, u[:, :rank], tol), Subspace(cols, vt[rank:].T, tol)


def orthonormal_basis(vectors, policy=DEFAULT_POLICY, ambient_dim=None):
    """Orthonormal basis of the numerically significant column space."""
    m = as_matrix(vectors, rows=ambient_dim, name='vectors')
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return Subspace.zero(rows, policy.rel_rank_tol)
    u, s, _ = linalg.svd(m, full_matrices=False)
    rank = numerical_rank(s, policy)
    return Subspace(rows, u[:, :rank], policy.rel_rank_tol)


def nullspace(matrix, policy=DEFAULT_POLICY):
    return rank_split(matrix, policy)[1]


def subspace_intersect(a, b, policy=DEFAULT_POLICY):
    """Intersection from the null space of the stacked projectors (I - P_a; I - P_b).

    Projector differences have unit scale, so the threshold is absolute; a
    singular value exactly at the threshold is kept out of the intersection.
    """
    _check_ambient(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n, policy.rel_rank_tol)
    eye = np.eye(n)
    stacked = np.vstack([eye - a.projector(), eye - b.projector()])
    _, s, vt = linalg.svd(stacked, full_matrices=True)
    null = s < policy.rel_rank_tol
    return Subspace(n, vt[null].T, policy.rel_rank_tol)


def subspace_sum(a, b, policy=DEFAULT_POLICY):
    _check_ambient(a, b)
    return orthonormal_basis(np.hstack([a.basis, b.basis]), policy, a.ambient_dim)


def complement(a):
    """Orthogonal complement in the ambient space."""
    n = a.ambient_dim
    if a.dim == 0:
        return Subspace.full(n, a.tol_used)
    u, _, _ = linalg.svd(a.basis, full_matrices=True)
    return Subspace(n, u[:, a.dim:], a.tol_used)


def subspace_distance(a, b):
    """Spectral norm of P_a - P_b; 1.0 when the dimensions differ."""
    _check_ambient(a, b)
    if a.dim != b.dim:
        return 1.0
    if a.dim == 0:
        return 0.0
    return float(np.linalg.norm(a.projector() - b.projector(), 2))


def principal_angles(a, b):
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return np.zeros(0)
    return np.sort(linalg.subspace_angles(a.basis, b.basis))


def mat_exp(a):
    m = as_square(a)
    if m.shape[0] == 0:
        return m.copy()
    return linalg.expm(m)


def commutator(a, b):
    x = as_square(a, 'a')
    y = as_square(b, 'b')
    if x.shape != y.shape:
        raise DimensionMismatch("commutator of %s and %s matrices" % (x.shape, y.shape))
    return x @ y - y @ x


def project(sub, v):
    return sub.project(np.asarray(v, dtype=float))


def containment_residual(sub, vectors):
    """Largest distance of the columns of ``vectors`` from ``sub``."""
    return sub.residual(vectors)
