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
"""Lie algebra data: representations, structure constants, group sampling."""

import dataclasses
import logging

import numpy as np
from scipy import linalg

from . numkernel import (
    DEFAULT_POLICY, DimensionMismatch, NonFiniteEntries, TolerancePolicy,
    as_square, as_vector, mat_exp, numerical_rank)

logger = logging.getLogger('copolarity_lab')


class LieAlgebraError(Exception):
    """Base class for invalid algebra or representation data."""


class NotClosed(LieAlgebraError):
    """A bracket [X_i, X_j] leaves the span of the generators."""

    def __init__(self, i, j, residual):
        super().__init__(
            "bracket of generators %d and %d leaves their span (residual %.3g)"
            % (i, j, residual))
        self.i = i
        self.j = j
        self.residual = residual


class DependentGenerators(LieAlgebraError):
    pass


class NotSkew(LieAlgebraError):
    pass


class NotOrthogonal(LieAlgebraError):
    pass


class BadStructureConstants(LieAlgebraError):
    pass


@dataclasses.dataclass(frozen=True, eq=False)
class StructureConstants:
    """Coefficients c with [X_i, X_j] = sum_k c[i, j, k] X_k."""
    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise BadStructureConstants("structure constants must be d x d x d, got %s"
                                        % (c.shape,))
        if not np.all(np.isfinite(c)):
            raise BadStructureConstants("structure constants have non-finite entries")
        c.setflags(write=False)
        object.__setattr__(self, 'c', c)

    @classmethod
    def from_tensor(cls, c, antisymmetry_tol=1e-10, jacobi_tol=1e-9):
        """Build from raw data, enforcing antisymmetry and the Jacobi identity."""
        sc = cls(c)
        if sc.antisymmetry_residual() > antisymmetry_tol:
            raise BadStructureConstants(
                "c_ijk != -c_jik (residual %.3g)" % sc.antisymmetry_residual())
        if sc.jacobi_residual() > jacobi_tol:
            raise BadStructureConstants(
                "Jacobi identity fails (residual %.3g)" % sc.jacobi_residual())
        return sc

    @property
    def d(self):
        return self.c.shape[0]

    def bracket(self, x, y):
        return np.einsum('i,j,ijk->k', x, y, self.c)

    def ad(self, x):
        """Matrix of ad_x in the basis: (ad_x)[k, j] = sum_i x_i c_ijk."""
        return np.einsum('i,ijk->kj', x, self.c)

    def ad_basis(self):
        return np.transpose(self.c, (0, 2, 1))

    def antisymmetry_residual(self):
        if self.d == 0:
            return 0.0
        return float(np.max(np.abs(self.c + np.transpose(self.c, (1, 0, 2)))))

    def jacobi_residual(self):
        """Max deviation of ad from being a homomorphism (equivalent to Jacobi)."""
        d = self.d
        if d == 0:
            return 0.0
        ads = self.ad_basis()
        worst = 0.0
        for i in range(d):
            for j in range(i + 1, d):
                lhs = np.einsum('k,kab->ab', self.c[i, j], ads)
                rhs = ads[i] @ ads[j] - ads[j] @ ads[i]
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    def change_basis(self, t):
        """Constants for the new basis Y_a = sum_i t[i, a] X_i."""
        t = as_square(t, 'basis change')
        t_inv = linalg.inv(t)
        return StructureConstants(
            np.einsum('ia,jb,ijk,ck->abc', t, t, self.c, t_inv))


def killing_form(sc):
    ads = sc.ad_basis()
    return np.einsum('aij,bji->ab', ads, ads)


@dataclasses.dataclass(frozen=True, eq=False)
class LieRep:
    """A Lie algebra acting linearly on R^N, plus optional group components.

    ``generators`` has shape (d, N, N).  Validation is eager: the bracket
    closure is checked when the representation is built and the resulting
    structure constants are kept in ``structure``.
    """
    ambient_dim: int
    generators: np.ndarray
    discrete_elements: tuple = ()
    policy: TolerancePolicy = DEFAULT_POLICY
    orthogonal: bool = True
    structure: StructureConstants = dataclasses.field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.ambient_dim)
        if n < 0:
            raise DimensionMismatch("ambient dimension must be non-negative")
        gens = np.array(self.generators, dtype=float)
        if gens.size == 0:
            gens = np.zeros((0, n, n))
        if gens.ndim != 3 or gens.shape[1:] != (n, n):
            raise DimensionMismatch(
                "generators must have shape (d, %d, %d), got %s" % (n, n, gens.shape))
        if not np.all(np.isfinite(gens)):
            raise NonFiniteEntries("generators have NaN or infinite entries")
        if self.orthogonal:
            for i, g in enumerate(gens):
                skew = float(np.max(np.abs(g + g.T))) if n else 0.0
                if skew >= self.policy.abs_zero_tol * max(1.0, float(np.max(np.abs(g)))):
                    raise NotSkew("generator %d is not skew-symmetric (residual %.3g)"
                                  % (i, skew))
        d = gens.shape[0]
        if d:
            s = np.linalg.svd(gens.reshape(d, -1).T, compute_uv=False)
            rank = numerical_rank(s, self.policy)
            if rank != d:
                raise DependentGenerators(
                    "generators span a %d-dimensional space, expected %d" % (rank, d))
        discrete = []
        for i, element in enumerate(self.discrete_elements):
            m = as_square(element, 'discrete element %d' % i)
            if m.shape != (n, n):
                raise DimensionMismatch(
                    "discrete element %d has shape %s, expected (%d, %d)" % (i, m.shape, n, n))
            if self.orthogonal and np.max(np.abs(m.T @ m - np.eye(n))) > 1e-8:
                raise NotOrthogonal("discrete element %d is not orthogonal" % i)
            m = m.copy()
            m.setflags(write=False)
            discrete.append(m)
        gens.setflags(write=False)
        object.__setattr__(self, 'ambient_dim', n)
        object.__setattr__(self, 'generators', gens)
        object.__setattr__(self, 'discrete_elements', tuple(discrete))
        object.__setattr__(self, 'structure', check_closure(self))

    @property
    def dim(self):
        return self.generators.shape[0]

    def algebra_element(self, coeffs):
        coeffs = as_vector(coeffs, self.dim, 'coefficients')
        return np.einsum('i,ijk->jk', coeffs, self.generators)

    def orbit_map(self, p):
        """The N x d matrix [X_1 p ... X_d p]."""
        p = as_vector(p, self.ambient_dim, 'point')
        return np.einsum('ijk,k->ji', self.generators, p)

    def restricted(self, coeff_basis, subspace, discrete_elements=()):
        """Restrict the elements with coefficient columns ``coeff_basis`` to ``subspace``.

        The subspace must be invariant under those elements; the result acts
        on the coordinates of the subspace's orthonormal basis.
        """
        b = subspace.basis
        coeff_basis = np.asarray(coeff_basis, dtype=float)
        if coeff_basis.ndim == 1:
            coeff_basis = coeff_basis[:, None]
        mats = []
        for c in coeff_basis.T:
            m = b.T @ self.algebra_element(c) @ b
            if self.orthogonal:
                m = 0.5 * (m - m.T)
            mats.append(m)
        gens = np.array(mats) if mats else np.zeros((0, subspace.dim, subspace.dim))
        return LieRep(subspace.dim, gens, tuple(discrete_elements), self.policy, self.orthogonal)

    def with_discrete(self, discrete_elements):
        return LieRep(self.ambient_dim, self.generators, tuple(discrete_elements),
                      self.policy, self.orthogonal)


def check_closure(rep):
    """Structure constants by least-squares projection of every bracket."""
    d = rep.dim
    c = np.zeros((d, d, d))
    if d < 2:
        return StructureConstants(c)
    flat = rep.generators.reshape(d, -1).T
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    brackets = np.column_stack([
        (rep.generators[i] @ rep.generators[j]
         - rep.generators[j] @ rep.generators[i]).ravel()
        for i, j in pairs])
    coeffs = linalg.lstsq(flat, brackets)[0]
    residuals = np.linalg.norm(brackets - flat @ coeffs, axis=0)
    scales = np.maximum(1.0, np.linalg.norm(brackets, axis=0))
    for col, (i, j) in enumerate(pairs):
        if residuals[col] > rep.policy.containment_tol * scales[col]:
            raise NotClosed(i, j, float(residuals[col]))
        c[i, j] = coeffs[:, col]
        c[j, i] = -coeffs[:, col]
    logger.debug('closure verified for %d generators, max residual %.3g',
                 d, float(np.max(residuals)))
    return StructureConstants(c)


def killing_value(rep, coeffs, p):
    """The Killing field of sum_i coeffs_i X_i evaluated at p."""
    return rep.algebra_element(coeffs) @ as_vector(p, rep.ambient_dim, 'point')


def exp_element(rep, coeffs):
    return mat_exp(rep.algebra_element(coeffs))


def element_from_params(rep, params):
    """exp(t_1 X_1) ... exp(t_d X_d)."""
    params = as_vector(params, rep.dim, 'parameters')
    g = np.eye(rep.ambient_dim)
    for t, x in zip(params, rep.generators):
        g = g @ mat_exp(t * x)
    return g


def sample_element(rep, radius, seed):
    if radius <= 0:
        raise ValueError("radius must be positive, got %r" % radius)
    rng = np.random.default_rng(seed)
    return element_from_params(rep, rng.uniform(-radius, radius, rep.dim))
