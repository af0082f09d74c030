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
"""Orbit geometry of linear orthogonal actions.

Tangent and normal spaces of orbits, isotropy algebras, statistical
regularity certificates, slice representations, shape operators, orbit
distances and the three-way split of Jacobi fields along normal geodesics
in flat space.
"""

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import linalg, optimize

from copolarity_lab_lib.helpers import worker_count

from . liealg import LieRep, element_from_params, exp_element
from . numkernel import (
    Subspace, as_vector, complement, numerical_rank, orthonormal_basis, project,
    rank_split, subspace_intersect)

logger = logging.getLogger('copolarity_lab')


class OrbitError(Exception):
    """Base class for orbit-level failures."""


class NotNormal(OrbitError):
    pass


class JacobiPreconditionError(OrbitError):

    def __init__(self, message, residual):
        super().__init__("%s (residual %.3g)" % (message, residual))
        self.residual = residual


@dataclasses.dataclass(frozen=True)
class RegularityCertificate:
    principal_dim: int
    samples: int
    seed: int


@dataclasses.dataclass(frozen=True, eq=False)
class PointContext:
    p: np.ndarray
    orbit_tangent: Subspace
    normal: Subspace
    isotropy_alg: Subspace
    regular: bool = False
    certificate: RegularityCertificate = None

    @property
    def orbit_dim(self):
        return self.orbit_tangent.dim


def analyze_point(rep, p, certificate=None):
    p = as_vector(p, rep.ambient_dim, 'point').copy()
    p.setflags(write=False)
    tangent, isotropy = rank_split(rep.orbit_map(p), rep.policy)
    regular = certificate is not None and tangent.dim == certificate.principal_dim
    return PointContext(p, tangent, complement(tangent), isotropy, regular, certificate)


def principal_certificate(rep, trials=100, seed=0):
    """Largest orbit dimension over ``trials`` Gaussian points.

    Returns the certificate and the first sampled point attaining it.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1, got %r" % trials)
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((trials, rep.ambient_dim))
    dims = [numerical_rank(np.linalg.svd(rep.orbit_map(x), compute_uv=False), rep.policy)
            if rep.dim and rep.ambient_dim else 0
            for x in points]
    best = int(np.argmax(dims))
    logger.debug('principal orbit dimension %d over %d samples (seed %s)',
                 dims[best], trials, seed)
    return RegularityCertificate(int(dims[best]), trials, seed), points[best]


def find_regular(rep, trials=100, seed=0):
    certificate, point = principal_certificate(rep, trials, seed)
    return analyze_point(rep, point, certificate)


def certify(rep, p, trials=100, seed=0):
    """Analyze a chosen point against a freshly sampled certificate."""
    certificate, _ = principal_certificate(rep, trials, seed)
    return analyze_point(rep, p, certificate)


def slice_rep(rep, ctx):
    """Isotropy algebra acting on the normal space of the orbit through ctx.p.

    The generators are an orthonormal basis of the restricted image, so the
    part of the isotropy acting trivially on the slice is dropped.
    """
    nu = ctx.normal
    m = nu.dim
    mats = [nu.basis.T @ rep.algebra_element(c) @ nu.basis for c in ctx.isotropy_alg.basis.T]
    if rep.orthogonal:
        mats = [0.5 * (x - x.T) for x in mats]
    if not mats or m == 0:
        return LieRep(m, np.zeros((0, m, m)), policy=rep.policy, orthogonal=rep.orthogonal)
    image = orthonormal_basis(np.column_stack([x.ravel() for x in mats]), rep.policy)
    gens = image.basis.T.reshape(image.dim, m, m)
    return LieRep(m, gens, policy=rep.policy, orthogonal=rep.orthogonal)


def _check_normal(rep, ctx, v):
    v = as_vector(v, rep.ambient_dim, 'normal vector')
    residual = ctx.normal.residual(v)
    if residual > rep.policy.containment_tol * max(1.0, float(np.linalg.norm(v))):
        raise NotNormal("vector is not normal to the orbit (residual %.3g)" % residual)
    return v


def shape_operator(rep, ctx, v):
    """Shape operator A_v of the orbit through ctx.p in the orbit_tangent basis.

    Uses <A_v(X p), Y p> = <v, sym(XY) p> for the orbit of a linear action.
    """
    v = _check_normal(rep, ctx, v)
    t = ctx.orbit_tangent.basis
    r = t.shape[1]
    if r == 0:
        return np.zeros((0, 0))
    om = rep.orbit_map(ctx.p)
    u, s, vt = linalg.svd(om, full_matrices=False)
    coeffs = vt[:r].T @ np.diag(1.0 / s[:r]) @ u[:, :r].T @ t
    xtv = np.einsum('ikj,k->ij', rep.generators, v)
    form = xtv @ om
    form = 0.5 * (form + form.T)
    a = coeffs.T @ form @ coeffs
    return 0.5 * (a + a.T)


def apply_shape_operator(rep, ctx, v, w):
    """A_v applied to the tangent vector w, as a vector of R^N."""
    t = ctx.orbit_tangent.basis
    return t @ (shape_operator(rep, ctx, v) @ (t.T @ w))


@dataclasses.dataclass(frozen=True, eq=False)
class AffineField:
    """t -> a + t b, a Jacobi field along a line in flat space."""
    a: np.ndarray
    b: np.ndarray

    def __call__(self, t):
        return self.a + t * self.b


@dataclasses.dataclass(frozen=True, eq=False)
class JacobiTriple:
    j0: AffineField
    jd: AffineField
    je: AffineField
    residuals: dict

    def total(self, t):
        return self.j0(t) + self.jd(t) + self.je(t)


def jacobi_split(rep, sigma, ctx, v, a, b, samples=10):
    """Split the Jacobi field t -> a + t b along t -> p + t v into J0 + JD + JE."""
    tol = rep.policy.containment_tol
    if not ctx.regular:
        raise JacobiPreconditionError("point is not certified regular", 0.0)
    residual = sigma.residual(ctx.p)
    if residual > tol * max(1.0, float(np.linalg.norm(ctx.p))):
        raise JacobiPreconditionError("point does not lie in the section", residual)
    v = _check_normal(rep, ctx, v)
    residual = sigma.residual(v)
    if residual > tol * max(1.0, float(np.linalg.norm(v))):
        raise JacobiPreconditionError("geodesic direction leaves the section", residual)
    a = as_vector(a, rep.ambient_dim, 'a')
    b = as_vector(b, rep.ambient_dim, 'b')
    scale = max(1.0, float(np.linalg.norm(a)), float(np.linalg.norm(b)))
    residual = ctx.orbit_tangent.residual(a)
    if residual > tol * scale:
        raise JacobiPreconditionError("J(0) is not tangent to the orbit", residual)

    def shape(w):
        return apply_shape_operator(rep, ctx, v, w)

    residual = float(np.linalg.norm(ctx.orbit_tangent.project(b + shape(a))))
    if residual > tol * scale:
        raise JacobiPreconditionError("J'(0) + A_v J(0) is not normal to the orbit", residual)

    d_space = subspace_intersect(ctx.orbit_tangent, sigma, rep.policy)
    e_space = subspace_intersect(ctx.orbit_tangent, complement(sigma), rep.policy)
    a_d = d_space.project(a)
    a_e = e_space.project(a)
    deficit = float(np.linalg.norm(a - a_d - a_e))
    if deficit > tol * scale:
        raise JacobiPreconditionError("D + E does not exhaust the orbit tangent space", deficit)
    jd = AffineField(a_d, -shape(a_d))
    je = AffineField(a_e, -shape(a_e))
    j0 = AffineField(np.zeros_like(a), b - jd.b - je.b)

    times = np.linspace(-1.0, 1.0, samples)
    residuals = {
        'je_in_section': max(float(np.linalg.norm(sigma.project(je(t)))) for t in times),
        'orthogonality': max(abs(float(np.dot(j0(t) + jd(t), je(t)))) for t in times),
        'j0_derivative_tangent': float(np.linalg.norm(ctx.orbit_tangent.project(j0.b))),
        'reconstruction': max(float(np.linalg.norm(j0(t) + jd(t) + je(t) - a - t * b))
                              for t in times),
    }
    return JacobiTriple(j0, jd, je, residuals)


@dataclasses.dataclass(frozen=True, eq=False)
class GroupMinimum:
    """Best value of a residual norm over group elements, with restart history."""
    value: float
    element: np.ndarray
    stable: bool
    restarts: int
    seed: int
    history: tuple


def _local_descent(rep, residual, left, start):
    """Levenberg-Marquardt style descent over exponential coordinates around start."""
    if rep.dim == 0:
        g = left @ start
        return float(np.linalg.norm(residual(g))), g
    g0 = start
    for _ in range(2):
        fun = lambda theta, g0=g0: residual(left @ exp_element(rep, theta) @ g0)
        sol = optimize.least_squares(fun, np.zeros(rep.dim), xtol=1e-12, ftol=1e-12,
                                     gtol=1e-12, max_nfev=100 * (rep.dim + 1))
        g0 = exp_element(rep, sol.x) @ g0
    g = left @ g0
    return float(np.linalg.norm(residual(g))), g


def group_descents(rep, residual, budget, seed=0, components=None):
    """Local minima of ||residual(g)|| from ``budget`` restarts per component.

    ``components`` defaults to the identity plus the rep's discrete elements.
    Restart r starts from exp(t_1 X_1)...exp(t_d X_d) with the r-th draw of
    uniform parameters (restart 0 starts at the identity), so a smaller budget
    sees a prefix of the starts of a larger one.  Results are ordered by
    restart, then by component.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1, got %r" % budget)
    if components is None:
        components = [np.eye(rep.ambient_dim)] + list(rep.discrete_elements)
    rng = np.random.default_rng(seed)
    starts = [np.eye(rep.ambient_dim)]
    for _ in range(budget - 1):
        starts.append(element_from_params(rep, rng.uniform(-np.pi, np.pi, rep.dim)))
    tasks = [(left, start) for start in starts for left in components]
    workers = worker_count()
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda task: _local_descent(rep, residual, *task), tasks))
    return [_local_descent(rep, residual, *task) for task in tasks]


def minimize_over_group(rep, residual, budget, seed=0, components=None):
    """Minimize ||residual(g)|| over g in the components of the group."""
    if components is None:
        components = [np.eye(rep.ambient_dim)] + list(rep.discrete_elements)
    results = group_descents(rep, residual, budget, seed, components)

    best_value, best_element = np.inf, None
    history = []
    per_restart = len(components)
    for r in range(budget):
        for value, element in results[r * per_restart:(r + 1) * per_restart]:
            if value < best_value:
                best_value, best_element = value, element
        history.append(best_value)
    half = history[(budget + 1) // 2 - 1]
    stable = half - best_value <= 1e-9
    logger.debug('group minimum %.3g after %d restarts (stable: %s)', best_value, budget, stable)
    return GroupMinimum(best_value, best_element, stable, budget, seed, tuple(history))


def estimate_orbit_distance(rep, p, q, budget=64, seed=0):
    p = as_vector(p, rep.ambient_dim, 'p')
    q = as_vector(q, rep.ambient_dim, 'q')
    return minimize_over_group(rep, lambda g: g @ p - q, budget, seed)


def orbit_distance(rep, p, q, budget=64, seed=0):
    return estimate_orbit_distance(rep, p, q, budget, seed).value


def distance_to_subspace(rep, q, sigma, budget=8, seed=0):
    """min over g of the distance from g q to the subspace sigma."""
    q = as_vector(q, rep.ambient_dim, 'q')
    return minimize_over_group(rep, lambda g: g @ q - project(sigma, g @ q), budget, seed)
