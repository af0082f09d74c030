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
"""Resolution bookkeeping and invariant metrics on G/H.

The resolution of an action along a section is represented only through
computable invariants: resolved isotropy dimensions, the local
diffeomorphism criterion and dimension audits.  The second half solves for
scalar products on g/h that are invariant under a subgroup N normalizing H.
"""

import dataclasses
import logging

import numpy as np
from scipy import linalg, optimize

from . liealg import StructureConstants
from . numkernel import (
    DEFAULT_POLICY, Subspace, as_square, as_vector, complement, containment_residual,
    nullspace, orthonormal_basis, subspace_intersect, subspace_sum)
from . orbits import analyze_point, principal_certificate
from . reports import Check, Report, equality, within
from . sections import PointOutsideSection, regular_point_in

logger = logging.getLogger('copolarity_lab')


class ResolutionError(Exception):
    """Base class for resolution and metric failures."""


class TripleDatumError(ResolutionError):
    pass


class InfeasibleNumerically(ResolutionError):
    """No positive-definite invariant scalar product was found.

    This is "not found", never a proof of nonexistence.
    """

    def __init__(self, solution):
        super().__init__("no positive-definite solution found (best minimum eigenvalue %.3g)"
                         % solution.min_eig)
        self.solution = solution


def _section_point(rep, red, s_point):
    s = as_vector(s_point, rep.ambient_dim, 's')
    residual = containment_residual(red.sigma, s)
    if residual > rep.policy.containment_tol * max(1.0, float(np.linalg.norm(s))):
        raise PointOutsideSection("point is not in the section (residual %.3g)" % residual)
    return s


def resolution_isotropy(rep, red, s_point):
    """Dimension of the normalizer meet the isotropy algebra at s."""
    ctx = analyze_point(rep, _section_point(rep, red, s_point))
    return subspace_intersect(red.normalizer_alg, ctx.isotropy_alg, rep.policy).dim


def local_diffeo_criterion(rep, red, s_point):
    """The three equivalent forms of T_s(G s) + T_s sigma = T_s M."""
    ctx = analyze_point(rep, _section_point(rep, red, s_point))
    sigma = red.sigma
    span = subspace_sum(ctx.orbit_tangent, sigma, rep.policy).dim
    form_a = span == rep.ambient_dim
    normal_residual = sigma.residual(ctx.normal.basis) if ctx.normal.dim else 0.0
    form_b = normal_residual <= rep.policy.containment_tol
    resolved = subspace_intersect(red.normalizer_alg, ctx.isotropy_alg, rep.policy).dim
    form_c = resolved == ctx.isotropy_alg.dim
    report = Report('local_diffeo')
    report.add(Check('forms_agree', form_a == form_b == form_c, 0.0, 0.0,
                     'a=%s b=%s c=%s' % (form_a, form_b, form_c)))
    report.add(Check('resolved_isotropy_bounded', resolved <= ctx.isotropy_alg.dim,
                     float(max(0, resolved - ctx.isotropy_alg.dim)), 0.0))
    report.add(Check('criterion', form_a and form_b and form_c, normal_residual,
                     rep.policy.containment_tol, informational=True))
    report.values.update(tangent_plus_section=span, ambient_dim=rep.ambient_dim,
                         isotropy_dim=ctx.isotropy_alg.dim, resolved_isotropy_dim=resolved,
                         holds=bool(form_a and form_b and form_c))
    return report


def local_diffeo_suite(rep, red, points):
    """Criterion over a set of sampled section points.

    The diffeomorphism conclusion is certified only over the sampled set.
    """
    report = Report('local_diffeo_suite')
    disagreements = 0
    holds = 0
    rows = []
    for s in points:
        single = local_diffeo_criterion(rep, red, s)
        disagreements += sum(not c.passed for c in single.checks if not c.informational)
        holds += int(single.values['holds'])
        rows.append(single.values)
    report.add(Check('forms_agree', disagreements == 0, float(disagreements), 0.0,
                     '%d sampled points' % len(rows)))
    report.values.update(points=rows, holds_everywhere=holds == len(rows),
                         holding=holds, samples=len(rows))
    return report


def dimension_audit(rep, red, samples=5, trials=100, seed=0):
    """dim M = dim sigma + (dim G s - dim W s) at regular s, and its chain."""
    wrep = red.reduced_rep
    cert_g, _ = principal_certificate(rep, trials, seed)
    cert_w, _ = principal_certificate(wrep, trials, seed)
    n = rep.ambient_dim
    worst = 0
    for i in range(samples):
        ctx = regular_point_in(rep, red.sigma, cert_g, seed + i)
        w_dim = analyze_point(wrep, red.coordinates(ctx.p)).orbit_dim
        worst = max(worst, abs(n - (red.sigma.dim + ctx.orbit_dim - w_dim)))
    cohom = n - cert_g.principal_dim
    reduced_isotropy = wrep.dim - cert_w.principal_dim
    principal_isotropy = rep.dim - cert_g.principal_dim
    report = Report('dimension_audit')
    report.add(Check('ambient_identity', worst == 0, float(worst), 0.0,
                     'dim M = dim sigma + dim G s - dim W s over %d points' % samples))
    report.add(equality('section_identity', red.sigma.dim,
                        cohom + wrep.dim - reduced_isotropy))
    report.add(equality('reduced_isotropy', reduced_isotropy,
                        principal_isotropy - red.centralizer_alg.dim))
    report.values.update(ambient_dim=n, sigma_dim=red.sigma.dim, cohomogeneity=cohom,
                         weyl_dim=red.weyl_dim, principal_orbit_dim=cert_g.principal_dim,
                         reduced_principal_orbit_dim=cert_w.principal_dim, seed=seed)
    return report


@dataclasses.dataclass(frozen=True, eq=False)
class TripleDatum:
    """H normal in N inside G, at the algebra level.

    ``g_sc`` uses a basis orthonormal for the input inner product;
    ``quotient_basis`` spans h^perp, the model of g/h.
    """
    g_sc: StructureConstants
    h_alg: Subspace
    n_alg: Subspace
    quotient_basis: Subspace
    basis_change: np.ndarray
    policy: object = DEFAULT_POLICY

    @property
    def quotient_dim(self):
        return self.quotient_basis.dim

    def quotient_ad(self, x):
        """ad_x acting on g/h in the quotient basis."""
        c = self.quotient_basis.basis
        return c.T @ self.g_sc.ad(x) @ c

    def n_actions(self):
        return [self.quotient_ad(x) for x in self.n_alg.basis.T]


def _closure_residual(sc, a, b, target):
    if a.dim == 0 or b.dim == 0:
        return 0.0
    cols = np.einsum('ia,jb,ijk->kab', a.basis, b.basis, sc.c).reshape(sc.d, -1)
    return target.residual(cols)


def make_triple_datum(sc, h_indices, n_indices, inner=None, policy=DEFAULT_POLICY):
    d = sc.d
    q = np.eye(d) if inner is None else as_square(inner, 'inner product')
    if q.shape != (d, d):
        raise TripleDatumError("inner product must be %d x %d" % (d, d))
    for name, indices in (('h_indices', h_indices), ('n_indices', n_indices)):
        bad = [i for i in indices if not 0 <= int(i) < d]
        if bad:
            raise TripleDatumError("%s out of range: %s" % (name, bad))
    try:
        t = linalg.inv(linalg.cholesky(q, lower=True)).T if d else np.zeros((0, 0))
    except linalg.LinAlgError:
        raise TripleDatumError("inner product is not positive definite")
    sc_int = sc.change_basis(t) if d else sc
    t_inv = linalg.inv(t) if d else t

    def span(indices):
        cols = t_inv[:, [int(i) for i in indices]] if len(indices) else np.zeros((d, 0))
        return orthonormal_basis(cols, policy, d)

    h = span(h_indices)
    n = span(n_indices)
    tol = policy.containment_tol
    if h.dim and n.residual(h.basis) > tol:
        raise TripleDatumError("h is not contained in n")
    for name, a, b, target in (('h', h, h, h), ('n', n, n, n), ('[n,h] in h', n, h, h)):
        residual = _closure_residual(sc_int, a, b, target)
        if residual > tol:
            raise TripleDatumError("%s is not closed (residual %.3g)" % (name, residual))
    return TripleDatum(sc_int, h, n, complement(h), t, policy)


@dataclasses.dataclass(frozen=True, eq=False)
class MetricSolution:
    s_matrix: np.ndarray
    feasible: bool
    min_eig: float
    skew_residual: float
    solution_dim: int
    iterations: int


def metric_residual(td, s_matrix):
    """Largest ||S A + A^T S|| over the quotient actions A of a basis of n."""
    s = np.asarray(s_matrix, dtype=float)
    worst = 0.0
    for a in td.n_actions():
        worst = max(worst, float(np.max(np.abs(s @ a + a.T @ s))) if a.size else 0.0)
    return worst


def _symmetric_basis(q):
    """Frobenius-orthonormal basis of the symmetric q x q matrices."""
    mats = []
    for i in range(q):
        for j in range(i, q):
            m = np.zeros((q, q))
            if i == j:
                m[i, i] = 1.0
            else:
                m[i, j] = m[j, i] = 1.0 / np.sqrt(2.0)
            mats.append(m)
    return mats


def _normalized_min_eig(mats, alpha):
    s = np.einsum('k,kij->ij', alpha, mats)
    norm = np.linalg.norm(s)
    if norm == 0:
        return -np.inf
    return float(linalg.eigvalsh(s / norm)[0])


def gw_metric(td, budget=200, strict=True, margin=1e-8):
    """Ad(N)-invariant scalar product on g/h.

    Solves S A + A^T S = 0 over symmetric S for the quotient actions A of n,
    starts from the projection of the identity onto the solution space and
    runs coordinate ascent on the normalized minimum eigenvalue.
    """
    q = td.quotient_dim
    if q == 0:
        return MetricSolution(np.zeros((0, 0)), True, 0.0, 0.0, 0, 0)
    sym = _symmetric_basis(q)
    actions = td.n_actions()
    if actions:
        columns = [np.concatenate([(b @ a + a.T @ b).ravel() for a in actions]) for b in sym]
        solutions = nullspace(np.column_stack(columns), td.policy)
    else:
        solutions = Subspace.full(len(sym))
    mats = np.einsum('bk,bij->kij', solutions.basis, np.array(sym))
    if solutions.dim == 0:
        solution = MetricSolution(np.zeros((q, q)), False, -np.inf, 0.0, 0, 0)
        if strict:
            raise InfeasibleNumerically(solution)
        return solution

    eye = np.eye(q)
    alpha = np.array([np.sum(m * eye) for m in mats])
    if not np.any(alpha):
        alpha = np.eye(solutions.dim)[0]
    value = _normalized_min_eig(mats, alpha)
    iterations = 0
    while value <= margin and iterations < budget:
        iterations += 1
        for k in range(solutions.dim):
            radius = 2.0 * (1.0 + float(np.linalg.norm(alpha)))

            def negative(t, k=k):
                trial = alpha.copy()
                trial[k] = t
                return -_normalized_min_eig(mats, trial)

            found = optimize.minimize_scalar(negative, bounds=(alpha[k] - radius,
                                                               alpha[k] + radius),
                                             method='bounded')
            if -found.fun > value:
                alpha[k] = found.x
                value = -found.fun
        logger.debug('coordinate ascent round %d: normalized minimum eigenvalue %.3g',
                     iterations, value)

    s = np.einsum('k,kij->ij', alpha, mats)
    s = 0.5 * (s + s.T)
    trace = float(np.trace(s))
    if trace > 0:
        s = s * (q / trace)
    min_eig = float(linalg.eigvalsh(s)[0])
    feasible = value > margin and min_eig > 0
    solution = MetricSolution(s, feasible, min_eig, metric_residual(td, s),
                              solutions.dim, iterations)
    if not feasible and strict:
        raise InfeasibleNumerically(solution)
    return solution


def metric_isometry_check(td, sol, tol=1e-9):
    """The S-orthogonal complement of n/h in g/h is isometric to g/n.

    g/n carries the quotient norm |[u]| = min over y in n/h of |u + y|_S.
    Also reports whether that complement is invariant under ad_n.
    """
    report = Report('metric_isometry')
    if not sol.feasible:
        report.add(Check('feasible', False, sol.min_eig, 0.0))
        return report
    s = sol.s_matrix
    q = td.quotient_dim
    n_quot = orthonormal_basis(td.quotient_basis.basis.T @ td.n_alg.basis, td.policy, q) \
        if q else Subspace.zero(0)
    if q == 0 or n_quot.dim == q:
        report.add(Check('isometry', True, 0.0, tol, 'complement is 0-dimensional'))
        report.values.update(complement_dim=0)
        return report
    nb = n_quot.basis
    perp = nullspace(nb.T @ s, td.policy) if n_quot.dim else Subspace.full(q)
    cn = complement(n_quot).basis
    if n_quot.dim:
        cross = cn.T @ s @ nb
        gram = cn.T @ s @ cn - cross @ linalg.solve(nb.T @ s @ nb, cross.T)
    else:
        gram = cn.T @ s @ cn
    image = cn.T @ perp.basis
    residual = float(np.max(np.abs(perp.basis.T @ s @ perp.basis - image.T @ gram @ image)))
    rank = orthonormal_basis(image, td.policy, image.shape[0]).dim
    report.add(within('isometry', residual, tol))
    report.add(equality('bijective', rank, q - n_quot.dim))
    invariance = max((perp.residual(a @ perp.basis) for a in td.n_actions()), default=0.0)
    report.add(within('complement_ad_invariant', invariance, td.policy.containment_tol))
    report.values.update(complement_dim=perp.dim)
    return report


def metric_group_check(td, sol, samples=50, seed=0, tol=1e-8):
    """Invariance of S under sampled elements of the group generated by n."""
    rng = np.random.default_rng(seed)
    actions = td.n_actions()
    worst = 0.0
    s = sol.s_matrix
    if actions and td.quotient_dim:
        for _ in range(samples):
            a = np.einsum('k,kij->ij', rng.uniform(-np.pi, np.pi, len(actions)),
                          np.array(actions))
            g = linalg.expm(a)
            worst = max(worst, float(np.max(np.abs(g.T @ s @ g - s))))
    report = Report('metric_group')
    report.add(within('sampled_invariance', worst, tol, '%d samples' % samples))
    return report
