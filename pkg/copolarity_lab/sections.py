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
"""Fat sections, copolarity and reductions.

A section candidate is a linear subspace through the origin.  Canonical
sections are fixed-point subspaces of the isotropy at a regular point; a
reduction is the action of the normalizer of a section, modulo its
centralizer, on the section itself.
"""

import dataclasses
import logging

import numpy as np

from . liealg import exp_element
from . numkernel import (
    Subspace, as_vector, complement, nullspace, orthonormal_basis,
    subspace_distance, subspace_intersect)
from . orbits import (
    analyze_point, distance_to_subspace, estimate_orbit_distance, find_regular,
    group_descents, minimize_over_group, principal_certificate, shape_operator,
    slice_rep)
from . reports import Check, Report, equality, within

logger = logging.getLogger('copolarity_lab')

CANONICAL = 'canonical'
USER_SUPPLIED = 'user_supplied'


class SectionError(Exception):
    """Base class for section-level failures."""


class NotRegular(SectionError):
    pass


class AnchorNotInSection(SectionError):
    pass


class PointOutsideSection(SectionError):
    pass


class DecompositionError(SectionError):
    pass


@dataclasses.dataclass(frozen=True, eq=False)
class SectionCandidate:
    sigma: Subspace
    source: str
    anchor: object = None
    discrete_used: int = 0

    @classmethod
    def user_supplied(cls, sigma, anchor=None):
        return cls(sigma, USER_SUPPLIED, anchor)


@dataclasses.dataclass(frozen=True, eq=False)
class ReductionData:
    sigma: Subspace
    normalizer_alg: Subspace
    centralizer_alg: Subspace
    weyl_dim: int
    reduced_rep: object
    weyl_complement: Subspace
    representatives: int = 0

    def coordinates(self, q):
        return self.sigma.coordinates(q)


def _require_in(sigma, x, policy, error=PointOutsideSection, what='point'):
    residual = sigma.residual(x)
    if residual > policy.containment_tol * max(1.0, float(np.linalg.norm(x))):
        raise error("%s is not in the section (residual %.3g)" % (what, residual))


def fixing_element(rep, element, p, budget=8, seed=0):
    """An element of element * G0 fixing p, or None if the search fails."""
    tol = rep.policy.containment_tol * max(1.0, float(np.linalg.norm(p)))
    if np.linalg.norm(element @ p - p) <= tol:
        return element
    if rep.dim == 0:
        return None
    found = minimize_over_group(rep, lambda g: g @ p - p, budget, seed, components=[element])
    return found.element if found.value <= tol else None


def canonical_section(rep, ctx, budget=8, seed=0):
    """Fixed subspace of the isotropy at a regular point.

    The identity component contributes through the isotropy algebra; every
    supplied discrete element d contributes through an element of d * G0
    fixing p, when one exists.  Without discrete data the result can be
    larger than the fixed set of the full isotropy group.
    """
    if not ctx.regular:
        raise NotRegular("canonical sections need a certified regular anchor")
    n = rep.ambient_dim
    blocks = [rep.algebra_element(c) for c in ctx.isotropy_alg.basis.T]
    used = 0
    for element in rep.discrete_elements:
        h = fixing_element(rep, element, ctx.p, budget, seed)
        if h is not None:
            blocks.append(h - np.eye(n))
            used += 1
    sigma = nullspace(np.vstack(blocks), rep.policy) if blocks else Subspace.full(n)
    if not sigma.contains(ctx.p, rep.policy.containment_tol):
        logger.warning('canonical section misses its anchor')
    if not ctx.normal.is_subspace_of(sigma, rep.policy.containment_tol):
        logger.warning('canonical section misses the normal space of its anchor')
    logger.debug('canonical section of dimension %d (%d discrete elements used)',
                 sigma.dim, used)
    return SectionCandidate(sigma, CANONICAL, ctx, used)


def copolarity(rep, cand, ctx=None):
    ctx = ctx if ctx is not None else cand.anchor
    if ctx is None or not ctx.regular:
        raise NotRegular("copolarity needs a certified regular anchor")
    _require_in(cand.sigma, ctx.p, rep.policy, AnchorNotInSection, 'anchor')
    return subspace_intersect(ctx.orbit_tangent, cand.sigma, rep.policy).dim


def regular_point_in(rep, sigma, certificate, seed=0, attempts=50):
    """A certified regular point of sigma, from Gaussian coordinates."""
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        ctx = analyze_point(rep, sigma.embed(rng.standard_normal(sigma.dim)), certificate)
        if ctx.regular:
            return ctx
    raise NotRegular("no regular point found in the section after %d attempts" % attempts)


def section_copolarity(rep, sigma, trials=100, seed=0):
    """Copolarity of sigma at one of its regular points."""
    certificate, _ = principal_certificate(rep, trials, seed)
    ctx = regular_point_in(rep, sigma, certificate, seed)
    return subspace_intersect(ctx.orbit_tangent, sigma, rep.policy).dim, ctx


def normalizer_algebra(rep, sigma):
    """Coefficients of the X with X sigma contained in sigma."""
    d = rep.dim
    if sigma.dim == 0:
        return Subspace.full(d)
    rest = np.eye(rep.ambient_dim) - sigma.projector()
    cols = [(rest @ x @ sigma.basis).ravel() for x in rep.generators]
    if not cols:
        return Subspace.full(0)
    return nullspace(np.column_stack(cols), rep.policy)


def centralizer_algebra(rep, sigma):
    """Coefficients of the X vanishing on sigma."""
    d = rep.dim
    if sigma.dim == 0:
        return Subspace.full(d)
    cols = [(x @ sigma.basis).ravel() for x in rep.generators]
    if not cols:
        return Subspace.full(0)
    return nullspace(np.column_stack(cols), rep.policy)


def same_component(reduced, u, w, tol=1e-6, budget=4):
    """Whether u^-1 w lies in the identity component of the reduced group."""
    target = u.T @ w
    if reduced.dim == 0:
        return float(np.max(np.abs(target - np.eye(reduced.ambient_dim)))) <= tol
    found = minimize_over_group(reduced, lambda g: (g - target).ravel(), budget,
                                components=[np.eye(reduced.ambient_dim)])
    return found.value <= tol


def weyl_representatives(rep, sigma, reduced, budget=16, seed=0):
    """Restrictions to sigma of normalizing elements outside the reduced identity component.

    Candidates are the supplied discrete elements that normalize sigma and
    the minima of a random-restart search for elements g with g sigma = sigma.
    The result is a set of distinct representatives, not a component count.
    """
    b = sigma.basis
    rest = np.eye(rep.ambient_dim) - sigma.projector()
    tol = 1e-8
    candidates = []
    for element in rep.discrete_elements:
        if np.linalg.norm(rest @ element @ b) <= tol:
            candidates.append(b.T @ element @ b)
    if sigma.dim and rep.dim:
        for value, g in group_descents(rep, lambda g: (rest @ g @ b).ravel(), budget, seed):
            if value <= tol:
                candidates.append(b.T @ g @ b)
    found = []
    eye = np.eye(sigma.dim)
    for w in candidates:
        if same_component(reduced, eye, w):
            continue
        if any(same_component(reduced, u, w) for u in found):
            continue
        found.append(w)
    logger.debug('%d Weyl representatives outside the identity component', len(found))
    return found


def reduction(rep, cand, search_budget=16, seed=0):
    sigma = cand.sigma
    n_alg = normalizer_algebra(rep, sigma)
    z_alg = centralizer_algebra(rep, sigma)
    if not z_alg.is_subspace_of(n_alg, rep.policy.containment_tol):
        logger.warning('centralizer is not contained in the normalizer')
    weyl_dim = n_alg.dim - z_alg.dim
    comp = subspace_intersect(n_alg, complement(z_alg), rep.policy)
    if comp.dim != weyl_dim:
        logger.warning('complement of the centralizer has dimension %d, expected %d',
                       comp.dim, weyl_dim)
    reduced = rep.restricted(comp.basis, sigma)
    found = []
    if search_budget:
        found = weyl_representatives(rep, sigma, reduced, search_budget, seed)
        reduced = reduced.with_discrete(found)
    return ReductionData(sigma, n_alg, z_alg, weyl_dim, reduced, comp, len(found))


@dataclasses.dataclass(frozen=True, eq=False)
class DEDecomposition:
    d_space: Subspace
    e_space: Subspace
    tangent_dim: int
    orthogonality: float
    complete: bool


def de_decompose(rep, cand, q, strict=True):
    """D_q = T_q(G q) meet sigma and E_q = T_q(G q) meet the normal space of sigma."""
    q = as_vector(q, rep.ambient_dim, 'q')
    _require_in(cand.sigma, q, rep.policy)
    ctx = analyze_point(rep, q)
    d_space = subspace_intersect(ctx.orbit_tangent, cand.sigma, rep.policy)
    e_space = subspace_intersect(ctx.orbit_tangent, complement(cand.sigma), rep.policy)
    orthogonality = float(np.max(np.abs(d_space.basis.T @ e_space.basis))) \
        if d_space.dim and e_space.dim else 0.0
    complete = d_space.dim + e_space.dim == ctx.orbit_dim and orthogonality < 1e-8
    if strict and not complete:
        raise DecompositionError(
            "D (%d) + E (%d) does not fill the orbit tangent space (%d)"
            % (d_space.dim, e_space.dim, ctx.orbit_dim))
    return DEDecomposition(d_space, e_space, ctx.orbit_dim, orthogonality, complete)


def check_totally_geodesic(rep, cand, ctx_q, tol=1e-8):
    """Invariance of D_q and E_q under A_eta for eta in the normal space met with sigma."""
    report = Report('totally_geodesic')
    dec = de_decompose(rep, cand, ctx_q.p, strict=False)
    report.add(Check('decomposition_complete', dec.complete, dec.orthogonality, tol,
                     'dim D %d + dim E %d vs orbit dim %d'
                     % (dec.d_space.dim, dec.e_space.dim, dec.tangent_dim)))
    etas = subspace_intersect(ctx_q.normal, cand.sigma, rep.policy)
    t = ctx_q.orbit_tangent.basis
    worst_d = worst_e = 0.0
    d_coords = orthonormal_basis(t.T @ dec.d_space.basis, rep.policy, t.shape[1])
    e_coords = orthonormal_basis(t.T @ dec.e_space.basis, rep.policy, t.shape[1])
    for eta in etas.basis.T:
        a = shape_operator(rep, ctx_q, eta)
        if d_coords.dim:
            worst_d = max(worst_d, d_coords.residual(a @ d_coords.basis))
        if e_coords.dim:
            worst_e = max(worst_e, e_coords.residual(a @ e_coords.basis))
    report.add(within('d_invariant', worst_d, tol))
    report.add(within('e_invariant', worst_e, tol))
    report.values.update(d_dim=dec.d_space.dim, e_dim=dec.e_space.dim, eta_dim=etas.dim)
    return report


def verify_axioms(rep, cand, samples=200, seed=0, budget=8, trials=100):
    """Monte-Carlo surrogates for the fat-section axioms.

    (A) holds for every linear subspace.  (B) is sampled over random points,
    (C) over regular points of sigma, (D) over the subgroup generated by the
    normalizer algebra only, so the report is never a full certificate.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1, got %r" % samples)
    sigma = cand.sigma
    n = rep.ambient_dim
    rng = np.random.default_rng(seed)
    report = Report('axioms')
    report.add(Check('A_totally_geodesic', True, 0.0, 0.0, 'linear subspace through the origin'))

    worst_b = 0.0
    for i in range(samples):
        q = rng.standard_normal(n)
        found = distance_to_subspace(rep, q, sigma, budget, seed + i)
        worst_b = max(worst_b, found.value / max(1.0, float(np.linalg.norm(q))))
    report.add(within('B_meets_every_orbit', worst_b, 1e-6,
                      'Monte-Carlo over %d points, budget %d' % (samples, budget)))

    certificate, _ = principal_certificate(rep, trials, seed)
    worst_c = 0.0
    regular_seen = 0
    for _ in range(samples):
        ctx = analyze_point(rep, sigma.embed(rng.standard_normal(sigma.dim)), certificate)
        if ctx.regular:
            regular_seen += 1
            worst_c = max(worst_c, sigma.residual(ctx.normal.basis))
    report.add(within('C_contains_normal_spaces', worst_c, 1e-6,
                      '%d regular points of %d sampled' % (regular_seen, samples)))

    n_alg = normalizer_algebra(rep, sigma)
    rest = np.eye(n) - sigma.projector()
    worst_d = 0.0
    if n_alg.dim and sigma.dim:
        for _ in range(samples):
            g = exp_element(rep, n_alg.embed(rng.uniform(-np.pi, np.pi, n_alg.dim)))
            worst_d = max(worst_d, float(np.linalg.norm(rest @ g @ sigma.basis)))
    report.add(within('D_normalizer_preserves', worst_d, 1e-8,
                      'normalizer-generated subgroup only'))
    report.values.update(sigma_dim=sigma.dim, samples=samples, seed=seed, budget=budget,
                         regular_points=regular_seen, fully_verified=False)
    return report


def discrete_fixers(rep, x, budget=4, seed=0):
    """How many discrete components contain an element fixing x."""
    return sum(fixing_element(rep, element, x, budget, seed) is not None
               for element in rep.discrete_elements)


def _orbit_type(rep, x, certificate, generic_fixers, budget, seed):
    ctx = analyze_point(rep, x, certificate)
    return ctx.regular and discrete_fixers(rep, x, budget, seed) <= generic_fixers


def regularity_equivalence(rep, red, samples=100, seed=0, trials=100, budget=4):
    """G-regularity against reduced regularity for points of the section.

    Regularity is judged by orbit dimension, refined by the number of
    discrete components fixing the point.
    """
    wrep = red.reduced_rep
    cert_g, point_g = principal_certificate(rep, trials, seed)
    cert_w, point_w = principal_certificate(wrep, trials, seed)
    fix_g = discrete_fixers(rep, point_g, budget, seed)
    fix_w = discrete_fixers(wrep, point_w, budget, seed)
    rng = np.random.default_rng(seed)
    coords = [np.zeros(red.sigma.dim)] + [rng.standard_normal(red.sigma.dim)
                                          for _ in range(samples - 1)]
    counterexamples = []
    regular_count = 0
    for z in coords:
        g_regular = _orbit_type(rep, red.sigma.embed(z), cert_g, fix_g, budget, seed)
        w_regular = _orbit_type(wrep, z, cert_w, fix_w, budget, seed)
        regular_count += int(g_regular)
        if g_regular != w_regular:
            counterexamples.append(z.tolist())
    report = Report('regularity_equivalence')
    report.add(Check('equivalence', not counterexamples, float(len(counterexamples)), 0.0,
                     '%d sampled points' % len(coords)))
    report.values.update(samples=len(coords), regular=regular_count,
                         counterexamples=counterexamples, seed=seed,
                         principal_dim=cert_g.principal_dim,
                         reduced_principal_dim=cert_w.principal_dim)
    return report


def stability_check(rep, red, trials=100, seed=0):
    """copol(G, M) against copol(W, sigma), plus dim sigma = cohom + copol."""
    copol_g, _ = section_copolarity(rep, red.sigma, trials, seed)
    wrep = red.reduced_rep
    ctx_w = find_regular(wrep, trials, seed)
    copol_w = copolarity(wrep, canonical_section(wrep, ctx_w, seed=seed), ctx_w)
    cert, _ = principal_certificate(rep, trials, seed)
    cohom = rep.ambient_dim - cert.principal_dim
    report = Report('stability')
    report.add(equality('copolarity_stable', copol_g, copol_w))
    identity = Check('section_dimension_identity', red.sigma.dim == cohom + copol_g,
                     float(abs(red.sigma.dim - cohom - copol_g)), 0.0,
                     'necessary condition for minimality', informational=True)
    report.add(identity)
    report.values.update(copolarity=copol_g, reduced_copolarity=copol_w,
                         sigma_dim=red.sigma.dim, cohomogeneity=cohom, trials=trials,
                         seed=seed)
    return report


def slice_inequality(rep, cand, points, trials=100, seed=0, draws=5, copol_global=None):
    """Slice copolarity bounded by the global one, and V_q a pre-section of the slice."""
    sigma = cand.sigma
    if copol_global is None:
        copol_global, _ = section_copolarity(rep, sigma, trials, seed)
    rng = np.random.default_rng(seed)
    report = Report('slice_inequality')
    rows = []
    worst_c = 0.0
    for q in points:
        q = as_vector(q, rep.ambient_dim, 'q')
        _require_in(sigma, q, rep.policy)
        ctx_q = analyze_point(rep, q)
        srep = slice_rep(rep, ctx_q)
        ctx_s = find_regular(srep, trials, seed)
        copol_s = copolarity(srep, canonical_section(srep, ctx_s, seed=seed), ctx_s)
        v_space = subspace_intersect(ctx_q.normal, sigma, rep.policy)
        v_coords = orthonormal_basis(ctx_q.normal.basis.T @ v_space.basis, rep.policy,
                                     ctx_q.normal.dim)
        for _ in range(draws if v_coords.dim else 0):
            ctx_v = analyze_point(srep, v_coords.embed(rng.standard_normal(v_coords.dim)),
                                  ctx_s.certificate)
            if ctx_v.regular:
                worst_c = max(worst_c, v_coords.residual(ctx_v.normal.basis))
        rows.append({'orbit_dim': ctx_q.orbit_dim, 'slice_dim': srep.ambient_dim,
                     'slice_algebra_dim': srep.dim, 'slice_copolarity': copol_s})
        report.add(Check('slice_copolarity_bounded', copol_s <= copol_global,
                         float(max(0, copol_s - copol_global)), 0.0,
                         '%d <= %d' % (copol_s, copol_global)))
    report.add(within('pre_section_in_slice', worst_c, 1e-6))
    report.values.update(copolarity=copol_global, points=rows, seed=seed)
    return report


def centralizer_check(rep, red, samples=10, seed=0, trials=100):
    """The centralizer algebra is the isotropy algebra of regular points of sigma."""
    certificate, _ = principal_certificate(rep, trials, seed)
    worst = 0.0
    for i in range(samples):
        ctx = regular_point_in(rep, red.sigma, certificate, seed + i)
        worst = max(worst, subspace_distance(ctx.isotropy_alg, red.centralizer_alg))
    report = Report('centralizer')
    report.add(within('principal_isotropy', worst, 1e-7))
    return report


def weyl_relation_check(rep, red, samples=10, seed=0, budget=16):
    """Points g q landing back in sigma lie on the reduced orbit of q."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    used = 0
    for i in range(samples):
        q = red.sigma.embed(rng.standard_normal(red.sigma.dim))
        moved = exp_element(rep, rng.uniform(-np.pi, np.pi, rep.dim)) @ q if rep.dim else q
        back = distance_to_subspace(rep, moved, red.sigma, budget, seed + i)
        if back.value > 1e-8:
            continue
        used += 1
        r = back.element @ moved
        found = estimate_orbit_distance(red.reduced_rep, red.coordinates(q),
                                        red.coordinates(r), budget, seed + i)
        worst = max(worst, found.value)
    report = Report('weyl_relation')
    report.add(within('reduced_orbit_contains', worst, 1e-6, '%d points' % used))
    return report
