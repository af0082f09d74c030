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
"""Symmetric pairs, Lie triple systems and the H x K action on G.

A :class:`SymPair` is stored in coordinates that are orthonormal for its
invariant inner product, so all subspace arithmetic uses the standard dot
product.  Public functions take algebra vectors in the coordinates of the
input basis and convert them with ``pair.to_internal``; the subspaces held
by a pair or a triple system are in internal coordinates.
"""

import dataclasses
import itertools
import logging

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import linalg

from . liealg import StructureConstants
from . numkernel import (
    DEFAULT_POLICY, Subspace, as_matrix, as_square, as_vector, complement,
    nullspace, orthonormal_basis, subspace_distance, subspace_intersect,
    subspace_sum)
from . reports import Check, Report, equality, within

logger = logging.getLogger('copolarity_lab')


class SymPairError(Exception):
    """Base class for symmetric-pair failures."""


class NotInvolution(SymPairError):
    pass


class NotAutomorphism(SymPairError):
    pass


class BadGrading(SymPairError):
    pass


class InnerNotInvariant(SymPairError):
    pass


class MissingEmbedding(SymPairError):
    pass


class NotInGroup(SymPairError):
    pass


class NotTriple(SymPairError):

    def __init__(self, message, residual):
        super().__init__("%s (residual %.3g)" % (message, residual))
        self.residual = residual


class EigenRelationFails(SymPairError):
    pass


def _brackets(sc, a, b):
    """All brackets of the columns of a with the columns of b, as columns."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((sc.d, 0))
    return np.einsum('ia,jb,ijk->kab', a, b, sc.c).reshape(sc.d, -1)


def _bracket_residual(sc, a, b, target):
    cols = _brackets(sc, a.basis, b.basis)
    return target.residual(cols) if cols.shape[1] else 0.0


@dataclasses.dataclass(frozen=True, eq=False)
class SymPair:
    """Lie algebra with an involution and an invariant inner product.

    ``sc``, ``sigma_inv``, ``k_space``, ``p_space`` and ``embedding`` use the
    inner-orthonormal basis Y_a = sum_i basis_change[i, a] X_i.
    """
    sc: StructureConstants
    inner: np.ndarray
    sigma_inv: np.ndarray
    k_space: Subspace
    p_space: Subspace
    basis_change: np.ndarray
    embedding: np.ndarray = None
    policy: object = DEFAULT_POLICY

    @property
    def d(self):
        return self.sc.d

    def to_internal(self, x):
        return linalg.solve(self.basis_change, np.asarray(x, dtype=float))

    def to_user(self, x):
        return self.basis_change @ x

    def subspace(self, columns):
        """Subspace spanned by user-coordinate columns."""
        cols = as_matrix(columns, rows=self.d, name='basis')
        return orthonormal_basis(self.to_internal(cols), self.policy, self.d)

    def embed(self, x):
        if self.embedding is None:
            raise MissingEmbedding("this pair has no matrix embedding")
        return np.einsum('a,aij->ij', x, self.embedding)


def cartan_decompose(sc, inner, sigma_inv, embedding=None, policy=DEFAULT_POLICY):
    d = sc.d
    q = as_square(inner, 'inner product')
    s = as_square(sigma_inv, 'involution')
    if q.shape != (d, d) or s.shape != (d, d):
        raise SymPairError("inner product and involution must be %d x %d" % (d, d))
    residual = float(np.max(np.abs(s @ s - np.eye(d)))) if d else 0.0
    if residual > 1e-10:
        raise NotInvolution("sigma^2 != identity (residual %.3g)" % residual)
    if d:
        lhs = np.einsum('kl,ijl->ijk', s, sc.c)
        rhs = np.einsum('ai,bj,abk->ijk', s, s, sc.c)
        residual = float(np.max(np.abs(lhs - rhs)))
        if residual > 1e-9:
            raise NotAutomorphism("sigma does not preserve brackets (residual %.3g)" % residual)
    if d and np.max(np.abs(q - q.T)) > 1e-10:
        raise InnerNotInvariant("inner product is not symmetric")
    try:
        lower = linalg.cholesky(q, lower=True) if d else np.zeros((0, 0))
    except linalg.LinAlgError:
        raise InnerNotInvariant("inner product is not positive definite")
    for i, ad in enumerate(sc.ad_basis()):
        residual = float(np.max(np.abs(ad.T @ q + q @ ad)))
        if residual > 1e-9 * max(1.0, float(np.max(np.abs(q)))):
            raise InnerNotInvariant(
                "inner product is not ad-invariant along basis element %d (residual %.3g)"
                % (i, residual))

    t = linalg.inv(lower).T if d else np.zeros((0, 0))
    sc_int = sc.change_basis(t) if d else sc
    s_int = linalg.solve(t, s @ t) if d else s
    k_space = nullspace(s_int - np.eye(d), policy)
    p_space = nullspace(s_int + np.eye(d), policy)
    if k_space.dim + p_space.dim != d:
        raise BadGrading("eigenspaces have dimensions %d + %d != %d"
                         % (k_space.dim, p_space.dim, d))
    for name, a, b, target in (('[k,k] in k', k_space, k_space, k_space),
                               ('[k,p] in p', k_space, p_space, p_space),
                               ('[p,p] in k', p_space, p_space, k_space)):
        residual = _bracket_residual(sc_int, a, b, target)
        if residual > policy.containment_tol:
            raise BadGrading("%s fails (residual %.3g)" % (name, residual))

    emb = None
    if embedding is not None:
        emb = np.asarray(embedding, dtype=float)
        if emb.ndim != 3 or emb.shape[0] != d or emb.shape[1] != emb.shape[2]:
            raise SymPairError("embedding must have shape (%d, m, m)" % d)
        emb = np.einsum('ia,ijk->ajk', t, emb)
        for a in range(d):
            for b in range(a + 1, d):
                lhs = np.einsum('k,kij->ij', sc_int.c[a, b], emb)
                rhs = emb[a] @ emb[b] - emb[b] @ emb[a]
                residual = float(np.max(np.abs(lhs - rhs)))
                if residual > policy.containment_tol * max(1.0, float(np.max(np.abs(rhs)))):
                    raise SymPairError(
                        "embedding does not preserve the bracket of %d and %d" % (a, b))
        emb.setflags(write=False)
    logger.debug('Cartan decomposition: dim k = %d, dim p = %d', k_space.dim, p_space.dim)
    return SymPair(sc_int, q, s_int, k_space, p_space, t, emb, policy)


@dataclasses.dataclass(frozen=True, eq=False)
class TripleSystem:
    pair: SymPair
    m: Subspace
    bracket_span: Subspace
    s_alg: Subspace


def triple_system(pair, m_basis):
    """Lie triple system spanned by the user-coordinate columns of m_basis."""
    tol = pair.policy.containment_tol
    m = pair.subspace(m_basis)
    residual = pair.p_space.residual(m.basis) if m.dim else 0.0
    if residual > tol:
        raise NotTriple("m is not contained in p", residual)
    bracket_span = orthonormal_basis(_brackets(pair.sc, m.basis, m.basis), pair.policy, pair.d)
    residual = pair.k_space.residual(bracket_span.basis) if bracket_span.dim else 0.0
    if residual > tol:
        raise NotTriple("[m,m] is not contained in k", residual)
    residual = _bracket_residual(pair.sc, bracket_span, m, m)
    if residual > tol:
        raise NotTriple("[[m,m],m] is not contained in m", residual)
    s_alg = subspace_sum(bracket_span, m, pair.policy)
    residual = _bracket_residual(pair.sc, s_alg, s_alg, s_alg)
    if residual > tol:
        raise NotTriple("[m,m] + m is not a subalgebra", residual)
    return TripleSystem(pair, m, bracket_span, s_alg)


def ksection_copolarity(ts):
    return ts.bracket_span.dim


def ksection_report(ts):
    report = Report('triple_system')
    copol = ksection_copolarity(ts)
    report.add(equality('section_dimension', ts.s_alg.dim, copol + ts.m.dim))
    report.values.update(copolarity=copol, m_dim=ts.m.dim, s_dim=ts.s_alg.dim,
                         bracket_dim=ts.bracket_span.dim,
                         polar=copol == 0)
    return report


def lifted_copolarity_bound(ts, base_copolarity):
    """Upper bound copol(H, G/K) + dim [m, m] for the lifted copolarity."""
    return int(base_copolarity) + ts.bracket_span.dim


def _as_internal_subspace(pair, h_alg):
    if isinstance(h_alg, Subspace):
        return h_alg
    h = np.asarray(h_alg, dtype=float)
    if h.size == 0:
        return Subspace.zero(pair.d)
    return pair.subspace(h.reshape(pair.d, -1))


def _check_group_element(pair, g_elt):
    g = as_square(g_elt, 'group element')
    m = pair.embedding.shape[1]
    if g.shape != (m, m):
        raise NotInGroup("group element must be %d x %d" % (m, m))
    residual = float(np.max(np.abs(g.T @ g - np.eye(m))))
    if residual > 1e-9:
        raise NotInGroup("group element is not orthogonal (residual %.3g)" % residual)
    if linalg.det(g) <= 0:
        raise NotInGroup("group element has non-positive determinant")
    return g


def adjoint_inverse(pair, g):
    """Matrix of Ad_{g^-1} on internal coordinates, with the fit residual."""
    flat = pair.embedding.reshape(pair.d, -1).T
    images = np.column_stack([(g.T @ e @ g).ravel() for e in pair.embedding])
    coeffs = linalg.lstsq(flat, images)[0]
    residual = float(np.max(np.linalg.norm(images - flat @ coeffs, axis=0))) if pair.d else 0.0
    return coeffs, residual


@dataclasses.dataclass(frozen=True, eq=False)
class HKOrbitSpaces:
    tangent: Subspace
    normal: Subspace
    orthogonality: float
    lifted_isotropy_dim: int
    intersection_dim: int

    def report(self, d):
        report = Report('hk_orbit')
        report.add(within('tangent_normal_orthogonal', self.orthogonality, 1e-10))
        report.add(equality('dimension_sum', self.tangent.dim + self.normal.dim, d))
        report.add(equality('isotropy_isomorphism', self.lifted_isotropy_dim,
                            self.intersection_dim))
        report.values.update(tangent_dim=self.tangent.dim, normal_dim=self.normal.dim,
                             isotropy_dim=self.lifted_isotropy_dim)
        return report


def hk_orbit_spaces(pair, h_alg, g_elt):
    """Tangent space h g + g k and normal space g (Ad_{g^-1}(h^perp) meet k^perp) at g."""
    if pair.embedding is None:
        raise MissingEmbedding("hk_orbit_spaces needs a matrix embedding")
    tol = pair.policy.containment_tol
    h = _as_internal_subspace(pair, h_alg)
    if _bracket_residual(pair.sc, h, h, h) > tol:
        raise SymPairError("h is not closed under the bracket")
    g = _check_group_element(pair, g_elt)
    ad_inv, residual = adjoint_inverse(pair, g)
    if residual > tol:
        raise NotInGroup("group element does not normalize the embedded algebra "
                         "(residual %.3g)" % residual)
    k = pair.k_space

    def vec_left(x):
        return (pair.embed(x) @ g).ravel()

    def vec_right(x):
        return (g @ pair.embed(x)).ravel()

    size = g.shape[0] ** 2
    cols = [vec_left(y) for y in h.basis.T] + [vec_right(z) for z in k.basis.T]
    tangent = orthonormal_basis(np.column_stack(cols) if cols else np.zeros((size, 0)),
                                pair.policy, size)
    moved_perp = orthonormal_basis(ad_inv @ complement(h).basis, pair.policy, pair.d)
    normal_alg = subspace_intersect(moved_perp, complement(k), pair.policy)
    cols = [vec_right(x) for x in normal_alg.basis.T]
    normal = orthonormal_basis(np.column_stack(cols) if cols else np.zeros((size, 0)),
                               pair.policy, size)
    orthogonality = float(np.max(np.abs(tangent.basis.T @ normal.basis))) \
        if tangent.dim and normal.dim else 0.0

    cols = [vec_left(y) for y in h.basis.T] + [-vec_right(z) for z in k.basis.T]
    lifted = nullspace(np.column_stack(cols), pair.policy).dim if cols else 0
    ad_g_k = orthonormal_basis(linalg.solve(ad_inv, k.basis), pair.policy, pair.d)
    intersection = subspace_intersect(h, ad_g_k, pair.policy).dim
    return HKOrbitSpaces(tangent, normal, orthogonality, lifted, intersection)


def hk_normalizer_dims(pair, h_alg, ts):
    """Dimensions of the normalizer of S in H x K and of its projection to H.

    The projection to H has kernel {0} x (K meet S), so its dimension is
    dim n(S) - dim(k meet s).
    """
    h = _as_internal_subspace(pair, h_alg)
    k = pair.k_space
    s = ts.s_alg
    rest = np.eye(pair.d) - s.projector()
    cols = [rest @ y for y in h.basis.T] + [-(rest @ z) for z in k.basis.T]
    n_dim = nullspace(np.column_stack(cols), pair.policy).dim if cols else 0
    projected = subspace_intersect(h, subspace_sum(s, k, pair.policy), pair.policy).dim
    kernel = subspace_intersect(k, s, pair.policy).dim
    report = Report('hk_normalizer')
    report.add(equality('projection_kernel', projected, n_dim - kernel))
    report.values.update(normalizer_dim=n_dim, projected_dim=projected, kernel_dim=kernel)
    return report


def tangent_formula_check(ts, x, tol=1e-7):
    """Tangent space of exp(m) at exp(2X) against exp(X) m exp(X)."""
    pair = ts.pair
    if pair.embedding is None:
        raise MissingEmbedding("tangent_formula_check needs a matrix embedding")
    xi = pair.to_internal(as_vector(x, pair.d, 'X'))
    residual = ts.m.residual(xi)
    if residual > pair.policy.containment_tol * max(1.0, float(np.linalg.norm(xi))):
        raise NotTriple("X is not in m", residual)
    ex = pair.embed(xi)
    half = linalg.expm(ex)
    size = ex.shape[0] ** 2
    left_cols = [linalg.expm_frechet(2 * ex, pair.embed(y), compute_expm=False).ravel()
                 for y in ts.m.basis.T]
    right_cols = [(half @ pair.embed(y) @ half).ravel() for y in ts.m.basis.T]
    if not left_cols:
        left = right = Subspace.zero(size)
    else:
        left = orthonormal_basis(np.column_stack(left_cols), pair.policy, size)
        right = orthonormal_basis(np.column_stack(right_cols), pair.policy, size)
    report = Report('tangent_formula')
    report.add(within('subspace_distance', subspace_distance(left, right), tol))
    report.values.update(left_dim=left.dim, right_dim=right.dim)
    return report


def odd_primes(count):
    primes = []
    for candidate in itertools.count(3, 2):
        if len(primes) == count:
            return primes
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)


@dataclasses.dataclass(frozen=True, eq=False)
class GaugeGram:
    quadrature: np.ndarray
    closed_form: np.ndarray
    discrepancy: float
    min_eigenvalue: float
    c: float
    delta: float
    primes: tuple
    quadrature_points: int

    def report(self):
        report = Report('gauge_gram')
        report.add(within('quadrature_vs_closed_form', self.discrepancy, 1e-8))
        report.add(Check('independent', self.min_eigenvalue > 0, self.min_eigenvalue, 0.0,
                         'minimum Gram eigenvalue'))
        report.values.update(n_terms=len(self.primes), primes=list(self.primes),
                             c=self.c, delta=self.delta, min_eigenvalue=self.min_eigenvalue,
                             quadrature_points=self.quadrature_points,
                             gram=self.quadrature)
        return report


def select_gauge_pair(ts, delta=12.0):
    """X, Y in m (user coordinates) with (ad_X)^2 Y = -delta^2 Y and |Y| = 1."""
    if ts.bracket_span.dim == 0:
        raise EigenRelationFails("m is abelian: the gauge family degenerates")
    pair = ts.pair
    best = None
    for x in ts.m.basis.T:
        ad = pair.sc.ad(x)
        restricted = ts.m.basis.T @ (ad @ ad) @ ts.m.basis
        values, vectors = linalg.eigh(0.5 * (restricted + restricted.T))
        if best is None or values[0] < best[0]:
            best = (values[0], x, ts.m.embed(vectors[:, 0]))
    c0, x, y = best
    if c0 >= -1e-12:
        raise EigenRelationFails("ad_X^2 has no negative eigenvalue on m")
    x = x * (delta / np.sqrt(-c0))
    return pair.to_user(x), pair.to_user(y / np.linalg.norm(y))


def gauge_gram(ts, x, y, n_terms=4, quadrature_points=64, panels=4):
    """Gram matrix of t -> exp(((1 - t)/p_i) ad_X) Y over the odd primes p_i.

    Computed by composite Gauss-Legendre quadrature of the actual flows and by
    the cosine closed form sin(w)/w, w = delta (1/p_j - 1/p_i), delta = sqrt(c).
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1, got %r" % n_terms)
    if ts.bracket_span.dim == 0:
        raise EigenRelationFails("m is abelian: the gauge family degenerates")
    pair = ts.pair
    xi = pair.to_internal(as_vector(x, pair.d, 'X'))
    yi = pair.to_internal(as_vector(y, pair.d, 'Y'))
    norm = float(np.linalg.norm(yi))
    if norm < pair.policy.abs_zero_tol:
        raise EigenRelationFails("Y is zero")
    if abs(norm - 1.0) > 1e-8:
        logger.debug('normalizing Y of norm %.6g', norm)
        yi = yi / norm
    ad = pair.sc.ad(xi)
    z = ad @ (ad @ yi)
    c = -float(np.dot(z, yi))
    residual = float(np.linalg.norm(z + c * yi))
    if c <= 1e-12 or residual > 1e-8 * max(1.0, float(np.linalg.norm(z))):
        raise EigenRelationFails(
            "(ad_X)^2 Y != -c Y with c > 0 (c = %.3g, residual %.3g)" % (c, residual))
    delta = np.sqrt(c)
    primes = tuple(odd_primes(n_terms))

    per_panel = max(1, quadrature_points // panels)
    base_nodes, base_weights = leggauss(per_panel)
    edges = np.linspace(0.0, 1.0, panels + 1)
    nodes = np.concatenate([0.5 * (b - a) * base_nodes + 0.5 * (a + b)
                            for a, b in zip(edges[:-1], edges[1:])])
    weights = np.concatenate([0.5 * (b - a) * base_weights
                              for a, b in zip(edges[:-1], edges[1:])])
    flows = np.array([[linalg.expm(((1.0 - t) / p) * ad) @ yi for t in nodes] for p in primes])
    quadrature = np.einsum('t,itk,jtk->ij', weights, flows, flows)

    inv = 1.0 / np.array(primes, dtype=float)
    omega = delta * (inv[None, :] - inv[:, None])
    closed = np.sinc(omega / np.pi)
    discrepancy = float(np.max(np.abs(quadrature - closed)))
    min_eig = float(linalg.eigvalsh(quadrature)[0])
    return GaugeGram(quadrature, closed, discrepancy, min_eig, c, float(delta), primes,
                     len(nodes))
