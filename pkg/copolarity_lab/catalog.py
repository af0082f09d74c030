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
"""Standard examples: diagonal sums of SO(n), tori, su(2) and su(3) pairs."""

import numpy as np
from scipy import linalg

from . liealg import LieRep, StructureConstants, killing_form
from . numkernel import DEFAULT_POLICY, Subspace, nullspace, subspace_intersect
from . resolution import make_triple_datum
from . symmpair import cartan_decompose, triple_system


def so_basis(n):
    """E_ab - E_ba for a < b, in lexicographic order."""
    mats = []
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n))
            m[a, b], m[b, a] = -1.0, 1.0
            mats.append(m)
    return np.array(mats) if mats else np.zeros((0, n, n))


def reflection(n):
    r = np.eye(n)
    r[-1, -1] = -1.0
    return r


def standard_sum(n, k, with_reflection=False, policy=DEFAULT_POLICY):
    """so(n) acting diagonally on k copies of R^n.

    Coordinates are copy-major: the first n entries are the first vector.
    With ``with_reflection`` the element diag(1, ..., 1, -1) of O(n),
    applied to every copy, is supplied as a discrete element.
    """
    eye = np.eye(k)
    gens = np.array([np.kron(eye, x) for x in so_basis(n)])
    discrete = (np.kron(eye, reflection(n)),) if with_reflection else ()
    return LieRep(n * k, gens, discrete, policy)


def block_section(n, k):
    """Tuples (x_1, ..., x_k) with every x_j in span(e_1, ..., e_k)."""
    cols = []
    for j in range(k):
        for i in range(k):
            e = np.zeros(n * k)
            e[j * n + i] = 1.0
            cols.append(e)
    return Subspace(n * k, np.column_stack(cols) if cols else np.zeros((n * k, 0)))


def frame_point(n, k, z=None):
    """The point with x_j = sum_i z[i, j] e_i; z defaults to the identity."""
    z = np.eye(k) if z is None else np.asarray(z, dtype=float)
    x = np.zeros((k, n))
    x[:, :k] = z.T
    return x.ravel()


def torus_on_planes(r, policy=DEFAULT_POLICY):
    """The r-torus rotating each of r coordinate planes of R^2r."""
    gens = np.zeros((r, 2 * r, 2 * r))
    for i in range(r):
        gens[i, 2 * i, 2 * i + 1], gens[i, 2 * i + 1, 2 * i] = -1.0, 1.0
    return LieRep(2 * r, gens, policy=policy)


def trivial_rep(n, policy=DEFAULT_POLICY):
    return LieRep(n, np.zeros((0, n, n)), policy=policy)


def rotation_rep(policy=DEFAULT_POLICY):
    """so(3) on R^3."""
    return LieRep(3, so_basis(3), policy=policy)


def realify(z):
    """Real 2n x 2n matrix of a complex n x n matrix acting on R^n + i R^n."""
    z = np.asarray(z, dtype=complex)
    return np.block([[z.real, -z.imag], [z.imag, z.real]])


def structure_constants_from_matrices(mats):
    """Structure constants of a basis of matrices closed under the commutator."""
    mats = np.asarray(mats, dtype=float)
    d = mats.shape[0]
    flat = mats.reshape(d, -1).T
    c = np.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            bracket = mats[i] @ mats[j] - mats[j] @ mats[i]
            c[i, j] = linalg.lstsq(flat, bracket.ravel())[0]
    return StructureConstants.from_tensor(c)


def involution_matrix(mats, transform):
    """Matrix of the linear map X -> transform(X) on the span of ``mats``."""
    mats = np.asarray(mats, dtype=float)
    flat = mats.reshape(mats.shape[0], -1).T
    images = np.column_stack([transform(m).ravel() for m in mats])
    return linalg.lstsq(flat, images)[0]


def su2_basis():
    return [np.array([[0, 1], [-1, 0]], dtype=complex),
            np.array([[0, 1j], [1j, 0]]),
            np.array([[1j, 0], [0, -1j]])]


def su3_basis():
    """i times the Gell-Mann matrices."""
    def unit(a, b):
        m = np.zeros((3, 3), dtype=complex)
        m[a, b] = 1.0
        return m

    mats = []
    for a, b in ((0, 1), (0, 2), (1, 2)):
        mats.append(unit(a, b) - unit(b, a))
        mats.append(1j * (unit(a, b) + unit(b, a)))
    mats.append(1j * np.diag([1.0, -1.0, 0.0]))
    mats.append(1j * np.diag([1.0, 1.0, -2.0]) / np.sqrt(3.0))
    return mats


def pair_from_complex_basis(basis, conjugator, policy=DEFAULT_POLICY):
    """Symmetric pair with involution Ad(conjugator) and minus the Killing form."""
    mats = np.array([realify(z) for z in basis])
    sc = structure_constants_from_matrices(mats)
    g = realify(conjugator)
    sigma_inv = involution_matrix(mats, lambda m: g @ m @ g.T)
    return cartan_decompose(sc, -killing_form(sc), sigma_inv, mats, policy)


def su2_pair(policy=DEFAULT_POLICY):
    """su(2) with k = u(1), p = C."""
    return pair_from_complex_basis(su2_basis(), np.diag([1.0, -1.0]), policy)


def su3_pair(policy=DEFAULT_POLICY):
    """su(3) with k = s(u(1) + u(2)), p = C^2: the complex projective plane."""
    return pair_from_complex_basis(su3_basis(), np.diag([1.0, -1.0, -1.0]), policy)


def p_basis(pair):
    """User-coordinate basis of p."""
    return pair.to_user(pair.p_space.basis)


def real_form_basis(pair):
    """User-coordinate basis of p meet the real matrices.

    Complex conjugation acts on realified matrices as M -> J M J with
    J = diag(I, -I); its fixed part of p is a Lie triple system.
    """
    emb = pair.embedding
    half = emb.shape[1] // 2
    j = np.diag(np.concatenate([np.ones(half), -np.ones(half)]))
    conj = involution_matrix(emb, lambda m: j @ m @ j)
    fixed = nullspace(conj - np.eye(pair.d), pair.policy)
    m = subspace_intersect(pair.p_space, fixed, pair.policy)
    return pair.to_user(m.basis)


def real_form_triple(pair):
    return triple_system(pair, real_form_basis(pair))


def so3_structure():
    c = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i, j, k], c[j, i, k] = 1.0, -1.0
    return StructureConstants.from_tensor(c)


def so3_triple_datum(policy=DEFAULT_POLICY):
    """H = {e} inside N = SO(2) inside SO(3)."""
    return make_triple_datum(so3_structure(), [], [2], policy=policy)
