#!/usr/bin/python
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

import sys
import os.path
import unittest
sys.path.insert(0, os.path.realpath(os.path.join(os.path.dirname(__file__), "..")))

import numpy as np

from copolarity_lab import numkernel
from copolarity_lab.numkernel import (
    DEFAULT_POLICY, DimensionMismatch, NonFiniteEntries, Subspace, TolerancePolicy,
    commutator, complement, mat_exp, orthonormal_basis, principal_angles, rank_split,
    subspace_distance, subspace_intersect, subspace_sum)


def span(*vectors, n=3):
    return orthonormal_basis(np.column_stack(vectors), DEFAULT_POLICY, n)


E1, E2, E3 = np.eye(3)


class TestOrthonormalBasis(unittest.TestCase):
    def test_duplicate_column(self):
        sub = span(E1, E1, E2)
        self.assertEqual(sub.dim, 2)
        self.assertTrue(sub.contains(np.column_stack([E1, E2])))
        self.assertFalse(sub.contains(E3))

    def test_zero_matrix(self):
        self.assertEqual(orthonormal_basis(np.zeros((3, 2))).dim, 0)

    def test_below_tolerance(self):
        self.assertEqual(span(E1, E1 + 1e-15 * E2).dim, 1)

    def test_basis_is_orthonormal_and_read_only(self):
        sub = orthonormal_basis(np.random.default_rng(3).standard_normal((5, 3)))
        np.testing.assert_allclose(sub.basis.T @ sub.basis, np.eye(3), atol=1e-12)
        with self.assertRaises(ValueError):
            sub.basis[0, 0] = 1.0

    def test_rejects_bad_input(self):
        with self.assertRaises(NonFiniteEntries):
            orthonormal_basis(np.array([[np.nan], [0.0]]))
        with self.assertRaises(DimensionMismatch):
            orthonormal_basis(np.zeros(3))

    def test_rank_nullity(self):
        m = np.random.default_rng(0).standard_normal((4, 6))
        m[:, 5] = m[:, 0] + m[:, 1]
        column, null = rank_split(m)
        self.assertEqual(column.dim + null.dim, 6)
        self.assertEqual(column.dim, 4)
        self.assertLess(np.max(np.abs(m @ null.basis)), 1e-10)


class TestSubspaceArithmetic(unittest.TestCase):
    def test_intersection(self):
        meet = subspace_intersect(span(E1, E2), span(E2, E3))
        self.assertEqual(meet.dim, 1)
        self.assertAlmostEqual(abs(meet.basis[1, 0]), 1.0)

    def test_intersection_idempotent(self):
        v = span(E1 + E2, E3)
        self.assertLess(subspace_distance(subspace_intersect(v, v), v), 1e-12)

    def test_trivial_intersection(self):
        self.assertEqual(subspace_intersect(span(E1), span(E2)).dim, 0)

    def test_intersection_commutes(self):
        rng = np.random.default_rng(7)
        a = orthonormal_basis(rng.standard_normal((6, 4)))
        b = orthonormal_basis(rng.standard_normal((6, 4)))
        self.assertEqual(subspace_intersect(a, b).dim, 2)
        self.assertLess(subspace_distance(subspace_intersect(a, b),
                                          subspace_intersect(b, a)), 1e-8)

    def test_sum_and_complement(self):
        self.assertEqual(subspace_sum(span(E1), span(E2)).dim, 2)
        comp = complement(span(E1))
        self.assertEqual(comp.dim, 2)
        self.assertLess(subspace_distance(comp, span(E2, E3)), 1e-12)
        self.assertEqual(complement(Subspace.full(3)).dim, 0)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            subspace_intersect(span(E1), Subspace.full(2))

    def test_distance_and_angles(self):
        self.assertEqual(subspace_distance(span(E1), span(E1, E2)), 1.0)
        self.assertAlmostEqual(subspace_distance(span(E1), span(E2)), 1.0)
        angles = principal_angles(span(E1, E2), span(E2, E1 + E3))
        np.testing.assert_allclose(angles, [0.0, np.pi / 4], atol=1e-12)

    def test_module_level_helpers(self):
        sub = span(E1)
        np.testing.assert_allclose(numkernel.project(sub, E1 + E2), E1)
        self.assertAlmostEqual(numkernel.containment_residual(sub, np.column_stack([E2, E1])),
                               1.0)


class TestMatrixFunctions(unittest.TestCase):
    def test_rotation(self):
        a = np.array([[0.0, -np.pi / 2], [np.pi / 2, 0.0]])
        np.testing.assert_allclose(mat_exp(a), [[0.0, -1.0], [1.0, 0.0]], atol=1e-12)

    def test_zero_and_diagonal(self):
        np.testing.assert_allclose(mat_exp(np.zeros((3, 3))), np.eye(3))
        np.testing.assert_allclose(mat_exp(np.diag([1.0, 2.0])),
                                   np.diag([np.e, np.e ** 2]), rtol=1e-12)

    def test_commutator(self):
        e12 = np.zeros((3, 3))
        e12[0, 1], e12[1, 0] = 1.0, -1.0
        e13 = np.zeros((3, 3))
        e13[0, 2], e13[2, 0] = 1.0, -1.0
        bracket = commutator(e12, e13)
        self.assertAlmostEqual(abs(bracket[1, 2]), 1.0)
        np.testing.assert_allclose(bracket, -bracket.T)
        np.testing.assert_allclose(commutator(e12, e12), 0.0)
        np.testing.assert_allclose(commutator(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])), 0.0)


class TestTolerancePolicy(unittest.TestCase):
    def test_overrides(self):
        policy = DEFAULT_POLICY.with_overrides(rel_rank_tol=1e-6, abs_zero_tol=None)
        self.assertEqual(policy.rel_rank_tol, 1e-6)
        self.assertEqual(policy.abs_zero_tol, DEFAULT_POLICY.abs_zero_tol)

    def test_rejects_non_positive(self):
        with self.assertRaises(ValueError):
            TolerancePolicy(rel_rank_tol=0.0)
        with self.assertRaises(ValueError):
            TolerancePolicy(containment_tol=-1.0)


class TestKernelInvariants(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(17)

    def test_projectors(self):
        for k in range(7):
            sub = orthonormal_basis(self.rng.standard_normal((6, k)), DEFAULT_POLICY, 6)
            p = sub.projector()
            self.assertLess(np.max(np.abs(p @ p - p)), 1e-10)
            self.assertLess(np.max(np.abs(p - p.T)), 1e-10)

    def test_intersection_and_sum_dimensions(self):
        for shared in range(4):
            u = self.rng.standard_normal((7, 7))
            a = orthonormal_basis(u[:, :3], DEFAULT_POLICY, 7)
            b = orthonormal_basis(u[:, 3 - shared:6 - shared], DEFAULT_POLICY, 7)
            meet = subspace_intersect(a, b)
            join = subspace_sum(a, b)
            self.assertEqual(meet.dim, shared)
            self.assertEqual(meet.dim + join.dim, a.dim + b.dim)
            self.assertLess(a.residual(meet.basis), DEFAULT_POLICY.containment_tol)
            self.assertLess(b.residual(meet.basis), DEFAULT_POLICY.containment_tol)

    def test_exponential_inverse_for_skew_matrices(self):
        # spectral norm up to 10; exp of a skew matrix is orthogonal
        for _ in range(20):
            x = self.rng.standard_normal((5, 5))
            a = x - x.T
            a *= self.rng.uniform(0.1, 10.0) / np.linalg.norm(a, 2)
            residual = mat_exp(-a) @ mat_exp(a) - np.eye(5)
            self.assertLess(np.max(np.abs(residual)), 1e-10)

    def test_exponential_inverse_relative_to_conditioning(self):
        # general matrices of spectral norm 10: error relative to |e^A| |e^-A|
        for _ in range(20):
            a = self.rng.standard_normal((4, 4))
            a *= 10.0 / np.linalg.norm(a, 2)
            forward, backward = mat_exp(a), mat_exp(-a)
            scale = np.linalg.norm(forward, 2) * np.linalg.norm(backward, 2)
            residual = np.max(np.abs(backward @ forward - np.eye(4)))
            self.assertLess(residual, 1e-10 * scale)

    def test_commutator_jacobi_identity(self):
        for _ in range(20):
            a, b, c = self.rng.standard_normal((3, 5, 5))
            total = (commutator(a, commutator(b, c)) + commutator(b, commutator(c, a))
                     + commutator(c, commutator(a, b)))
            bound = 1e-12 * np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c)
            self.assertLess(np.linalg.norm(total), bound)


if __name__ == '__main__':
    unittest.main()
