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
import os
import os.path
import unittest
from unittest import mock
sys.path.insert(0, os.path.realpath(os.path.join(os.path.dirname(__file__), "..")))

import numpy as np

from copolarity_lab import catalog
from copolarity_lab.liealg import LieRep
from copolarity_lab.numkernel import Subspace, subspace_distance, subspace_intersect
from copolarity_lab.orbits import (
    JacobiPreconditionError, NotNormal, analyze_point, certify, distance_to_subspace,
    estimate_orbit_distance, find_regular, jacobi_split, orbit_distance, principal_certificate,
    shape_operator, slice_rep)

E1, E2, E3 = np.eye(3)
Z = np.array([[1.0, 0.3], [0.2, 0.7]])


class TestPointContext(unittest.TestCase):
    def test_sphere_orbit(self):
        rep = catalog.rotation_rep()
        ctx = analyze_point(rep, E1)
        self.assertEqual(ctx.orbit_dim, 2)
        self.assertEqual(ctx.isotropy_alg.dim, 1)
        self.assertLess(subspace_distance(ctx.normal, Subspace(3, E1[:, None])), 1e-12)

    def test_origin(self):
        rep = catalog.standard_sum(4, 2)
        ctx = analyze_point(rep, np.zeros(8))
        self.assertEqual(ctx.orbit_dim, 0)
        self.assertEqual(ctx.isotropy_alg.dim, 6)

    def test_frame_point(self):
        rep = catalog.standard_sum(4, 2)
        ctx = analyze_point(rep, catalog.frame_point(4, 2))
        self.assertEqual((ctx.orbit_dim, ctx.isotropy_alg.dim), (5, 1))
        self.assertEqual(ctx.orbit_dim + ctx.normal.dim, 8)

    def test_rank_nullity_at_random_points(self):
        rep = catalog.standard_sum(5, 2)
        rng = np.random.default_rng(4)
        for _ in range(10):
            ctx = analyze_point(rep, rng.standard_normal(10))
            self.assertEqual(ctx.orbit_dim + ctx.isotropy_alg.dim, rep.dim)


class TestRegularity(unittest.TestCase):
    def test_sphere(self):
        ctx = find_regular(catalog.rotation_rep(), 100, 0)
        self.assertTrue(ctx.regular)
        self.assertEqual(ctx.orbit_dim, 2)
        self.assertEqual(3 - ctx.orbit_dim, 1)

    def test_trivial_algebra(self):
        ctx = find_regular(catalog.trivial_rep(3), 100, 0)
        self.assertTrue(ctx.regular)
        self.assertEqual(ctx.orbit_dim, 0)

    def test_two_frames(self):
        certificate, _ = principal_certificate(catalog.standard_sum(4, 2), 100, 1)
        self.assertEqual(certificate.principal_dim, 5)
        self.assertEqual(8 - certificate.principal_dim, 3)
        self.assertEqual((certificate.samples, certificate.seed), (100, 1))

    def test_regularity_is_open(self):
        rep = catalog.standard_sum(4, 2)
        ctx = find_regular(rep, 100, 2)
        rng = np.random.default_rng(2)
        for _ in range(20):
            moved = analyze_point(rep, ctx.p + 1e-4 * rng.standard_normal(8), ctx.certificate)
            self.assertTrue(moved.regular)

    def test_singular_point_not_regular(self):
        ctx = certify(catalog.standard_sum(4, 2), catalog.frame_point(4, 2, np.diag([1.0, 0.0])))
        self.assertFalse(ctx.regular)


class TestSliceRepresentation(unittest.TestCase):
    def test_regular_point_has_trivial_slice_action(self):
        rep = catalog.standard_sum(4, 2)
        srep = slice_rep(rep, find_regular(rep, 100, 0))
        self.assertEqual(srep.ambient_dim, 3)
        self.assertEqual(srep.dim, 0)

    def test_origin_gives_the_rep(self):
        rep = catalog.rotation_rep()
        srep = slice_rep(rep, analyze_point(rep, np.zeros(3)))
        self.assertEqual((srep.ambient_dim, srep.dim), (3, 3))

    def test_first_vector_only(self):
        rep = catalog.standard_sum(4, 2)
        q = np.zeros(8)
        q[0] = 1.0
        srep = slice_rep(rep, analyze_point(rep, q))
        self.assertEqual((srep.ambient_dim, srep.dim), (5, 3))
        ctx = find_regular(srep, 100, 0)
        self.assertEqual(ctx.orbit_dim, 2)


class TestShapeOperator(unittest.TestCase):
    def test_unit_sphere(self):
        rep = catalog.rotation_rep()
        ctx = analyze_point(rep, E1)
        np.testing.assert_allclose(shape_operator(rep, ctx, E1), -np.eye(2), atol=1e-12)

    def test_zero_vector(self):
        rep = catalog.rotation_rep()
        ctx = analyze_point(rep, E1)
        np.testing.assert_allclose(shape_operator(rep, ctx, np.zeros(3)), 0.0)

    def test_rejects_tangent_vector(self):
        rep = catalog.rotation_rep()
        with self.assertRaises(NotNormal):
            shape_operator(rep, analyze_point(rep, E1), E2)

    def test_accepts_normal_and_rejects_mixed_vectors(self):
        rep = catalog.standard_sum(4, 2)
        ctx = certify(rep, catalog.frame_point(4, 2, Z))
        self.assertEqual(ctx.normal.dim, 3)
        for v in ctx.normal.basis.T:
            self.assertEqual(shape_operator(rep, ctx, v).shape, (5, 5))
        mixed = ctx.normal.basis[:, 0] + 0.5 * ctx.orbit_tangent.basis[:, 0]
        with self.assertRaises(NotNormal):
            shape_operator(rep, ctx, mixed)

    def test_symmetric(self):
        rep = catalog.standard_sum(4, 2)
        ctx = find_regular(rep, 100, 0)
        rng = np.random.default_rng(0)
        for _ in range(5):
            a = shape_operator(rep, ctx, ctx.normal.embed(rng.standard_normal(ctx.normal.dim)))
            self.assertLess(np.max(np.abs(a - a.T)), 1e-9)


class TestJacobiSplit(unittest.TestCase):
    def setUp(self):
        self.rep = catalog.standard_sum(4, 2)
        self.sigma = catalog.block_section(4, 2)
        self.ctx = certify(self.rep, catalog.frame_point(4, 2, Z))
        self.v = self.ctx.normal.basis[:, 0]

    def test_preconditions(self):
        self.assertTrue(self.ctx.regular)
        self.assertLess(self.sigma.residual(self.ctx.normal.basis), 1e-10)

    def test_pure_normal_field(self):
        b = self.ctx.normal.basis[:, 1]
        triple = jacobi_split(self.rep, self.sigma, self.ctx, self.v, np.zeros(8), b)
        np.testing.assert_allclose(triple.j0.b, b, atol=1e-12)
        np.testing.assert_allclose(triple.jd.b, 0.0, atol=1e-12)
        np.testing.assert_allclose(triple.je.b, 0.0, atol=1e-12)

    def test_pure_d_field(self):
        d_space = subspace_intersect(self.ctx.orbit_tangent, self.sigma)
        self.assertEqual(d_space.dim, 1)
        a = d_space.basis[:, 0]
        t = self.ctx.orbit_tangent.basis
        b = -t @ (shape_operator(self.rep, self.ctx, self.v) @ (t.T @ a))
        triple = jacobi_split(self.rep, self.sigma, self.ctx, self.v, a, b)
        np.testing.assert_allclose(triple.j0.b, 0.0, atol=1e-10)
        np.testing.assert_allclose(triple.je.a, 0.0, atol=1e-10)

    def test_killing_fields(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            x = self.rep.algebra_element(rng.standard_normal(self.rep.dim))
            v = self.ctx.normal.embed(rng.standard_normal(3))
            v /= np.linalg.norm(v)
            triple = jacobi_split(self.rep, self.sigma, self.ctx, v, x @ self.ctx.p, x @ v)
            for name, residual in triple.residuals.items():
                self.assertLess(residual, 1e-8, name)
            self.assertGreater(np.linalg.norm(triple.je.a), 1e-6)
            self.assertGreater(np.linalg.norm(triple.jd.a), 1e-6)

    def test_rejects_normal_initial_value(self):
        with self.assertRaises(JacobiPreconditionError):
            jacobi_split(self.rep, self.sigma, self.ctx, self.v, self.v, np.zeros(8))


class TestOrbitDistance(unittest.TestCase):
    def test_same_point(self):
        rep = catalog.rotation_rep()
        self.assertLess(orbit_distance(rep, E1, E1, 4), 1e-12)

    def test_concentric_spheres(self):
        rep = catalog.rotation_rep()
        self.assertAlmostEqual(orbit_distance(rep, E1, 2 * E2, 8), 1.0, places=8)

    def test_symmetric(self):
        rep = catalog.standard_sum(3, 2)
        rng = np.random.default_rng(9)
        p, q = rng.standard_normal(6), rng.standard_normal(6)
        self.assertLess(abs(orbit_distance(rep, p, q, 32) - orbit_distance(rep, q, p, 32)),
                        1e-6)

    def test_record(self):
        found = estimate_orbit_distance(catalog.rotation_rep(), E1, 3 * E3, 8, seed=5)
        self.assertEqual((found.restarts, found.seed, len(found.history)), (8, 5, 8))
        self.assertTrue(found.stable)
        np.testing.assert_allclose(found.element @ E1, E3, atol=1e-4)

    def test_discrete_components(self):
        rep = LieRep(1, np.zeros((0, 1, 1)), (-np.eye(1),))
        self.assertLess(orbit_distance(rep, [1.0], [-1.0], 2), 1e-12)

    def test_threads_give_the_same_minimum(self):
        rep = catalog.standard_sum(3, 2)
        rng = np.random.default_rng(1)
        p, q = rng.standard_normal(6), rng.standard_normal(6)
        serial = orbit_distance(rep, p, q, 8)
        with mock.patch.dict(os.environ, {'COPOLARITY_LAB_THREADS': '3'}):
            threaded = orbit_distance(rep, p, q, 8)
        self.assertAlmostEqual(serial, threaded, places=12)

    def test_estimate_improves_with_budget(self):
        rep = catalog.standard_sum(3, 2)
        rng = np.random.default_rng(4)
        p, q = rng.standard_normal(6), rng.standard_normal(6)
        values = [orbit_distance(rep, p, q, budget, seed=2) for budget in (1, 2, 4, 8, 16)]
        for smaller, larger in zip(values, values[1:]):
            self.assertLessEqual(larger, smaller + 1e-12)
        found = estimate_orbit_distance(rep, p, q, 16, seed=2)
        self.assertEqual(list(found.history), sorted(found.history, reverse=True))

    def test_distance_to_line(self):
        rep = catalog.rotation_rep()
        line = Subspace(3, E1[:, None])
        self.assertLess(distance_to_subspace(rep, np.ones(3), line).value, 1e-8)


if __name__ == '__main__':
    unittest.main()
