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
import json
import tempfile
import unittest
sys.path.insert(0, os.path.realpath(os.path.join(os.path.dirname(__file__), "..")))

from copolarity_lab import cli
from copolarity_lab_lib import labconfig


def rep_file(name):
    return labconfig.get_data_file('reps', name)


class TestCommandLine(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def run_command(self, command, name, *extra):
        output = os.path.join(self.tmp.name, '%s.%s.json' % (name, command))
        code = cli.Application().run(
            [command, '-i', rep_file(name), '-o', output, '--profile', 'quick'] + list(extra))
        with open(output, encoding='utf-8') as handle:
            return code, json.load(handle)

    def report(self, document, name):
        return next(r for r in document['reports'] if r['name'] == name)

    def test_copolarity_of_two_frames(self):
        code, document = self.run_command('copolarity', 'so4_2copies.json')
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(document['verdict'], 'pass')
        values = self.report(document, 'copolarity')['values']
        self.assertEqual(values['copolarity'], 1)
        self.assertEqual(values['weyl_dim'], 1)
        self.assertEqual(values['sigma_dim'], 4)
        self.assertEqual(document['input']['kind'], 'linear_rep')
        self.assertTrue(document['input']['digest'].startswith('sha256:'))

    def test_trivial_action(self):
        code, document = self.run_command('copolarity', 'trivial_r3.json')
        self.assertEqual(code, cli.EXIT_OK)
        values = self.report(document, 'copolarity')['values']
        self.assertEqual(values['copolarity'], 0)
        self.assertEqual(values['sigma_dim'], 3)
        self.assertTrue(values['trivial'])

    def test_analyze(self):
        code, document = self.run_command('analyze', 'so3_r3.json')
        self.assertEqual(code, cli.EXIT_OK)
        values = self.report(document, 'analyze')['values']
        self.assertEqual(values['principal_orbit_dim'], 2)
        self.assertEqual(values['cohomogeneity'], 1)

    def test_reduce(self):
        code, document = self.run_command('reduce', 'so4_2copies.json')
        self.assertEqual(code, cli.EXIT_OK)
        values = self.report(document, 'copolarity')['values']
        self.assertEqual(values['copolarity'], 1)
        self.assertEqual(values['weyl_dim'], 1)
        self.assertEqual(values['reduced_ambient_dim'], 4)

    def test_slice(self):
        code, document = self.run_command('slice', 'so4_2copies.json')
        self.assertEqual(code, cli.EXIT_OK)
        report = self.report(document, 'slice_inequality')
        self.assertTrue(report['passed'])
        self.assertEqual(report['values']['copolarity'], 1)

    def test_verify(self):
        code, document = self.run_command('verify', 'so4_2copies.json')
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(document['verdict'], 'pass')

    def test_sympair(self):
        code, document = self.run_command('sympair', 'su2_pair.json')
        self.assertEqual(code, cli.EXIT_OK)
        values = self.report(document, 'triple_system')['values']
        self.assertEqual(values['bracket_dim'], 1)
        self.assertEqual(values['copolarity'], 1)
        self.assertEqual(values['m_dim'], 2)
        self.assertEqual(values['s_dim'], 3)

    def test_gauge(self):
        code, document = self.run_command('gauge', 'su2_pair.json')
        self.assertEqual(code, cli.EXIT_OK)
        values = self.report(document, 'gauge_gram')['values']
        self.assertGreater(values['min_eigenvalue'], 1e-10)

    def test_slice_point_outside_section(self):
        source = os.path.join(self.tmp.name, 'off_section.json')
        with open(rep_file('so3_r3_line.json'), encoding='utf-8') as handle:
            payload = json.load(handle)
        payload['points'] = [[2, 0, 0], [0, 1, 0]]
        with open(source, 'w', encoding='utf-8') as handle:
            json.dump(payload, handle)
        output = os.path.join(self.tmp.name, 'off_section.slice.json')
        code = cli.Application().run(['slice', '-i', source, '-o', output,
                                      '--profile', 'quick'])
        self.assertEqual(code, cli.EXIT_INPUT_ERROR)
        with open(output, encoding='utf-8') as handle:
            document = json.load(handle)
        self.assertEqual(document['verdict'], 'input_error')
        self.assertEqual(document['error_field'], 'points[1]')

    def test_unwritable_output(self):
        output = os.path.join(self.tmp.name, 'no_such_dir', 'report.json')
        code = cli.Application().run(['analyze', '-i', rep_file('so3_r3.json'),
                                      '-o', output, '--profile', 'quick'])
        self.assertEqual(code, cli.EXIT_INPUT_ERROR)
        self.assertFalse(os.path.exists(output))

    def test_malformed_generator(self):
        code, document = self.run_command('copolarity', 'malformed_generator.json')
        self.assertEqual(code, cli.EXIT_INPUT_ERROR)
        self.assertEqual(document['verdict'], 'input_error')
        self.assertEqual(document['error_field'], 'generators[1]')

    def test_wrong_kind(self):
        code, document = self.run_command('sympair', 'so3_r3.json')
        self.assertEqual(code, cli.EXIT_INPUT_ERROR)
        self.assertEqual(document['error_field'], 'kind')

    def test_deterministic(self):
        paths = []
        for i in range(2):
            output = os.path.join(self.tmp.name, 'run%d.json' % i)
            code = cli.Application().run(['copolarity', '-i', rep_file('so4_2copies.json'),
                                          '-o', output, '--profile', 'quick', '--seed', '3'])
            self.assertEqual(code, cli.EXIT_OK)
            paths.append(output)
        with open(paths[0], 'rb') as first, open(paths[1], 'rb') as second:
            self.assertEqual(first.read(), second.read())

    def test_abelian_gauge_family(self):
        code, document = self.run_command('gauge', 'su2_abelian_m.json')
        self.assertEqual(code, cli.EXIT_CHECK_FAILED)
        self.assertEqual(document['verdict'], 'fail')

    def test_rotation_subgroup_metric(self):
        code, document = self.run_command('resolution', 'so3_triple.json')
        self.assertEqual(code, cli.EXIT_OK)
        self.assertTrue(self.report(document, 'gw_metric')['passed'])
        self.assertTrue(self.report(document, 'metric_isometry')['passed'])

    def test_affine_metric_not_found(self):
        code, document = self.run_command('resolution', 'affine_line_triple.json')
        self.assertEqual(code, cli.EXIT_CHECK_FAILED)
        values = self.report(document, 'gw_metric')['values']
        self.assertEqual(values['solution_dim'], 1)

    def test_command_line_overrides(self):
        code, document = self.run_command('copolarity', 'so4_2copies.json',
                                          '--containment-tol', '1e-6', '--budget', '4')
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(document['config']['budget'], 4)
        self.assertEqual(document['config']['tolerances']['containment_tol'], 1e-6)

    def test_usage_errors(self):
        self.assertEqual(cli.Application().run(['nonsense', '-i', 'x.json']),
                         cli.EXIT_INPUT_ERROR)
        self.assertEqual(cli.Application().run(['copolarity']), cli.EXIT_INPUT_ERROR)
        self.assertEqual(cli.Application().run(
            ['copolarity', '-i', rep_file('so3_r3.json'), '--samples', '0']),
            cli.EXIT_INPUT_ERROR)
        self.assertEqual(cli.Application().run(
            ['copolarity', '-i', rep_file('so3_r3.json'), '--profile', 'missing']),
            cli.EXIT_INPUT_ERROR)

    def test_missing_input_file(self):
        output = os.path.join(self.tmp.name, 'missing.json')
        code = cli.Application().run(['analyze', '-i', os.path.join(self.tmp.name, 'nope.json'),
                                      '-o', output])
        self.assertEqual(code, cli.EXIT_INPUT_ERROR)


class TestRunConfig(unittest.TestCase):
    def test_rejects_unknown_command(self):
        with self.assertRaises(ValueError):
            cli.RunConfig('bogus', 'in.json', 'out.json')

    def test_as_dict(self):
        config = cli.RunConfig('analyze', 'in.json', 'out.json', seed=4)
        self.assertEqual(config.as_dict()['seed'], 4)
        self.assertIn('rel_rank_tol', config.as_dict()['tolerances'])


if __name__ == '__main__':
    unittest.main()
