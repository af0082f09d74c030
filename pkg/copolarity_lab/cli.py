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
"""Batch command line: load a document, run one pipeline, write a JSON report.

Exit codes: 0 when every check passes, 2 when a check fails, 3 on input
errors.
"""

import argparse
import dataclasses
import json
import logging
import os
import sys
import tempfile

import numpy as np
from scipy import linalg

from copolarity_lab_lib import get_version, set_up_logging
from copolarity_lab_lib.labconfig import ProfileNotFound, read_profile

from . import orbits, resolution, sections, symmpair
from . liealg import LieAlgebraError
from . numkernel import DEFAULT_POLICY, KernelError, containment_residual, subspace_intersect
from . reports import Check, Report, within
from . schema import LinearRepInput, SchemaError, SymPairInput, load_document

logger = logging.getLogger('copolarity_lab')

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_INPUT_ERROR = 3

INPUT_ERRORS = (SchemaError, LieAlgebraError, KernelError, symmpair.SymPairError,
                resolution.TripleDatumError, OSError, UnicodeDecodeError)
PIPELINE_ERRORS = (sections.SectionError, orbits.OrbitError, resolution.ResolutionError)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    output_path: str
    seed: int = 0
    samples: int = 200
    trials: int = 100
    budget: int = 16
    quadrature_points: int = 64
    policy: object = DEFAULT_POLICY

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError("unknown command %r" % self.command)
        if not self.input_path or not self.output_path:
            raise ValueError("input and output paths must be non-empty")
        for name in ('samples', 'trials', 'budget', 'quadrature_points'):
            if getattr(self, name) < 1:
                raise ValueError("%s must be >= 1, got %r" % (name, getattr(self, name)))

    def as_dict(self):
        return {
            'command': self.command,
            'seed': self.seed,
            'samples': self.samples,
            'trials': self.trials,
            'budget': self.budget,
            'quadrature_points': self.quadrature_points,
            'tolerances': self.policy.as_dict(),
        }


def _require_kind(payload, expected, command):
    if not isinstance(payload, expected):
        raise SchemaError('kind', '%s does not accept this kind of document' % command)
    return payload


def _section(inp, config):
    """User-supplied section anchored at a regular point, or the canonical one."""
    rep = inp.rep
    if inp.section is not None:
        certificate, _ = orbits.principal_certificate(rep, config.trials, config.seed)
        ctx = sections.regular_point_in(rep, inp.section, certificate, config.seed)
        return sections.SectionCandidate.user_supplied(inp.section, ctx)
    ctx = orbits.find_regular(rep, config.trials, config.seed)
    return sections.canonical_section(rep, ctx, config.budget, config.seed)


def run_analyze(payload, config):
    inp = _require_kind(payload, LinearRepInput, 'analyze')
    rep = inp.rep
    ctx = orbits.find_regular(rep, config.trials, config.seed)
    srep = orbits.slice_rep(rep, ctx)
    report = Report('analyze')
    report.add(Check('tangent_plus_normal', ctx.orbit_dim + ctx.normal.dim == rep.ambient_dim,
                     0.0, 0.0))
    report.add(Check('isotropy_rank_nullity', ctx.orbit_dim + ctx.isotropy_alg.dim == rep.dim,
                     0.0, 0.0))
    report.values.update(ambient_dim=rep.ambient_dim, algebra_dim=rep.dim,
                         discrete_elements=len(rep.discrete_elements),
                         principal_orbit_dim=ctx.orbit_dim,
                         cohomogeneity=rep.ambient_dim - ctx.orbit_dim,
                         principal_isotropy_dim=ctx.isotropy_alg.dim,
                         slice_algebra_dim=srep.dim, anchor=ctx.p)
    return [report]


def _copolarity_report(rep, cand, red):
    ctx = cand.anchor
    copol = sections.copolarity(rep, cand, ctx)
    cohom = rep.ambient_dim - ctx.certificate.principal_dim
    informational = cand.source != sections.CANONICAL
    report = Report('copolarity')
    report.add(within('normal_space_in_section',
                      cand.sigma.residual(ctx.normal.basis) if ctx.normal.dim else 0.0,
                      rep.policy.containment_tol))
    report.add(Check('weyl_dimension_identity', red.weyl_dim == copol,
                     float(abs(red.weyl_dim - copol)), 0.0,
                     'weyl_dim %d, copolarity %d' % (red.weyl_dim, copol),
                     informational=informational))
    report.add(Check('section_dimension_identity', cand.sigma.dim == cohom + copol,
                     float(abs(cand.sigma.dim - cohom - copol)), 0.0,
                     'dim sigma %d, cohomogeneity %d' % (cand.sigma.dim, cohom),
                     informational=informational))
    report.values.update(copolarity=copol, weyl_dim=red.weyl_dim, sigma_dim=cand.sigma.dim,
                         ambient_dim=rep.ambient_dim, cohomogeneity=cohom,
                         principal_orbit_dim=ctx.certificate.principal_dim,
                         section_source=cand.source, discrete_used=cand.discrete_used,
                         weyl_representatives=red.representatives,
                         polar=copol == 0, trivial=cand.sigma.dim == rep.ambient_dim)
    return report


def run_copolarity(payload, config):
    inp = _require_kind(payload, LinearRepInput, 'copolarity')
    cand = _section(inp, config)
    red = sections.reduction(inp.rep, cand, config.budget, config.seed)
    return [_copolarity_report(inp.rep, cand, red)]


def run_reduce(payload, config):
    inp = _require_kind(payload, LinearRepInput, 'reduce')
    rep = inp.rep
    cand = _section(inp, config)
    red = sections.reduction(rep, cand, config.budget, config.seed)
    few = min(config.samples, 10)
    reports = [
        _copolarity_report(rep, cand, red),
        sections.stability_check(rep, red, config.trials, config.seed),
        sections.regularity_equivalence(rep, red, min(config.samples, 100), config.seed,
                                        config.trials),
        sections.centralizer_check(rep, red, few, config.seed, config.trials),
        sections.weyl_relation_check(rep, red, few, config.seed, config.budget),
    ]
    reports[0].values.update(reduced_ambient_dim=red.reduced_rep.ambient_dim,
                             reduced_algebra_dim=red.reduced_rep.dim,
                             normalizer_dim=red.normalizer_alg.dim,
                             centralizer_dim=red.centralizer_alg.dim)
    return reports


def _default_slice_points(sigma, seed, count=3):
    """The origin plus points of sigma with half their coordinates zeroed."""
    rng = np.random.default_rng(seed)
    mask = np.arange(sigma.dim) % 2 == 0
    return [np.zeros(sigma.ambient_dim)] + [
        sigma.embed(rng.standard_normal(sigma.dim) * mask) for _ in range(count)]


def run_slice(payload, config):
    inp = _require_kind(payload, LinearRepInput, 'slice')
    cand = _section(inp, config)
    for i, q in enumerate(inp.points):
        residual = containment_residual(cand.sigma, q)
        if residual > inp.rep.policy.containment_tol * max(1.0, float(np.linalg.norm(q))):
            raise SchemaError('points[%d]' % i, 'not in the section (residual %.3g)' % residual)
    points = list(inp.points) or _default_slice_points(cand.sigma, config.seed)
    return [sections.slice_inequality(inp.rep, cand, points, config.trials, config.seed)]


def killing_jacobi_field(rep, ctx, v, coeffs):
    """(a, b) = (X p, X v): the Killing field of X along t -> p + t v."""
    x = rep.algebra_element(coeffs)
    return x @ ctx.p, x @ v


def jacobi_report(rep, sigma, ctx, samples=10, seed=0, tol=1e-8):
    report = Report('jacobi_split')
    directions = subspace_intersect(ctx.normal, sigma, rep.policy)
    if directions.dim == 0 or rep.dim == 0:
        report.values.update(fields=0)
        return report
    rng = np.random.default_rng(seed)
    worst = {}
    for _ in range(samples):
        v = directions.embed(rng.standard_normal(directions.dim))
        v /= np.linalg.norm(v)
        a, b = killing_jacobi_field(rep, ctx, v, rng.standard_normal(rep.dim))
        triple = orbits.jacobi_split(rep, sigma, ctx, v, a, b)
        for name, value in triple.residuals.items():
            worst[name] = max(worst.get(name, 0.0), value)
    for name in sorted(worst):
        report.add(within(name, worst[name], tol))
    report.values.update(fields=samples, seed=seed)
    return report


def run_verify(payload, config):
    inp = _require_kind(payload, LinearRepInput, 'verify')
    rep = inp.rep
    cand = _section(inp, config)
    return [
        sections.verify_axioms(rep, cand, config.samples, config.seed, min(config.budget, 8),
                               config.trials),
        sections.check_totally_geodesic(rep, cand, cand.anchor),
        jacobi_report(rep, cand.sigma, cand.anchor, min(config.samples, 10), config.seed),
    ]


def _triple(inp):
    pair = inp.pair
    if inp.m_basis is not None:
        return symmpair.triple_system(pair, inp.m_basis)
    return symmpair.triple_system(pair, pair.to_user(pair.p_space.basis))


def run_sympair(payload, config):
    inp = _require_kind(payload, SymPairInput, 'sympair')
    pair = inp.pair
    ts = _triple(inp)
    report = symmpair.ksection_report(ts)
    report.values.update(algebra_dim=pair.d, k_dim=pair.k_space.dim, p_dim=pair.p_space.dim)
    reports = [report, symmpair.hk_normalizer_dims(pair, pair.k_space, ts)]
    if pair.embedding is not None:
        rng = np.random.default_rng(config.seed)
        if ts.m.dim:
            x = pair.to_user(0.7 * ts.m.basis[:, 0])
            reports.append(symmpair.tangent_formula_check(ts, x))
        g = linalg.expm(pair.embed(rng.standard_normal(pair.d)))
        spaces = symmpair.hk_orbit_spaces(pair, pair.k_space, g)
        reports.append(spaces.report(pair.d))
    return reports


def run_gauge(payload, config):
    inp = _require_kind(payload, SymPairInput, 'gauge')
    ts = _triple(inp)
    if ts.bracket_span.dim == 0:
        report = Report('gauge_gram')
        report.add(Check('non_abelian', False, 0.0, 0.0,
                         'm is abelian: the action is hyperpolar and the gauge family degenerates'))
        return [report]
    x, y = symmpair.select_gauge_pair(ts)
    gram = symmpair.gauge_gram(ts, x, y, 4, config.quadrature_points)
    return [gram.report()]


def run_resolution(payload, config):
    if isinstance(payload, resolution.TripleDatum):
        sol = resolution.gw_metric(payload, strict=False)
        report = Report('gw_metric')
        report.add(Check('feasible', sol.feasible, sol.min_eig, 0.0,
                         'positive-definite solution found' if sol.feasible
                         else 'no positive-definite solution found'))
        report.add(within('skew_residual', sol.skew_residual, 1e-8))
        report.values.update(quotient_dim=payload.quotient_dim, solution_dim=sol.solution_dim,
                             min_eigenvalue=sol.min_eig, metric=sol.s_matrix,
                             iterations=sol.iterations)
        reports = [report]
        if sol.feasible:
            reports.append(resolution.metric_isometry_check(payload, sol))
            reports.append(resolution.metric_group_check(payload, sol, 50, config.seed))
        return reports
    inp = _require_kind(payload, LinearRepInput, 'resolution')
    rep = inp.rep
    cand = _section(inp, config)
    red = sections.reduction(rep, cand, config.budget, config.seed)
    rng = np.random.default_rng(config.seed)
    count = min(config.samples, 50)
    points = [np.zeros(rep.ambient_dim)] + [red.sigma.embed(rng.standard_normal(red.sigma.dim))
                                            for _ in range(count - 1)]
    suite = resolution.local_diffeo_suite(rep, red, points)
    suite.values.update(origin_resolved_isotropy=resolution.resolution_isotropy(
        rep, red, points[0]))
    audit = resolution.dimension_audit(rep, red, min(config.samples, 5), config.trials,
                                       config.seed)
    return [suite, audit]


COMMANDS = {
    'analyze': run_analyze,
    'copolarity': run_copolarity,
    'reduce': run_reduce,
    'slice': run_slice,
    'sympair': run_sympair,
    'resolution': run_resolution,
    'gauge': run_gauge,
    'verify': run_verify,
}


def write_report(path, document):
    """Write JSON atomically: a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    handle = tempfile.NamedTemporaryFile('w', encoding='utf-8', dir=directory,
                                         suffix='.tmp', delete=False)
    try:
        with handle:
            json.dump(document, handle, sort_keys=True, indent=2)
            handle.write('\n')
        os.replace(handle.name, path)
    except BaseException:
        os.unlink(handle.name)
        raise


def run(config):
    """Execute one command and write its report; returns the exit code."""
    document = {
        'version': get_version(),
        'config': config.as_dict(),
        'input': {'path': config.input_path},
    }
    try:
        doc = load_document(config.input_path, config.policy)
        document['input']['digest'] = doc.digest
        document['input']['kind'] = doc.kind
        reports = COMMANDS[config.command](doc.payload, config)
    except INPUT_ERRORS as error:
        logger.error('%s', error)
        document.update(verdict='input_error', exit_code=EXIT_INPUT_ERROR, error=str(error))
        if isinstance(error, SchemaError):
            document['error_field'] = error.field
        _write_quietly(config.output_path, document)
        return EXIT_INPUT_ERROR
    except PIPELINE_ERRORS as error:
        logger.warning('%s', error)
        failed = Report(config.command)
        failed.add(Check('pipeline', False, note=str(error)))
        reports = [failed]

    passed = all(r.passed for r in reports)
    for r in reports:
        for check in r.failures():
            logger.warning('check %s.%s failed (residual %.3g, tolerance %.3g)',
                           r.name, check.name, check.residual, check.tolerance)
    code = EXIT_OK if passed else EXIT_CHECK_FAILED
    document.update(reports=[r.as_dict() for r in reports],
                    verdict='pass' if passed else 'fail', exit_code=code)
    try:
        write_report(config.output_path, document)
    except OSError as error:
        logger.error('could not write report: %s', error)
        return EXIT_INPUT_ERROR
    return code


def _write_quietly(path, document):
    try:
        write_report(path, document)
    except OSError as error:
        logger.error('could not write report: %s', error)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


class Application:
    """Command-line front door."""

    def __init__(self):
        self.options = None
        self.config = None

    def do_command_line(self, argv):
        """Support for command line options"""
        parser = _Parser(prog='copolarity-lab',
                         description='Numerical copolarity analysis of isometric actions.')
        parser.add_argument('command', choices=sorted(COMMANDS))
        parser.add_argument('-i', '--input', required=True, dest='input_path',
                            help='JSON document to analyze')
        parser.add_argument('-o', '--output', dest='output_path',
                            help='report path (default: <input>.<command>.json)')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--profile', default='default',
                            help='tolerance profile name or ini path')
        parser.add_argument('--samples', type=int)
        parser.add_argument('--trials', type=int)
        parser.add_argument('--budget', type=int)
        parser.add_argument('--quadrature-points', type=int, dest='quadrature_points')
        parser.add_argument('--rel-rank-tol', type=float, dest='rel_rank_tol')
        parser.add_argument('--abs-zero-tol', type=float, dest='abs_zero_tol')
        parser.add_argument('--containment-tol', type=float, dest='containment_tol')
        parser.add_argument(
            "-v", "--verbose", action="count", dest="verbose",
            help="Show debug messages (-vv debugs copolarity_lab_lib also)")
        self.options = parser.parse_args(argv)

        set_up_logging(self.options)

        opts = self.options
        profile = read_profile(opts.profile)

        def pick(name):
            value = getattr(opts, name)
            return profile[name] if value is None else value

        policy = DEFAULT_POLICY.with_overrides(
            **{name: pick(name) for name in ('rel_rank_tol', 'abs_zero_tol', 'containment_tol')})
        output = opts.output_path or '%s.%s.json' % (
            os.path.splitext(os.path.basename(opts.input_path))[0], opts.command)
        self.config = RunConfig(opts.command, opts.input_path, output, opts.seed,
                                pick('samples'), pick('trials'), pick('budget'),
                                pick('quadrature_points'), policy)
        return 0

    def run(self, argv=None):
        argv = sys.argv[1:] if argv is None else argv
        try:
            self.do_command_line(argv)
        except (UsageError, ProfileNotFound, ValueError) as error:
            sys.stderr.write('copolarity-lab: %s\n' % error)
            return EXIT_INPUT_ERROR
        logger.debug('running %s on %s', self.config.command, self.config.input_path)
        return run(self.config)
