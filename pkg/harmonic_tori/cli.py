import json
import math
import sys
import traceback

import click

from . import genus_zero as g0
from .checklist import build_report
from .config import load_config
from .curves import BranchPair
from .exceptions import HarmonicToriException, NotSpectral, VerificationFailure
from .export import write_mesh_csv, write_mesh_obj
from .log import main_logger, setup_logging
from .moduli import enumerate_components, moduli_summary, parse_rational, sweep_level_set
from .verify import SUITE_NAMES, require, run_suite
from .version import VERSION

EXIT_CODES = (
    (NotSpectral, 2),
    (VerificationFailure, 3),
    (HarmonicToriException, 1),
)


class ComplexParam(click.ParamType):
    name = 'RE,IM'

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            re, im = (float(s) for s in value.split(','))
        except ValueError:
            self.fail('expected "RE,IM", got "%s"' % value, param, ctx)
        return complex(re, im)


class RationalParam(click.ParamType):
    name = 'N/M'

    def convert(self, value, param, ctx):
        try:
            return parse_rational(value)
        except HarmonicToriException as e:
            self.fail(str(e), param, ctx)


class MatrixParam(click.ParamType):
    name = 'a,b,c,d'

    def convert(self, value, param, ctx):
        try:
            a, b, c, d = (int(s) for s in value.split(','))
        except ValueError:
            self.fail('expected four integers "a,b,c,d", got "%s"' % value, param, ctx)
        return (a, b), (c, d)


class HtoriGroup(click.Group):
    def invoke(self, ctx):
        # usage errors share exit code 1 with invalid input; 2 means not spectral
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = 1
            raise


@click.group(cls=HtoriGroup)
@click.version_option(VERSION, '-V', '--version', prog_name='harmonic-tori')
def cli():
    pass


verbose_help = 'Enable verbose output.'
alpha_help = 'first branch point inside the unit disc, as "RE,IM"'
beta_help = 'second branch point inside the unit disc, as "RE,IM"'
max_den_help = 'largest denominator tried when detecting rational S and T, default 64. config key: max_den'
p_help = 'value of S as an exact rational "n/m"'
q_help = 'value of the lifted T as an exact rational "n/m"'
k_grid_help = 'number of modulus samples in [k_min, k_max], default 8. config key: k_grid'
angle_grid_help = 'number of angle samples along the span, default 16. config key: angle_grid'
span_help = 'length of the swept rescaled angle in radians; 2pi runs the deck transformation twice'
out_help = 'where to write the delimited-text mesh, relative to the out_dir config key'
mesh_help = 'also write an OBJ triangle mesh with vertices (Re alpha, Im alpha, k)'
matrix_help = 'integer matrix rows (n1, m1), (n2, m2) choosing the differentials, as "a,b,c,d"'
suite_help = 'invariant suite to run'
seed_help = 'seed for the random samplers, default 42. config key: seed'


def _exit_error(e: HarmonicToriException, verbose: bool):
    if verbose:
        tb = click.style(traceback.format_exc().strip('\n'), fg='white', dim=True)
        main_logger.warning('%s traceback:\n%s', type(e).__name__, tb)
    main_logger.error('Error: %s', e)
    sys.exit(next(code for cls, code in EXIT_CODES if isinstance(e, cls)))


def _echo_json(obj):
    click.echo(json.dumps(obj, indent=2))


@cli.command('curve-info')
@click.option('--alpha', required=True, type=ComplexParam(), help=alpha_help)
@click.option('--beta', required=True, type=ComplexParam(), help=beta_help)
@click.option('--max-den', 'max_den', type=click.INT, help=max_den_help)
@click.option('-v', '--verbose', is_flag=True, help=verbose_help)
def curve_info(**config):
    """
    Report the spectral data of the genus one curve with branch points alpha, beta.

    Prints S, the lifted T, the detected rationals and component, the closing differentials and
    a checklist of residuals. Exits 2 when S, T are not rational at the detection tolerance and 3
    when a checklist condition fails.
    """
    setup_logging(config['verbose'])
    try:
        run_config = load_config(max_den=config['max_den'])
        report = build_report(BranchPair(config['alpha'], config['beta']), run_config)
        _echo_json(report.to_dict())
        if not report.spectral:
            raise NotSpectral('S = %.17g, T = %.17g are not rational with denominator <= %d'
                              % (report.p, report.t, run_config.max_den))
        if not report.passed:
            failed = [c.code for c in report.checks if not c.passed]
            raise VerificationFailure('checklist conditions failed: %s' % ', '.join(failed))
    except HarmonicToriException as e:
        _exit_error(e, config['verbose'])


@cli.command('level-set')
@click.option('--p', 'p', required=True, type=RationalParam(), help=p_help)
@click.option('--q', 'q', required=True, type=RationalParam(), help=q_help)
@click.option('--k-grid', 'k_grid', type=click.INT, help=k_grid_help)
@click.option('--angle-grid', 'angle_grid', type=click.INT, help=angle_grid_help)
@click.option('--span', default=2 * math.pi, type=click.FLOAT, help=span_help)
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False, writable=True), help=out_help)
@click.option('--mesh', 'mesh_path', type=click.Path(dir_okay=False, writable=True), help=mesh_help)
@click.option('-v', '--verbose', is_flag=True, help=verbose_help)
def level_set(**config):
    """
    Sample the level set S = p, T = q over a (k, angle) grid and write it as a mesh.

    Each row of the grid fixes k; the free lifted angle advances uniformly in the rescaled
    angle, so a span of pi is one deck translation. Points the solver misses are written as
    nan and listed in the header.
    """
    setup_logging(config['verbose'])
    try:
        run_config = load_config(k_grid=config['k_grid'], angle_grid=config['angle_grid'])
        mesh = sweep_level_set(config['p'], config['q'], run_config.k_grid, run_config.angle_grid,
                               angle_span=config['span'], config=run_config)
        out_path = write_mesh_csv(mesh, run_config.out_dir / config['out_path'], run_config)
        if config['mesh_path']:
            write_mesh_obj(mesh, run_config.out_dir / config['mesh_path'])
    except HarmonicToriException as e:
        _exit_error(e, config['verbose'])
    else:
        if mesh.gaps:
            main_logger.warning('level set is partial: %d of %d points unsolved', len(mesh.gaps), len(mesh.records))
        main_logger.info('wrote %d points to %s', len(mesh.records), out_path)


@cli.command('enumerate')
@click.option('--p', 'p', required=True, type=RationalParam(), help=p_help)
@click.option('--max-den', 'max_den', type=click.INT, help=max_den_help)
@click.option('-v', '--verbose', is_flag=True, help=verbose_help)
def enumerate_(**config):
    """
    List the components of spectral curves with S = p and q-denominator up to max-den.

    At p = 1 the annulus fixed by negation has lifted T = 1 and is listed as Annulus(1), the
    level 0 mod Z.
    """
    setup_logging(config['verbose'])
    try:
        run_config = load_config(max_den=config['max_den'])
        if config['p'] == 1:
            main_logger.info('the negation-fixed annulus is reported as q = 1, level 0 mod Z')
        for component in enumerate_components(config['p'], run_config.max_den):
            summary = moduli_summary(component.p, component.q)
            monodromy = '-' if summary.monodromy is None else summary.monodromy
            click.echo('{:<28} l={:<4} monodromy={:<5} chi={}'.format(
                str(component), summary.l, monodromy, summary.chi_component))
    except HarmonicToriException as e:
        _exit_error(e, config['verbose'])


@cli.command('genus0')
@click.option('--alpha', required=True, type=ComplexParam(), help='branch point inside the unit disc, as "RE,IM"')
@click.option('--matrix', required=True, type=MatrixParam(), help=matrix_help)
@click.option('-v', '--verbose', is_flag=True, help=verbose_help)
def genus0(**config):
    """
    Report the homogeneous torus with spectral curve branched at alpha.
    """
    setup_logging(config['verbose'])
    try:
        run_config = load_config()
        data = g0.Genus0Data(config['alpha'], config['matrix'])
        params = g0.map_params(data.alpha)
        g0.eigenline_branch_points(params)
        lattice = g0.period_lattice(params.x)
        r1, r2 = g0.differential_scalars(data.alpha)
        if abs(r1 - g0.differential_scalars_alpha(data.alpha)) > 1e-12 or abs(r2 - r1.conjugate()) > 1e-12:
            raise VerificationFailure('differential scalars disagree with the closed form at alpha = %r' % data.alpha)
        tau = g0.conformal_type(data.matrix, params.x, normalize=True)
        energy = g0.energy(data)

        def pair(z):
            return [z.real, z.imag]

        _echo_json({
            'alpha': pair(data.alpha),
            'x': params.x,
            'delta': params.delta,
            'latitude': g0.latitude(params),
            'kappa1': pair(lattice.kappa1),
            'kappa2': pair(lattice.kappa2),
            'tau': pair(tau),
            'r1': pair(r1),
            'r2': pair(r2),
            'energy': energy,
            'abs_energy': abs(energy),
        })
    except HarmonicToriException as e:
        _exit_error(e, config['verbose'])
    else:
        if abs(energy) > run_config.energy_warning:
            main_logger.warning('energy %.6g exceeds %.6g: alpha is close to the unit circle',
                                abs(energy), run_config.energy_warning)


@cli.command('verify')
@click.option('--suite', default='all', type=click.Choice(SUITE_NAMES), help=suite_help)
@click.option('--seed', type=click.INT, help=seed_help)
@click.option('-v', '--verbose', is_flag=True, help=verbose_help)
def verify(**config):
    """
    Run the invariant suites and print the largest residual of each check.
    """
    setup_logging(config['verbose'])
    try:
        run_config = load_config(seed=config['seed'])
        results = run_suite(config['suite'], run_config)
        passed = sum(r.passed for r in results)
        main_logger.info('%d of %d checks passed (seed %d)', passed, len(results), run_config.seed)
        require(results)
    except VerificationFailure as e:
        if e.sample:
            _echo_json(e.sample)
        _exit_error(e, config['verbose'])
    except HarmonicToriException as e:
        _exit_error(e, config['verbose'])


