"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.  Errors print a
single line on stderr.
"""
import argparse
import json
import sys

import numpy as np

from . import criteria as cr
from . import experiments as ex
from .errors import InputError, NumericalError
from .io import (dumps, load_json, matrix_to_json, measurement_from_json,
                 measurement_to_json, state_from_json, state_to_json)
from .matkernel import Tolerance
from .measurement import (expectation_vector, reconstruct_general,
                          reconstruct_scm, scm, sic_check, sic_parameters)
from .qstate import local_dim
from .subasis import gell_mann_basis, structure_constants
from .uncertainty import uncertainty_bound

ENT_CRITERIA = ('C', 'gamma', 'lur', 'nf-C', 'nf-gamma')
STEER_CRITERIA = ('C', 'gamma', 'lur', 'gamma-nf')


def _floats(text):
    val = load_json(text) if text.strip().startswith(('[', '@')) else [float(v) for v in text.split(',')]
    return np.asarray(val, dtype=float)


def _tol(args):
    return Tolerance(args.eps_herm, args.eps_psd, args.eps_rank, args.eps_conv)


def _pair(args, rho):
    d = local_dim(rho)
    return (measurement_from_json(args.measurement_a, d),
            measurement_from_json(args.measurement_b, d))


# -- subcommands ---------------------------------------------------------------

def cmd_basis(args):
    B = gell_mann_basis(args.dim)
    out = {'dim': B.dim, 'pi0': matrix_to_json(B.pi0),
           'generators': [matrix_to_json(g) for g in B.generators]}
    if args.structure_constants:
        sc = structure_constants(B)
        out['f'], out['g'] = sc.f.tolist(), sc.g.tolist()
    return out


def cmd_scm(args):
    if args.sic:
        alpha, h = sic_parameters(args.dim)
    else:
        alpha, h = args.alpha, args.h
    X = scm(args.dim, alpha, h)
    out = measurement_to_json(X)
    out.update(alpha=float(alpha), h=float(h), sic_check=sic_check(X, _tol(args)))
    return out


def cmd_reconstruct(args):
    tol = _tol(args)
    X = measurement_from_json(args.measurement, args.dim)
    if args.expectations is not None:
        x = _floats(args.expectations)
    elif args.state is not None:
        x = expectation_vector(state_from_json(args.state, tol), X)
    else:
        raise InputError('reconstruct needs --expectations or --state')
    if X.family.get('name') == 'scm':
        r = reconstruct_scm(x, X, tol)
        rho, psd, mn = r.state, r.is_psd, r.min_eigenvalue
    else:
        rho = reconstruct_general(x, X, tol)
        mn = float(np.linalg.eigvalsh(rho)[0])
        psd = mn >= -tol.eps_psd
    return {'state': state_to_json(rho), 'is_psd': bool(psd), 'min_eigenvalue': mn}


def cmd_uncertainty(args):
    X = measurement_from_json(args.measurement, args.dim)
    b = uncertainty_bound(X, method=args.method, seed=args.seed)
    return {'S': b.value, 'method': b.method}


def cmd_entanglement(args):
    rho = state_from_json(args.state, _tol(args))
    eps = args.detection_eps
    if args.criterion == 'nf-C':
        return cr.normalform_criterion(rho, 'C_nf', _tol(args), eps).to_json()
    if args.criterion == 'nf-gamma':
        return cr.normalform_criterion(rho, 'gamma_nf', _tol(args), eps).to_json()
    XA, XB = _pair(args, rho)
    fn = {'C': cr.ent_criterion_C, 'gamma': cr.ent_criterion_gamma, 'lur': cr.lur_criterion}
    return fn[args.criterion](rho, XA, XB, eps=eps).to_json()


def cmd_steering(args):
    rho = state_from_json(args.state, _tol(args))
    XA, XB = _pair(args, rho)
    eps = args.detection_eps
    if args.criterion == 'C':
        return cr.steer_criterion_C(rho, XA, XB, args.orbit_search, eps=eps).to_json()
    if args.criterion == 'lur':
        return cr.steer_lur(rho, XA, XB, eps=eps).to_json()
    if args.xi == 'best':
        if args.criterion != 'gamma':
            raise InputError('--xi best applies to the gamma criterion only')
        return cr.best_xi(rho, XA, XB)[1].to_json()
    xi = _floats(args.xi)
    xi = float(xi[0]) if xi.size == 1 else xi
    if args.criterion == 'gamma':
        return cr.steer_criterion_gamma(rho, XA, XB, xi, eps=eps).to_json()
    return cr.steer_criterion_gamma_nf(rho, XA, XB, xi, eps=eps).to_json()


def cmd_witness(args):
    dim = args.dim
    rho = None
    if args.state is not None:
        rho = state_from_json(args.state, _tol(args))
        dim = local_dim(rho)
    XA = measurement_from_json(args.measurement_a, dim)
    XB = measurement_from_json(args.measurement_b, dim)
    if rho is None:
        return {'witness': matrix_to_json(cr.witness(XA, XB, args.kappa))}
    W, e = cr.optimal_witness(rho, XA, XB, args.kappa)
    return {'witness': matrix_to_json(W), 'expectation': e}


def cmd_scan(args):
    t = args.threads
    if args.experiment == 'horodecki':
        res = ex.scan_horodecki(_grid(args.t_grid), _grid(args.p_grid), threads=t,
                                bisect_iter=args.bisect_iter)
    elif args.experiment == 'random-steering':
        n = args.n_states or (ex.FIG3_FULL if args.preset == 'full' else ex.FIG3_CI)
        res = ex.scan_random_steering(n, _grid(args.xi_grid), args.seed, threads=t)
    elif args.experiment == 'werner':
        res = ex.werner_thresholds(_grid(args.delta_grid), threads=t)
    elif args.experiment == 'isotropic':
        d_list = [int(v) for v in _floats(args.d_list)] if args.d_list else (2, 3, 4)
        res = ex.isotropic_thresholds(d_list, threads=t)
    else:
        res = ex.ppt_agreement(args.n_states or 1000, args.seed, threads=t)
    if args.svg:
        with open(args.svg, 'w') as fh:
            fh.write(res.to_svg())
    return res


def _grid(text):
    if text is None:
        return None
    if ':' in text:
        lo, hi, n = text.split(':')
        return np.linspace(float(lo), float(hi), int(n))
    return _floats(text)


# -- output --------------------------------------------------------------------

def _format(result, fmt):
    if isinstance(result, ex.ScanResult):
        if fmt == 'csv':
            return result.to_csv()
        if fmt == 'table':
            w = max(len(c) for c in result.columns) + 2
            lines = [''.join(c.rjust(max(w, 24)) for c in result.columns)]
            lines += [''.join(('%.10g' % v).rjust(max(w, 24)) for v in r) for r in result.rows]
            lines += [f'{k}: {v}' for k, v in result.summary.items()]
            return '\n'.join(lines) + '\n'
        return dumps(result.to_json()) + '\n'
    if fmt == 'csv':
        flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
        return ','.join(flat) + '\n' + ','.join(
            '%.17g' % v if isinstance(v, float) else str(v) for v in flat.values()) + '\n'
    if fmt == 'table':
        return ''.join(f'{k}: {json.dumps(v, default=str) if isinstance(v, (dict, list)) else v}\n'
                       for k, v in result.items())
    return dumps(result) + '\n'


GLOBAL_DEFAULTS = dict(seed=0, threads=None, output=None, format='json', eps_herm=1e-10,
                       eps_psd=1e-10, eps_rank=1e-10, eps_conv=1e-12, detection_eps=cr.DETECTION_EPS)


def _add_globals(parser, suppress):
    """Global options; subcommands accept them too (SUPPRESS keeps earlier values)."""
    g = parser.add_argument_group('global options')
    kw = {'default': argparse.SUPPRESS} if suppress else {}
    g.add_argument('--seed', type=int, help='master random seed (default 0)', **kw)
    g.add_argument('--threads', type=int, help='worker threads (default QORRELATE_THREADS or all cores)', **kw)
    g.add_argument('--output', help='write output to this file (default stdout)', **kw)
    g.add_argument('--format', choices=('json', 'csv', 'table'), help='output format (default json)', **kw)
    g.add_argument('--eps-herm', type=float, help='Hermiticity tolerance (default 1e-10)', **kw)
    g.add_argument('--eps-psd', type=float, help='positivity tolerance (default 1e-10)', **kw)
    g.add_argument('--eps-rank', type=float, help='relative rank cutoff (default 1e-10)', **kw)
    g.add_argument('--eps-conv', type=float, help='normal-form convergence tolerance (default 1e-12)', **kw)
    g.add_argument('--detection-eps', type=float, help='margin needed to report detection (default 1e-9)', **kw)


def build_parser():
    p = argparse.ArgumentParser(prog='qorrelate',
                                formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                description='Entanglement and steering criteria from correlation matrices.')
    _add_globals(p, suppress=False)
    p.set_defaults(**GLOBAL_DEFAULTS)
    sub = p.add_subparsers(dest='command', required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        _add_globals(sp, suppress=True)
        sp.set_defaults(func=fn)
        return sp

    sp = add('basis', cmd_basis, 'generalized Gell-Mann basis')
    sp.add_argument('--dim', type=int, required=True)
    sp.add_argument('--structure-constants', action='store_true', help='include f and g tensors')

    sp = add('scm', cmd_scm, 'symmetric complete measurement')
    sp.add_argument('--dim', type=int, required=True)
    sp.add_argument('--alpha', type=float, default=1.0)
    sp.add_argument('--h', type=float, default=0.0)
    sp.add_argument('--sic', action='store_true', help='use SIC-POVM parameters')

    sp = add('reconstruct', cmd_reconstruct, 'state from expectation values')
    sp.add_argument('--measurement', required=True, help='measurement JSON, @file or preset name')
    sp.add_argument('--dim', type=int, default=2, help='dimension for presets that need one')
    sp.add_argument('--expectations', help='comma list or JSON array')
    sp.add_argument('--state', help='state JSON to generate expectations from')

    sp = add('uncertainty-bound', cmd_uncertainty, 'state-independent variance-sum bound')
    sp.add_argument('--measurement', required=True)
    sp.add_argument('--dim', type=int, default=2)
    sp.add_argument('--method', choices=('auto', 'numeric'), default='auto')

    for name, fn, crits, default in (('check-entanglement', cmd_entanglement, ENT_CRITERIA, 'C'),
                                     ('check-steering', cmd_steering, STEER_CRITERIA, 'C')):
        sp = add(name, fn, f'{name.split("-")[1]} criteria')
        sp.add_argument('--state', required=True, help='state JSON or @file')
        sp.add_argument('--criterion', choices=crits, default=default)
        sp.add_argument('--measurement-a', default='om')
        sp.add_argument('--measurement-b', default='om')
        if fn is cmd_steering:
            sp.add_argument('--xi', default='1', help='scalar, comma list, JSON array, or "best"')
            sp.add_argument('--orbit-search', action='store_true')

    sp = add('witness', cmd_witness, 'entanglement witness (optimal when --state is given)')
    sp.add_argument('--measurement-a', default='om')
    sp.add_argument('--measurement-b', default='om')
    sp.add_argument('--dim', type=int, default=2)
    sp.add_argument('--state')
    sp.add_argument('--kappa', type=float, help='bound constant (default kappa_A * kappa_B)')

    sp = add('scan', cmd_scan, 'reproduce the worked examples')
    sp.add_argument('experiment', choices=('horodecki', 'random-steering', 'werner',
                                           'isotropic', 'ppt-agreement'))
    sp.add_argument('--t-grid', help='lo:hi:n or list')
    sp.add_argument('--p-grid', help='lo:hi:n or list (default 0.99:1:50)')
    sp.add_argument('--xi-grid')
    sp.add_argument('--delta-grid')
    sp.add_argument('--d-list')
    sp.add_argument('--n-states', type=int)
    sp.add_argument('--preset', choices=('ci', 'full'), default='ci',
                    help='random-steering sample size: ci=10000, full=50000')
    sp.add_argument('--bisect-iter', type=int, default=30)
    sp.add_argument('--svg', help='also write an SVG chart of the curves')
    return p


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _format(args.func(args), args.format)
        if args.output:
            with open(args.output, 'w') as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (InputError, ValueError, KeyError, OSError) as exc:
        print(f'error: {type(exc).__name__}: {exc}', file=sys.stderr)
        return 2
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f'error: {type(exc).__name__}: {exc}', file=sys.stderr)
        return 3
    return 0


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
