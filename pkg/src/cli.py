"""
Argument handling and the three commands behind decompose.py, verify.py and dims.py.

Results go to stdout or -o, progress lines prefixed with '# ' go to stderr.
Exit codes: 0 everything passed, 1 a check failed or the parameters violate
a constraint, 2 usage error (raised by argparse).
"""

from __future__ import print_function, division

import os
import sys
import json
from collections import OrderedDict
from fractions import Fraction

import numpy as np

from src.lattice import InvalidArgument
from src import decomp
from src.decomp import ConstraintViolation
from src import dof as dofs_module
from src.dof import ElementSpec
from src.bernstein import SimplexGeometry, SingularGeometry, reference_simplex
from src import meshglobal
from src.meshglobal import MeshError
from src.rational import format_fraction
from src.svg import render_decomposition


OUTPUT_DIR_ENV = 'GEODECOMP_OUTPUT_DIR'


def log(*args):
    print('#', *args, file=sys.stderr)


def add_element_arguments(parser):
    parser.add_argument('--family', choices=dofs_module.FAMILIES, default='smooth',
                        help='element family (default: smooth)')
    parser.add_argument('--element', choices=list(decomp.PRESETS) + ['bz'],
                        help='named element, overrides --family/-n/-k/-r (bz takes -m)')
    parser.add_argument('-n', type=int, help='dimension of the simplex')
    parser.add_argument('-k', type=int, help='polynomial degree')
    parser.add_argument('-m', type=int, help='smoothness across facets')
    parser.add_argument('-r', type=decomp.parse_r, help='smoothness vector r_0,...,r_n, e.g. 2,1,0')
    parser.add_argument('-o', '--output', help='output file path (default: stdout)')


def element_from_args(args):
    if args.element == 'bz':
        if args.m is None:
            raise InvalidArgument('--element bz needs -m')
        p = decomp.bz_parameters(args.m)
        return ElementSpec(dofs_module.SMOOTH, p['n'], p['k'], r=p['r'])
    if args.element is not None:
        return ElementSpec.from_preset(args.element)
    if args.n is None or args.k is None:
        raise InvalidArgument('need -n and -k (or --element)')
    return ElementSpec(args.family, args.n, args.k, m=args.m, r=args.r)


def output_path(path):
    if path is None:
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    return path


def write_output(text, path):
    path = output_path(path)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, 'w') as f:
        f.write(text)
    log('wrote', path)


def fail_report(e):
    report = OrderedDict([('ok', False), ('error', type(e).__name__), ('message', str(e))])
    if isinstance(e, ConstraintViolation):
        report['violations'] = e.violations
    if isinstance(e, MeshError):
        report['cells'] = e.cells
    return json.dumps(report) + '\n'


def random_coefficients(size, random):
    """ small random rationals p/q with |p| <= 9, 1 <= q <= 5 """
    p = random.randint(-9, 10, size=size)
    q = random.randint(1, 6, size=size)
    return [Fraction(int(a), int(b)) for a, b in zip(p, q)]


## decompose

def decomposition_text(d):
    lines = ['# {} n={} k={} {}'.format(d.kind, d.n, d.k, json.dumps(d.params, sort_keys=True))]
    for f, piece in d:
        nodes = ' '.join(','.join(str(x) for x in a) for a in piece)
        lines.append('{}\t{}\t{}'.format(','.join(str(i) for i in f.indices), len(piece), nodes))
    return '\n'.join(lines) + '\n'


def cmd_decompose(args):
    try:
        spec = element_from_args(args)
        d = spec.decomposition()
    except (ConstraintViolation, InvalidArgument) as e:
        log('invalid parameters:', e)
        write_output(fail_report(e), None)
        return 1
    log('decomposition:', d, 'sizes by level', d.level_sizes())

    if args.format == 'json':
        text = decomp.decomposition_to_json(d) + '\n'
    elif args.format == 'svg':
        try:
            text = render_decomposition(d)
        except InvalidArgument as e:
            write_output(fail_report(e), None)
            return 1
    else:
        text = decomposition_text(d)
    write_output(text, args.output)
    return 0


## verify

def load_geometry(path):
    with open(path) as f:
        obj = json.load(f, parse_float=Fraction)
    vertices = obj['vertices'] if isinstance(obj, dict) else obj
    return SimplexGeometry(vertices)


def cmd_verify(args):
    random = np.random.RandomState(args.seed)
    try:
        spec = element_from_args(args)
        g = load_geometry(args.geometry) if args.geometry else reference_simplex(spec.n)
        mesh = meshglobal.load_mesh(args.mesh) if args.mesh else None
    except (ConstraintViolation, InvalidArgument, SingularGeometry, MeshError) as e:
        log('invalid input:', e)
        write_output(fail_report(e), None)
        return 1
    if g.ell != spec.n or not g.is_full():
        write_output(fail_report(InvalidArgument('geometry does not match n={}'.format(spec.n))), None)
        return 1

    checks = []

    d = spec.decomposition()
    partition = decomp.verify_partition(d)
    log('partition:', 'ok' if partition.ok else 'FAILED')
    checks.append(OrderedDict([('name', 'partition'), ('ok', partition.ok),
                               ('overlaps', [[list(a), [list(f.indices) for f in fs]] for a, fs in partition.overlaps]),
                               ('missing', [list(a) for a in partition.missing])]))

    uni = dofs_module.check_unisolvence(spec, g, exact=not args.float, jobs=args.jobs,
                                      elimination=args.elimination)
    det = format_fraction(uni.determinant) if uni.determinant is not None else None
    log('unisolvence:', 'det={}'.format(det) if det is not None else 'float rank check',
        'ok' if uni.invertible else 'FAILED')
    checks.append(OrderedDict([('name', 'unisolvence'), ('ok', uni.invertible),
                               ('dimension', uni.dimension), ('determinant', det)]))

    if not args.float:
        block = dofs_module.check_block_triangular(spec, g)
        log('block triangular:', 'ok' if block.holds else 'FAILED')
        checks.append(OrderedDict([
            ('name', 'block_triangular'), ('ok', block.holds),
            ('violations', [OrderedDict([('owner', list(v[0].owner.indices)), ('s', v[0].s),
                                         ('node', list(v[1])), ('value', format_fraction(v[2]))])
                            for v in block.violations]),
            ('blocks', [OrderedDict([('owner', list(b[0])), ('rows', b[1]), ('columns', b[2]),
                                     ('invertible', b[3])]) for b in block.blocks]),
        ]))

    if mesh is not None:
        gmap = meshglobal.global_dof_map(mesh, spec, jobs=args.jobs)
        log('global dimension:', gmap.dimension)
        worst = []
        ok = True
        for trial in range(args.trials):
            coefficients = random_coefficients(gmap.dimension, random)
            report = meshglobal.continuity_check(gmap, coefficients)
            ok = ok and report.ok
            worst.extend(row for row in report.rows if row['guaranteed'] and row['max_jump'] != '0')
        log('continuity over', args.trials, 'trials:', 'ok' if ok else 'FAILED')
        checks.append(OrderedDict([('name', 'continuity'), ('ok', ok), ('dimension', gmap.dimension),
                                   ('trials', args.trials), ('jumps', worst[:20])]))

    all_ok = all(c['ok'] for c in checks)
    report = OrderedDict([('ok', all_ok), ('element', spec.as_dict()), ('checks', checks)])
    write_output(json.dumps(report, indent=2) + '\n', args.output)
    return 0 if all_ok else 1


## dims

def parse_counts(text):
    try:
        return [int(x) for x in text.split(',')]
    except ValueError:
        raise InvalidArgument('counts must be comma separated integers: ' + repr(text))


def cmd_dims(args):
    try:
        spec = element_from_args(args)
        mesh = meshglobal.load_mesh(args.mesh) if args.mesh else None
        counts = mesh.counts() if mesh is not None else (parse_counts(args.counts) if args.counts else None)
        if counts is not None and len(counts) != spec.n + 1:
            raise InvalidArgument('need {} face counts, got {}'.format(spec.n + 1, len(counts)))
    except (ConstraintViolation, InvalidArgument, MeshError) as e:
        log('invalid input:', e)
        write_output(fail_report(e), None)
        return 1

    table = dofs_module.dimension_table(spec, counts)
    agrees = dofs_module.dimension_agrees(table)
    total = int(table['total'].sum())
    formula = meshglobal.global_dimension_formula(spec, list(table['faces']))
    log('total:', total, 'formula:', formula if formula is not None else 'n/a')

    if mesh is not None:
        gmap = meshglobal.global_dof_map(mesh, spec)
        log('global dof map:', gmap.dimension)
        agrees = agrees and gmap.dimension == total

    text = table.to_csv(sep='\t', index=False)
    text += 'total\t\t\t{}\t{}\n'.format(formula if formula is not None else '', total)
    write_output(text, args.output)
    return 0 if agrees else 1
