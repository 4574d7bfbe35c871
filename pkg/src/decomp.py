from __future__ import print_function, division

import json
from collections import OrderedDict, namedtuple

from src.lattice import (InvalidArgument, LatticeSet, SubSimplex, all_sub_simplices,
                         enumerate_lattice, faces_of, full_simplex, interior_nodes,
                         node_array, shift_interior, sub_simplices, sums, tube, vertex,
                         extend, check_limits)


LAGRANGE = 'lagrange'
HERMITE = 'hermite'
SMOOTH = 'smooth'
KINDS = (LAGRANGE, HERMITE, SMOOTH)


class ConstraintViolation(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super(ConstraintViolation, self).__init__('violated: ' + '; '.join(self.violations))


SmoothnessVector = namedtuple('SmoothnessVector', ['r', 'm', 'k'])
SmoothnessVector.n = property(lambda self: len(self.r) - 1)


def smoothness_violations(r, k):
    """ the list of violated constraints, empty when (r, k) is admissible """
    r = [int(x) for x in r]
    violations = []
    if len(r) < 2:
        return ['len(r) >= 2']
    n = len(r) - 1
    for i, x in enumerate(r):
        if x < 0:
            violations.append('r_{} >= 0'.format(i))
    if r[n] != 0:
        violations.append('r_{} = 0'.format(n))
    for ell in range(n - 2, -1, -1):
        if r[ell] < 2*r[ell + 1]:
            violations.append('r_{} >= 2 r_{}'.format(ell, ell + 1))
    if k < 2*r[0] + 1:
        violations.append('k >= 2 r_0 + 1')
    return violations


def validate_smoothness_vector(r, k):
    violations = smoothness_violations(r, k)
    if violations:
        raise ConstraintViolation(violations)
    r = tuple(int(x) for x in r)
    return SmoothnessVector(r, r[-2], int(k))


def parse_r(text):
    """ "2,1,0" -> (2, 1, 0) """
    try:
        return tuple(int(x) for x in text.replace(' ', '').split(',') if x != '')
    except ValueError:
        raise InvalidArgument('smoothness vector must be comma separated integers: ' + repr(text))


class LatticeDecomposition:
    """
    A partition (claimed) of T^n_k into pieces owned by the sub-simplices of T.

    Pieces are kept in the canonical owner order: by dimension, then
    lexicographic. Sub-simplices missing from the input get empty pieces.
    Nothing here checks the partition property, see verify_partition.
    """
    def __init__(self, kind, n, k, pieces, params=None):
        if kind not in KINDS:
            raise InvalidArgument('unknown decomposition kind: ' + str(kind))
        self.kind = kind
        self.n = n
        self.k = k
        self.params = dict(params or {})
        self.pieces = OrderedDict()
        for f in all_sub_simplices(n):
            nodes = pieces.get(f, ())
            self.pieces[f] = nodes if isinstance(nodes, LatticeSet) else LatticeSet(nodes, n, k)
        extra = [f for f in pieces if f not in self.pieces]
        if extra:
            raise InvalidArgument('pieces keyed by foreign sub-simplices: ' + str(extra))

    def __getitem__(self, f):
        return self.pieces[f]

    def __iter__(self):
        return iter(self.pieces.items())

    def __eq__(self, other):
        return (isinstance(other, LatticeDecomposition) and self.n == other.n
                and self.k == other.k
                and all(self.pieces[f] == other.pieces[f] for f in self.pieces))

    def __ne__(self, other):
        return not self == other

    def sizes(self):
        return OrderedDict((f, len(s)) for f, s in self.pieces.items())

    def level_sizes(self):
        """ total piece size per dimension ell """
        totals = [0]*(self.n + 1)
        for f, s in self.pieces.items():
            totals[f.dim] += len(s)
        return totals

    def total(self):
        return sum(len(s) for s in self.pieces.values())

    def __repr__(self):
        return 'LatticeDecomposition({}, n={}, k={}, {})'.format(self.kind, self.n, self.k, self.params)


## Lagrange

def lagrange_decomposition(n, k):
    if k < 1:
        raise InvalidArgument('Lagrange decomposition needs k >= 1, got {}'.format(k))
    check_limits(n, k)
    pieces = {f: interior_nodes(f, k) for f in all_sub_simplices(n)}
    return LatticeDecomposition(LAGRANGE, n, k, pieces)


## Hermite

def hermite_violations(k, m):
    violations = []
    if m < 0:
        violations.append('m >= 0')
    if k < 2*m + 1:
        violations.append('k >= 2 m + 1')
    return violations


def _vertex_disks(f, m, k):
    nodes = set()
    for v in f:
        nodes.update(tube(vertex(v, f.n), m, f.n, k))
    return nodes


def hermite_face_piece(f, k, m):
    """ T_{k,1}(f) minus the vertex disks D(v, m), v in f """
    return interior_nodes(f, k).difference(_vertex_disks(f, m, k))


def hermite_face_piece_shifted(f, k, m):
    """
    Same set built on the inner lattice T_{k-ell-1}(f): drop the vertex
    disks of radius m - ell there, then shift every node by one.
    """
    ell = f.dim
    inner = k - ell - 1
    if inner < 0:
        return LatticeSet([], f.n, k)
    radius = m - ell
    nodes = []
    for b in sums(len(f), inner):
        if radius >= 0 and any(inner - b[i] <= radius for i in range(len(f))):
            continue
        nodes.append(extend(shift_interior(b), f))
    return LatticeSet(nodes, f.n, k)


def hermite_decomposition(n, k, m):
    violations = hermite_violations(k, m)
    if violations:
        raise ConstraintViolation(violations)
    check_limits(n, k)
    pieces = {}
    for f in all_sub_simplices(n):
        if f.dim == 0:
            pieces[f] = tube(f, m, n, k)
        else:
            pieces[f] = hermite_face_piece(f, k, m)
    return LatticeDecomposition(HERMITE, n, k, pieces, params={'m': m})


## smooth (C^m)

def _inequality_mask(nodes, f, k, r, over='face'):
    """
    Logic array of S_ell(f):
        |alpha_{f*}| <= r_ell  and  |alpha_e| <= k - r_i - 1  for e in Delta_i(f), i < ell
    with over='simplex' taking e over Delta_i(T) instead.
    """
    ell = f.dim
    mask = (k - nodes[:, list(f.indices)].sum(axis=1)) <= r[ell]
    host = f if over == 'face' else full_simplex(f.n)
    for i in range(ell):
        for e in faces_of(host, i):
            mask &= nodes[:, list(e.indices)].sum(axis=1) <= k - r[i] - 1
    return mask


def _rows(nodes, mask):
    return [tuple(int(x) for x in row) for row in nodes[mask]]


def smooth_piece_by_inequalities(f, k, r, over='face'):
    if over not in ('face', 'simplex'):
        raise InvalidArgument("over must be 'face' or 'simplex', got " + repr(over))
    nodes = node_array(f.n, k)
    return LatticeSet(_rows(nodes, _inequality_mask(nodes, f, k, r, over=over)), f.n, k)


def smooth_piece_by_tubes(f, k, r, over='face'):
    """ D(f, r_ell) minus the tubes D(e, r_i) over e in Delta_i(f) (or Delta_i(T)), i < ell """
    if over not in ('face', 'simplex'):
        raise InvalidArgument("over must be 'face' or 'simplex', got " + repr(over))
    n = f.n
    ell = f.dim
    host = f if over == 'face' else full_simplex(n)
    removed = set()
    for i in range(ell):
        for e in faces_of(host, i):
            removed.update(tube(e, r[i], n, k))
    return tube(f, r[ell], n, k).difference(removed)


def smooth_decomposition(n, k, r):
    if not isinstance(r, SmoothnessVector):
        r = validate_smoothness_vector(r, k)
    elif smoothness_violations(r.r, k):
        raise ConstraintViolation(smoothness_violations(r.r, k))
    if r.n != n:
        raise InvalidArgument('smoothness vector {} does not have length n+1 = {}'.format(r.r, n + 1))
    check_limits(n, k)

    nodes = node_array(n, k)
    pieces = {}
    for f in all_sub_simplices(n):
        pieces[f] = _rows(nodes, _inequality_mask(nodes, f, k, r.r))
    return LatticeDecomposition(SMOOTH, n, k, pieces, params={'r': list(r.r), 'm': r.m})


def geodecomp_2d(k, r0, r1):
    """
    Two-dimensional construction: vertex disks D(v, r0), edge pieces
    D(e, r1) minus all vertex disks, interior the remainder.
    """
    sv = validate_smoothness_vector((r0, r1, 0), k)
    n = 2
    disks = set()
    pieces = {}
    for v in sub_simplices(n, 0):
        pieces[v] = tube(v, r0, n, k)
        disks.update(pieces[v])
    claimed = set(disks)
    for e in sub_simplices(n, 1):
        pieces[e] = tube(e, r1, n, k).difference(disks)
        claimed.update(pieces[e])
    pieces[full_simplex(n)] = enumerate_lattice(n, k).difference(claimed)
    return LatticeDecomposition(SMOOTH, n, k, pieces, params={'r': list(sv.r), 'm': sv.m})


## verification

PartitionReport = namedtuple('PartitionReport', ['disjoint', 'covering', 'overlaps', 'missing'])
PartitionReport.ok = property(lambda self: self.disjoint and self.covering)


def verify_partition(d):
    """ brute force: every node of T^n_k claimed exactly once """
    claims = OrderedDict((a, []) for a in enumerate_lattice(d.n, d.k))
    for f, s in d:
        for a in s:
            claims.setdefault(a, []).append(f)
    overlaps = [(a, fs) for a, fs in claims.items() if len(fs) > 1]
    missing = [a for a, fs in claims.items() if len(fs) == 0]
    return PartitionReport(len(overlaps) == 0, len(missing) == 0, overlaps, missing)


## dispatch and presets

def decompose(family, n, k, m=None, r=None):
    if family == LAGRANGE:
        return lagrange_decomposition(n, k)
    if family == HERMITE:
        if m is None:
            raise InvalidArgument('hermite decomposition needs m')
        return hermite_decomposition(n, k, m)
    if family in (SMOOTH, 'smooth2d'):
        if r is None:
            raise InvalidArgument('smooth decomposition needs a smoothness vector r')
        if family == 'smooth2d' and n != 2:
            raise InvalidArgument('smooth2d is two dimensional, got n={}'.format(n))
        if m is not None and len(r) >= 2 and r[-2] != m:
            raise ConstraintViolation(['r_{} = m'.format(len(r) - 2)])
        return smooth_decomposition(n, k, r)
    raise InvalidArgument('unknown family: ' + str(family))


def bz_parameters(m):
    return dict(n=2, k=4*m + 1, r=(2*m, m, 0))


PRESETS = OrderedDict([
    ('argyris', dict(n=2, k=5, r=(2, 1, 0))),
    ('bz1', bz_parameters(1)),
    ('bz2', bz_parameters(2)),
    ('zhang3d', dict(n=3, k=9, r=(4, 2, 1, 0))),
    ('zhang4d', dict(n=4, k=17, r=(8, 4, 2, 1, 0))),
    ('neilan', dict(n=3, k=5, r=(2, 1, 0, 0))),
])


def preset(name):
    if name not in PRESETS:
        raise InvalidArgument('unknown element {}, choose from {}'.format(name, ', '.join(PRESETS)))
    p = dict(PRESETS[name])
    p['m'] = p['r'][-2]
    return p


## serialization

def decomposition_to_dict(d):
    return OrderedDict([
        ('n', d.n),
        ('k', d.k),
        ('kind', d.kind),
        ('params', OrderedDict(sorted(d.params.items()))),
        ('pieces', [OrderedDict([('face', list(f.indices)), ('nodes', [list(a) for a in s])])
                    for f, s in d]),
    ])


def decomposition_to_json(d, indent=None):
    return json.dumps(decomposition_to_dict(d), indent=indent)


def decomposition_from_dict(obj):
    n = int(obj['n'])
    k = int(obj['k'])
    pieces = {}
    for piece in obj['pieces']:
        f = SubSimplex(piece['face'], n)
        if f in pieces:
            raise InvalidArgument('face {} listed twice'.format(list(f.indices)))
        pieces[f] = [tuple(a) for a in piece['nodes']]
    return LatticeDecomposition(obj['kind'], n, k, pieces, params=obj.get('params'))
