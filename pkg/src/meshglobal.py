from __future__ import print_function, division

import itertools
import json
import numbers
from collections import OrderedDict, namedtuple
from fractions import Fraction

import pandas as pd

from src.lattice import InvalidArgument, SubSimplex, binomial, extend, sums
from src.decomp import smooth_decomposition, smoothness_violations, verify_partition
from src.bernstein import (SimplexGeometry, SingularGeometry, canonical_normal_frame,
                           cartesian_derivative, evaluate, from_cartesian)
from src.rational import as_fraction, dot, format_fraction, fraction_matrix, row_echelon
from src import dof as dofs_module


class MeshError(ValueError):
    def __init__(self, message, cells=()):
        self.cells = list(cells)
        super(MeshError, self).__init__(message + (' (cells {})'.format(self.cells) if self.cells else ''))


class Mesh:
    """
    A simplicial mesh with exact vertex coordinates.

    Cells are stored with ascending global vertex ids so every local face
    lists its vertices in global order.
    """
    def __init__(self, vertices, cells, check=True):
        self.vertices = [tuple(as_fraction(x) for x in v) for v in vertices]
        if len(self.vertices) == 0:
            raise MeshError('mesh without vertices')
        self.dim = len(self.vertices[0])
        if any(len(v) != self.dim for v in self.vertices):
            raise MeshError('vertices of mixed dimension')
        self.cells = []
        for c, cell in enumerate(cells):
            cell = tuple(sorted(int(i) for i in cell))
            if len(cell) != self.dim + 1:
                raise MeshError('cell with {} vertices in dimension {}'.format(len(cell), self.dim), [c])
            if len(set(cell)) != len(cell):
                raise MeshError('cell repeats a vertex', [c])
            if any(i < 0 or i >= len(self.vertices) for i in cell):
                raise MeshError('cell refers to a missing vertex', [c])
            self.cells.append(cell)
        if len(set(self.cells)) != len(self.cells):
            raise MeshError('duplicated cell', [c for c, cell in enumerate(self.cells) if self.cells.count(cell) > 1])

        self.geometries = []
        for c, cell in enumerate(self.cells):
            try:
                self.geometries.append(SimplexGeometry([self.vertices[i] for i in cell]))
            except SingularGeometry:
                raise MeshError('degenerate cell', [c])

        n = self.dim
        self.faces = []
        self.face_cells = []
        for ell in range(n + 1):
            incidence = OrderedDict()
            for c, cell in enumerate(self.cells):
                for face in itertools.combinations(cell, ell + 1):
                    incidence.setdefault(face, []).append(c)
            keys = sorted(incidence)
            self.faces.append(keys)
            self.face_cells.append(OrderedDict((f, incidence[f]) for f in keys))

        if check:
            check_conformity(self)

    @property
    def n(self):
        return self.dim

    def counts(self):
        """ |Delta_ell(T_h)|, ell = 0..n """
        return [len(fs) for fs in self.faces]

    def interior_faces(self, ell):
        return [f for f, cs in self.face_cells[ell].items() if len(cs) > 1]

    def cell_geometry(self, c):
        return self.geometries[c]

    def face_geometry(self, face):
        return SimplexGeometry([self.vertices[i] for i in sorted(face)])

    def local_face(self, c, face):
        cell = self.cells[c]
        return SubSimplex([cell.index(i) for i in face], self.dim)

    def __repr__(self):
        return 'Mesh(dim={}, counts={})'.format(self.dim, self.counts())


## conformity

def check_conformity(mesh):
    """
    Raises MeshError for hanging vertices, facets shared by more than two
    cells and pairs of cells whose intersection is not the hull of their
    shared vertices (overlaps included).

    Separating axes (facet normals, plus edge cross products in 3-D) clear
    pairs with a gap between them. Pairs that touch or overlap, and every
    pair with overlapping bounding boxes in four and more dimensions, get the
    exact contact test of _foreign_contact.
    """
    n = mesh.dim
    for c, cell in enumerate(mesh.cells):
        g = mesh.geometries[c]
        for i, p in enumerate(mesh.vertices):
            if i in cell:
                continue
            if min(g.barycentric(p)) >= 0:
                raise MeshError('vertex {} lies on cell {} without being one of its vertices'.format(i, c), [c])
    if n >= 1:
        for face, cs in mesh.face_cells[n - 1].items():
            if len(cs) > 2:
                raise MeshError('facet {} shared by {} cells'.format(list(face), len(cs)), cs)
    for a, b in itertools.combinations(range(len(mesh.cells)), 2):
        if not _boxes_meet(mesh, a, b):
            continue
        gap = _separation(mesh, a, b) if n <= 3 else 0
        if gap is not None and gap > 0:
            continue
        x = _foreign_contact(mesh, a, b)
        if x is None:
            continue
        if gap is None:
            raise MeshError('cells overlap', [a, b])
        raise MeshError('cells meet at {} outside a common face'.format([format_fraction(t) for t in x]), [a, b])


def _boxes_meet(mesh, a, b):
    pa = [mesh.vertices[i] for i in mesh.cells[a]]
    pb = [mesh.vertices[i] for i in mesh.cells[b]]
    for j in range(mesh.dim):
        if max(p[j] for p in pa) < min(p[j] for p in pb) or max(p[j] for p in pb) < min(p[j] for p in pa):
            return False
    return True


def _axes_of(mesh, c):
    g = mesh.geometries[c]
    axes = [tuple(gr) for gr in g.barycentric_gradients()]
    if mesh.dim == 3:
        verts = [mesh.vertices[i] for i in mesh.cells[c]]
        edges = [tuple(x - y for x, y in zip(verts[j], verts[i]))
                 for i, j in itertools.combinations(range(4), 2)]
        return axes, edges
    return axes, []


def _cross(u, v):
    return (u[1]*v[2] - u[2]*v[1], u[2]*v[0] - u[0]*v[2], u[0]*v[1] - u[1]*v[0])


def _separation(mesh, a, b):
    """ 1 if some axis leaves a gap between the cells, 0 if the best axes only touch, None if none separates """
    pa = [mesh.vertices[i] for i in mesh.cells[a]]
    pb = [mesh.vertices[i] for i in mesh.cells[b]]
    axes_a, edges_a = _axes_of(mesh, a)
    axes_b, edges_b = _axes_of(mesh, b)
    axes = axes_a + axes_b + [_cross(u, v) for u in edges_a for v in edges_b]
    touching = False
    for axis in axes:
        if all(x == 0 for x in axis):
            continue
        ia = [dot(axis, p) for p in pa]
        ib = [dot(axis, p) for p in pb]
        if max(ia) < min(ib) or max(ib) < min(ia):
            return 1
        if max(ia) == min(ib) or max(ib) == min(ia):
            touching = True
    return 0 if touching else None


def _affine_meet(P, Q):
    """
    The single point where aff(P) and aff(Q) meet, or None when they miss
    each other or meet in more than a point.
    """
    p0, q0 = P[0], Q[0]
    d = len(p0)
    cols = [[p[j] - p0[j] for p in P[1:]] + [q0[j] - q[j] for q in Q[1:]] for j in range(d)]
    unknowns = len(P) + len(Q) - 2
    rows = [cols[j] + [q0[j] - p0[j]] for j in range(d)]
    R, pivots, _ = row_echelon(fraction_matrix(rows))
    if unknowns in pivots or len(pivots) != unknowns:
        return None
    s = [Fraction(0)]*unknowns
    for r, c in enumerate(pivots):
        s[c] = R[r][unknowns]
    return tuple(p0[j] + sum(s[i]*(P[i + 1][j] - p0[j]) for i in range(len(P) - 1)) for j in range(d))


def _foreign_contact(mesh, a, b):
    """
    A point of cell a intersect cell b outside the hull of their shared
    vertices, or None when the two cells meet in that common face only.

    If the intersection is larger than the common face, one of its vertices
    lies outside the face, and every vertex of the intersection is the only
    point where the affine hulls of some face of a and some face of b meet.
    """
    ca, cb = mesh.cells[a], mesh.cells[b]
    ga, gb = mesh.geometries[a], mesh.geometries[b]
    foreign = [i for i, v in enumerate(ca) if v not in cb]
    if not foreign:
        return None
    faces_a = [f for ell in range(len(ca)) for f in itertools.combinations(ca, ell + 1)]
    faces_b = [f for ell in range(len(cb)) for f in itertools.combinations(cb, ell + 1)]
    for fa in faces_a:
        P = [mesh.vertices[i] for i in fa]
        for fb in faces_b:
            if len(fa) + len(fb) - 2 > mesh.dim:
                continue
            x = _affine_meet(P, [mesh.vertices[i] for i in fb])
            if x is None:
                continue
            lam_a = ga.barycentric(x)
            if min(lam_a) < 0 or min(gb.barycentric(x)) < 0:
                continue
            if any(lam_a[i] != 0 for i in foreign):
                return x
    return None


## file format

def load_mesh(source):
    """ source: path, open file or an already parsed dict """
    if isinstance(source, dict):
        obj = source
    elif hasattr(source, 'read'):
        obj = json.load(source, parse_float=Fraction)
    else:
        with open(source) as f:
            obj = json.load(f, parse_float=Fraction)
    try:
        vertices = obj['vertices']
        cells = obj['cells']
    except KeyError as e:
        raise MeshError('mesh file without {}'.format(e))
    mesh = Mesh(vertices, cells)
    if 'dim' in obj and int(obj['dim']) != mesh.dim:
        raise MeshError('declared dim {} but vertices have {} coordinates'.format(obj['dim'], mesh.dim))
    return mesh


def dump_mesh(mesh, indent=None):
    obj = OrderedDict([
        ('dim', mesh.dim),
        ('vertices', [[format_fraction(x) for x in v] for v in mesh.vertices]),
        ('cells', [list(c) for c in mesh.cells]),
    ])
    return json.dumps(obj, indent=indent)


## global degrees of freedom

def global_key(mesh, c, d):
    """ (dim, global face ids, s, beta, weight): equal keys are the same functional """
    cell = mesh.cells[c]
    face = tuple(cell[i] for i in d.owner.indices)
    return (d.owner.dim, face, d.s, d.beta, d.weight)


class GlobalDofMap:
    def __init__(self, mesh, spec, jobs=1):
        self.mesh = mesh
        self.spec = spec
        self.jobs = jobs
        self.frames = []
        self.cell_dofs = []
        keys = set()
        for c in range(len(mesh.cells)):
            frames = self._cell_frames(c)
            self.frames.append(frames)
            local = dofs_module.build_dofs(spec, mesh.cell_geometry(c), frames=frames)
            self.cell_dofs.append(local)
            keys.update(global_key(mesh, c, d) for d in local)
        self.keys = sorted(keys)
        self.index = {key: i for i, key in enumerate(self.keys)}
        self.cell_global = [[self.index[global_key(mesh, c, d)] for d in self.cell_dofs[c]]
                            for c in range(len(mesh.cells))]
        self._bases = {}

    def _cell_frames(self, c):
        mesh = self.mesh
        cell = mesh.cells[c]
        frames = {}
        for ell in range(1, mesh.dim):
            for face in itertools.combinations(range(mesh.dim + 1), ell + 1):
                global_face = tuple(cell[i] for i in face)
                frames[SubSimplex(face, mesh.dim)] = canonical_normal_frame(mesh.face_geometry(global_face)).vectors
        return frames

    @property
    def dimension(self):
        return len(self.keys)

    def owner(self, i):
        return self.keys[i][1]

    def basis(self, c):
        """ nodal basis of cell c, in the order of cell_dofs[c] """
        if c not in self._bases:
            self._bases[c] = dofs_module.dual_basis(self.spec, self.mesh.cell_geometry(c),
                                                    frames=self.frames[c], jobs=self.jobs)
        return self._bases[c]

    def level_counts(self):
        counts = [0]*(self.mesh.dim + 1)
        for key in self.keys:
            counts[key[0]] += 1
        return counts


def global_dof_map(mesh, spec, jobs=1):
    return GlobalDofMap(mesh, spec, jobs=jobs)


def global_dimension_formula(spec, counts):
    """ sum_ell |Delta_ell(T_h)| |S_ell(f)| from closed forms, None if one is unknown """
    total = 0
    for ell, count in enumerate(counts):
        per_face = dofs_module.piece_dimension_formula(spec, ell)
        if per_face is None:
            return None
        total += count*per_face
    return total


def cell_polynomials(gmap, coefficients):
    if len(coefficients) != gmap.dimension:
        raise InvalidArgument('expected {} global coefficients, got {}'.format(gmap.dimension, len(coefficients)))
    polys = []
    for c in range(len(gmap.mesh.cells)):
        values = [as_fraction(coefficients[i]) for i in gmap.cell_global[c]]
        polys.append(gmap.basis(c).combine(values))
    return polys


## interpolation

def _check_polynomial(target):
    if not isinstance(target, dict):
        raise InvalidArgument('target must be a polynomial {exponents: coefficient}, got ' + type(target).__name__)
    for gamma in target:
        if not isinstance(gamma, tuple) or not all(isinstance(e, numbers.Integral) and e >= 0 for e in gamma):
            raise InvalidArgument('not a polynomial exponent: ' + repr(gamma))


def interpolate(target, mesh, spec, gmap=None):
    """
    Global DoF values of the Cartesian polynomial target; every cell must
    produce the same value for a shared DoF.
    """
    _check_polynomial(target)
    if gmap is None:
        gmap = global_dof_map(mesh, spec)
    values = [None]*gmap.dimension
    for c in range(len(mesh.cells)):
        g = mesh.cell_geometry(c)
        p = from_cartesian(target, g, spec.k)
        for d, i in zip(gmap.cell_dofs[c], gmap.cell_global[c]):
            v = dofs_module.apply_dof(d, p, g)
            if values[i] is None:
                values[i] = v
            elif values[i] != v:
                raise InvalidArgument('DoF {} is not single valued: {} != {}'.format(gmap.keys[i], values[i], v))
    return values


def reproduction_failures(gmap, target, coefficients):
    """ cells on which the interpolant differs from target """
    polys = cell_polynomials(gmap, coefficients)
    return [c for c, p in enumerate(polys)
            if p != from_cartesian(target, gmap.mesh.cell_geometry(c), gmap.spec.k)]


## continuity

ContinuityReport = namedtuple('ContinuityReport', ['ok', 'rows'])


def face_samples(ell, k):
    """ barycentric points of the degree k+1 principal lattice on an ell-face """
    return [tuple(Fraction(x, k + 1) for x in b) for b in sums(ell + 1, k + 1)]


def _derivatives(p, g, order):
    """ {gamma: D^gamma p} for all Cartesian gamma with |gamma| <= order """
    d = g.d
    out = {(0,)*d: p}
    for s in range(1, order + 1):
        for gamma in sums(d, s):
            j = next(i for i, x in enumerate(gamma) if x > 0)
            lower = gamma[:j] + (gamma[j] - 1,) + gamma[j+1:]
            axis = tuple(int(i == j) for i in range(d))
            out[gamma] = cartesian_derivative(out[lower], axis, g)
    return out


def continuity_check(gmap, coefficients, order_policy='element'):
    """
    Derivative jumps across every interior ell-face, ell < n. order_policy
    'element' checks up to the order the element guarantees there, an integer
    checks up to that order everywhere; jumps above the guaranteed order are
    reported but do not fail the check.
    """
    mesh = gmap.mesh
    n = mesh.dim
    guaranteed = gmap.spec.orders()
    if order_policy != 'element' and not isinstance(order_policy, numbers.Integral):
        raise InvalidArgument("order_policy must be 'element' or an integer")
    polys = cell_polynomials(gmap, coefficients)
    top = max(guaranteed[:n]) if order_policy == 'element' else int(order_policy)
    derivs = [_derivatives(polys[c], mesh.cell_geometry(c), top) for c in range(len(mesh.cells))]

    rows = []
    ok = True
    for ell in range(n):
        order = guaranteed[ell] if order_policy == 'element' else int(order_policy)
        samples = face_samples(ell, gmap.spec.k)
        for face in mesh.interior_faces(ell):
            cells = mesh.face_cells[ell][face]
            points = {}
            for c in cells:
                f = mesh.local_face(c, face)
                points[c] = [extend(b, f) for b in samples]
            for s in range(order + 1):
                jump = Fraction(0)
                for gamma in sums(n, s):
                    first = [evaluate(derivs[cells[0]][gamma], lam) for lam in points[cells[0]]]
                    for c in cells[1:]:
                        vals = [evaluate(derivs[c][gamma], lam) for lam in points[c]]
                        jump = max([jump] + [abs(x - y) for x, y in zip(first, vals)])
                failed = jump != 0 and s <= guaranteed[ell]
                ok = ok and not failed
                rows.append(OrderedDict([('face', list(face)), ('level', ell), ('order', s),
                                         ('max_jump', format_fraction(jump)),
                                         ('guaranteed', s <= guaranteed[ell])]))
    return ContinuityReport(ok, rows)


def continuity_table(report):
    return pd.DataFrame(report.rows, columns=['face', 'level', 'order', 'max_jump', 'guaranteed'])


## traces on facets

TraceReport = namedtuple('TraceReport', ['sequence', 'degree', 'valid', 'violations', 'count', 'expected'])


def trace_space_check(spec, i):
    """
    Dimension bookkeeping of the traces D^i u on a facet: the sequence
    (r_0 - i, ..., r_{n-2} - i, 0) at degree k - i must be admissible and its
    decomposition must count dim P_{k-i}(F) nodes.
    """
    if spec.family == dofs_module.HERMITE:
        raise InvalidArgument('hermite elements are only C^0 across facets, no facet sequence')
    if i < 0 or i > spec.m:
        raise InvalidArgument('derivative order {} outside 0..m = {}'.format(i, spec.m))
    n, k = spec.n, spec.k
    r = spec.orders()
    sequence = tuple(x - i for x in r[:n - 1]) + (0,)
    degree = k - i
    expected = binomial(n - 1 + degree, degree)
    if n == 1:
        return TraceReport(sequence, degree, True, [], 1, expected)
    violations = smoothness_violations(sequence, degree)
    if violations:
        return TraceReport(sequence, degree, False, violations, None, expected)
    d = smooth_decomposition(n - 1, degree, sequence)
    if not verify_partition(d).ok:
        return TraceReport(sequence, degree, False, ['partition of the facet lattice'], d.total(), expected)
    return TraceReport(sequence, degree, d.total() == expected, [], d.total(), expected)
