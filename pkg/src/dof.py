from __future__ import print_function, division

from collections import OrderedDict, namedtuple
from fractions import Fraction
from multiprocessing import Pool

import numpy as np
import pandas as pd
import scipy.linalg

from src.lattice import InvalidArgument, binomial, dist_to_face, extend, split, sub_simplices, sums
from src import decomp
from src.decomp import ConstraintViolation
from src.bernstein import (CANONICAL, DUAL, BernsteinPoly, canonical_normal_frame, derivative,
                           dual_normal_frame, moment, reference_simplex, trace_restrict)
from src.rational import (SingularMatrix, bareiss_determinant, determinant, float_matrix,
                          inverse_matrix, matmul, zeros)


LAGRANGE = 'lagrange'
HERMITE = 'hermite'
SMOOTH2D = 'smooth2d'
SMOOTH = 'smooth'
FAMILIES = (LAGRANGE, HERMITE, SMOOTH2D, SMOOTH)

VERTEX = 'vertex'
FACE = 'face'
INTERIOR = 'interior'


class NotUnisolvent(SingularMatrix):
    pass


class ElementSpec:
    """ family and parameters of a simplicial element, validated on construction """
    def __init__(self, family, n, k, m=None, r=None):
        if family not in FAMILIES:
            raise InvalidArgument('unknown family {}, choose from {}'.format(family, ', '.join(FAMILIES)))
        if n < 1:
            raise InvalidArgument('elements need n >= 1, got {}'.format(n))
        self.family = family
        self.n = int(n)
        self.k = int(k)
        self.r = None
        if family == LAGRANGE:
            if k < 1:
                raise InvalidArgument('Lagrange elements need k >= 1, got {}'.format(k))
            self.m = 0
        elif family == HERMITE:
            if m is None:
                raise InvalidArgument('hermite elements need m')
            violations = decomp.hermite_violations(k, m)
            if violations:
                raise ConstraintViolation(violations)
            self.m = int(m)
        else:
            if family == SMOOTH2D:
                if n != 2:
                    raise InvalidArgument('smooth2d is two dimensional, got n={}'.format(n))
                if r is None and m is not None:
                    r = (2*m, m, 0)
            if r is None:
                raise InvalidArgument('{} elements need a smoothness vector r'.format(family))
            if len(r) != n + 1:
                raise InvalidArgument('smoothness vector {} does not have length n+1 = {}'.format(tuple(r), n + 1))
            self.r = decomp.validate_smoothness_vector(r, k)
            if m is not None and m != self.r.m:
                raise ConstraintViolation(['r_{} = m'.format(n - 1)])
            self.m = self.r.m

    @staticmethod
    def from_preset(name):
        p = decomp.preset(name)
        return ElementSpec(SMOOTH, p['n'], p['k'], r=p['r'])

    def orders(self):
        """ continuity order guaranteed across an ell-face, ell = 0..n """
        if self.r is not None:
            return tuple(self.r.r)
        if self.family == HERMITE:
            return (self.m,) + (0,)*self.n
        return (0,)*(self.n + 1)

    def decomposition(self):
        if self.family == LAGRANGE:
            return decomp.lagrange_decomposition(self.n, self.k)
        if self.family == HERMITE:
            return decomp.hermite_decomposition(self.n, self.k, self.m)
        return decomp.smooth_decomposition(self.n, self.k, self.r)

    def dimension(self):
        return binomial(self.n + self.k, self.k)

    def as_dict(self):
        d = OrderedDict([('family', self.family), ('n', self.n), ('k', self.k), ('m', self.m)])
        if self.r is not None:
            d['r'] = list(self.r.r)
        return d

    def __repr__(self):
        extra = 'r={}'.format(','.join(str(x) for x in self.r.r)) if self.r is not None else 'm={}'.format(self.m)
        return 'ElementSpec({}, n={}, k={}, {})'.format(self.family, self.n, self.k, extra)


DofFunctional = namedtuple('DofFunctional', ['kind', 'owner', 's', 'beta', 'weight', 'node', 'directions'])
DofFunctional.__doc__ = """
A degree of freedom

    int_f  d^beta u / d n_f^beta  lambda_f^weight   (normalized by |f|)

for faces, D^beta u(v) for vertices (weight (0,)), and int_T u lambda^weight
for the interior. `node` is the lattice node it is paired with, `directions`
the vectors the derivative multi-index beta refers to.
"""


def sort_key(d):
    return (d.owner.dim, d.owner.indices, d.s, d.beta, d.weight)


def block_key(d):
    return (d.owner.dim, d.owner.indices, d.s)


def _axes(n):
    return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]


def _frame(f, g, frame_policy):
    if frame_policy == DUAL:
        return dual_normal_frame(f, g).vectors
    if frame_policy == CANONICAL:
        return canonical_normal_frame(g.face(f)).vectors
    raise InvalidArgument('unknown frame policy: ' + str(frame_policy))


def build_dofs(spec, g=None, frame_policy=DUAL, vertex_frame='cartesian', frames=None):
    """
    The DoFs of spec on g in canonical order, one per lattice node of the
    decomposition.

    Vertex DoFs are Cartesian derivatives unless vertex_frame='edge'.
    Lagrange and Hermite face and interior moments are tested against
    lambda_f^(alpha_f - 1), smooth ones against lambda_f^alpha_f.
    frames optionally maps faces to prescribed normal vectors.
    """
    if g is None:
        g = reference_simplex(spec.n)
    if g.ell != spec.n or not g.is_full():
        raise InvalidArgument('geometry of dimension {} for an element of dimension {}'.format(g.ell, spec.n))
    if vertex_frame not in ('cartesian', 'edge'):
        raise InvalidArgument("vertex_frame must be 'cartesian' or 'edge'")
    n = spec.n
    shifted = spec.family in (LAGRANGE, HERMITE)
    frames = frames or {}
    dofs = []
    for f, piece in spec.decomposition():
        if len(piece) == 0:
            continue
        if f.is_full():
            for a in piece:
                w = tuple(x - 1 for x in a) if shifted else a
                dofs.append(DofFunctional(INTERIOR, f, 0, (), w, a, ()))
            continue
        if f in frames:
            directions = tuple(tuple(v) for v in frames[f])
        elif f.dim == 0 and vertex_frame == 'cartesian':
            directions = tuple(_axes(n))
        elif f.dim == 0:
            directions = tuple(dual_normal_frame(f, g).vectors)
        else:
            directions = tuple(tuple(v) for v in _frame(f, g, frame_policy))
        kind = VERTEX if f.dim == 0 else FACE
        for a in piece:
            a_f, beta = split(a, f)
            if f.dim == 0:
                w = (0,)
            elif shifted:
                w = tuple(x - 1 for x in a_f)
            else:
                w = a_f
            dofs.append(DofFunctional(kind, f, sum(beta), beta, w, a, directions))
    dofs.sort(key=sort_key)
    return dofs


## applying functionals

def _moment_sum(p, w):
    total = Fraction(0)
    for a, c in p.coeffs.items():
        total += c*moment(tuple(x + y for x, y in zip(a, w)))
    return total


def apply_dof(d, p, g=None):
    """ direct evaluation: derivatives, then trace, then the weighted moment """
    g = g if g is not None else p.geometry
    if d.kind == INTERIOR:
        return _moment_sum(p, d.weight)
    q = derivative(p, d.directions, d.beta, g) if d.s > 0 else p
    return _moment_sum(trace_restrict(q, d.owner), d.weight)


def _pull_back(y, slopes):
    """ covector of L o D_v from the covector of L, D_v lambda^a = sum_i a_i g_i lambda^(a - e_i) """
    out = {}
    for b, c in y.items():
        for i, gi in enumerate(slopes):
            if gi == 0:
                continue
            a = b[:i] + (b[i] + 1,) + b[i+1:]
            out[a] = out.get(a, 0) + a[i]*gi*c
    return {a: c for a, c in out.items() if c != 0}


def dof_covector(d, g, k):
    """ the functional as {alpha: N(lambda^alpha)} over T^n_k (zero entries omitted) """
    n = g.ell
    if d.kind == INTERIOR:
        y = {}
        for a in sums(n + 1, k):
            y[a] = moment(tuple(x + w for x, w in zip(a, d.weight)))
        return y
    f = d.owner
    y = {}
    for b in sums(len(f), k - d.s):
        y[extend(b, f)] = moment(tuple(x + w for x, w in zip(b, d.weight)))
    grads = g.barycentric_gradients()
    for v, times in zip(d.directions, d.beta):
        slopes = [sum(gi*vi for gi, vi in zip(gr, v)) for gr in grads]
        for _ in range(times):
            y = _pull_back(y, slopes)
    return y


def _covector_job(args):
    return dof_covector(*args)


DofMatrix = namedtuple('DofMatrix', ['matrix', 'dofs', 'nodes'])


def _assemble(dofs, nodes, g, k, jobs=1):
    if jobs > 1:
        pool = Pool(jobs)
        try:
            rows = pool.map(_covector_job, [(d, g, k) for d in dofs])
        finally:
            pool.close()
            pool.join()
    else:
        rows = [dof_covector(d, g, k) for d in dofs]
    M = zeros(len(dofs), len(nodes))
    for i, y in enumerate(rows):
        for j, a in enumerate(nodes):
            c = y.get(a)
            if c:
                M[i, j] = c
    return M


def dof_matrix(spec, g=None, frame_policy=DUAL, vertex_frame='cartesian', columns=None, jobs=1, frames=None):
    """
    M[i, j] = N_i(lambda^nodes[j]). Columns follow the nodes paired with the
    DoFs unless another node order is given.
    """
    if g is None:
        g = reference_simplex(spec.n)
    dofs = build_dofs(spec, g, frame_policy, vertex_frame, frames=frames)
    nodes = [d.node for d in dofs] if columns is None else [tuple(a) for a in columns]
    return DofMatrix(_assemble(dofs, nodes, g, spec.k, jobs), dofs, nodes)


## verification

UnisolvenceReport = namedtuple('UnisolvenceReport', ['invertible', 'determinant', 'dimension'])

ELIMINATIONS = {'lu': determinant, 'bareiss': bareiss_determinant}


def check_unisolvence(spec, g=None, frame_policy=DUAL, exact=True, jobs=1, elimination='lu'):
    """
    Exact verdict from the determinant of the DoF matrix. The sparse LU and
    fraction-free Bareiss elimination give the same determinant (the tests
    compare them on every element family). exact=False is a floating point rank test.
    """
    if elimination not in ELIMINATIONS:
        raise InvalidArgument('unknown elimination: ' + repr(elimination))
    dm = dof_matrix(spec, g, frame_policy, jobs=jobs)
    dim = len(dm.dofs)
    if dim != spec.dimension():
        return UnisolvenceReport(False, Fraction(0), dim)
    if exact:
        det = ELIMINATIONS[elimination](dm.matrix)
        return UnisolvenceReport(det != 0, det, dim)
    A = float_matrix(dm.matrix)
    # moments of high degree are tiny, equilibrate rows before the rank test
    scale = np.abs(A).max(axis=1)
    scale[scale == 0] = 1
    A = A/scale[:, None]
    sv = scipy.linalg.svdvals(A)
    tol = sv.max()*max(A.shape)*np.finfo(np.float64).eps if len(sv) else 0
    return UnisolvenceReport(bool(np.all(sv > tol)), None, dim)


BlockReport = namedtuple('BlockReport', ['holds', 'violations', 'blocks'])


def column_block_keys(d):
    """ (dim, owner, distance to owner) of every node of a decomposition """
    keys = {}
    for f, piece in d:
        for a in piece:
            keys[a] = (f.dim, f.indices, dist_to_face(a, f))
    return keys


def check_block_triangular(spec, g=None, columns=None, max_witnesses=20):
    """
    Rows in canonical order, dual frames at faces and edge frames at vertices.
    Entries with row block (dim, owner, s) strictly before the column block
    must vanish; the diagonal blocks per owner must be invertible.
    columns optionally gives another decomposition to test the rows against.
    """
    if g is None:
        g = reference_simplex(spec.n)
    dofs = build_dofs(spec, g, DUAL, vertex_frame='edge')
    if columns is None:
        columns = spec.decomposition()
    keys = column_block_keys(columns)
    nodes = sorted(keys, key=lambda a: (keys[a], a))
    M = _assemble(dofs, nodes, g, spec.k)

    violations = []
    count = 0
    for i, d in enumerate(dofs):
        rk = block_key(d)
        for j, a in enumerate(nodes):
            if M[i, j] != 0 and rk < keys[a]:
                count += 1
                if len(violations) < max_witnesses:
                    violations.append((d, a, M[i, j]))

    blocks = []
    owners = OrderedDict()
    for i, d in enumerate(dofs):
        owners.setdefault((d.owner.dim, d.owner.indices), [[], []])[0].append(i)
    for j, a in enumerate(nodes):
        owners.setdefault(keys[a][:2], [[], []])[1].append(j)
    for (dim, indices), (rows, cols) in sorted(owners.items()):
        if len(rows) != len(cols):
            blocks.append((indices, len(rows), len(cols), False))
            continue
        det = bareiss_determinant(M[np.ix_(rows, cols)]) if rows else Fraction(1)
        blocks.append((indices, len(rows), len(cols), det != 0))
    holds = count == 0 and all(b[3] for b in blocks)
    return BlockReport(holds, violations, blocks)


def frame_change(spec, g=None):
    """
    T = M_canonical M_dual^-1 and whether it is block diagonal in
    (owner, s, weight) groups.
    """
    if g is None:
        g = reference_simplex(spec.n)
    dual = dof_matrix(spec, g, DUAL)
    canon = dof_matrix(spec, g, CANONICAL)
    T = matmul(canon.matrix, inverse_matrix(dual.matrix))
    groups = [(d.owner.indices, d.s, d.weight) for d in dual.dofs]
    block_diagonal = all(T[i, j] == 0 or groups[i] == groups[j]
                         for i in range(len(groups)) for j in range(len(groups)))
    return T, block_diagonal


class DualBasis:
    """ nodal basis psi_i = sum_j coefficients[j, i] lambda^nodes[j] with N_j(psi_i) = delta_ij """
    def __init__(self, coefficients, dofs, nodes, geometry):
        self.coefficients = coefficients
        self.dofs = dofs
        self.nodes = nodes
        self.geometry = geometry

    def __len__(self):
        return len(self.dofs)

    def polynomial(self, i):
        n = self.geometry.ell
        k = sum(self.nodes[0])
        return BernsteinPoly({a: self.coefficients[j, i] for j, a in enumerate(self.nodes)}, n, k, self.geometry)

    def combine(self, values):
        """ the polynomial with the given DoF values """
        n = self.geometry.ell
        k = sum(self.nodes[0])
        coeffs = {}
        for j, a in enumerate(self.nodes):
            c = Fraction(0)
            row = self.coefficients[j]
            for i, v in enumerate(values):
                if v and row[i]:
                    c += row[i]*v
            coeffs[a] = c
        return BernsteinPoly(coeffs, n, k, self.geometry)


def dual_basis(spec, g=None, frame_policy=DUAL, frames=None, jobs=1):
    if g is None:
        g = reference_simplex(spec.n)
    dm = dof_matrix(spec, g, frame_policy, frames=frames, jobs=jobs)
    try:
        X = inverse_matrix(dm.matrix)
    except SingularMatrix as e:
        raise NotUnisolvent('DoFs of {} are not unisolvent: {}'.format(spec, e))
    return DualBasis(X, dm.dofs, dm.nodes, g)


## two dimensional index sets

def smooth2d_index_sets(k, r0, m):
    """
    Edge moments of order beta against T^1_{k-2(r0+1)+beta}, beta = 0..m,
    interior moments over alpha in T^2_{k-3(m+1)} with every alpha_i <= k-r0-m-2.
    """
    decomp.validate_smoothness_vector((r0, m, 0), k)
    edge = OrderedDict((beta, list(sums(2, k - 2*(r0 + 1) + beta))) for beta in range(m + 1))
    bound = k - r0 - m - 2
    interior = [a for a in sums(3, k - 3*(m + 1)) if max(a) <= bound]
    return edge, interior


## dimension counts

def piece_dimension_formula(spec, ell):
    """ closed form of |S_ell(f)| per ell-face, or None when no formula is known """
    n, k, m = spec.n, spec.k, spec.m
    if spec.family == LAGRANGE:
        return binomial(k - 1, ell)
    if spec.family == HERMITE:
        if ell == 0:
            return binomial(n + m, m)
        return binomial(k - 1, ell) - (ell + 1)*binomial(m, ell)
    r = spec.r.r
    if ell == 0:
        return binomial(n + r[0], r[0])
    if n == 2:
        r0 = r[0]
        if ell == 1:
            return (m + 1)*(k - 2*r0 - 1) + m*(m + 1)//2
        return binomial(k - 3*m - 1, 2) - 3*binomial(r0 - 2*m, 2)
    return None


def dimension_table(spec, counts=None):
    """
    Per level rows: number of faces, formula and enumerated piece sizes, totals.
    counts defaults to the faces of one simplex.
    """
    n = spec.n
    if counts is None:
        counts = [binomial(n + 1, ell + 1) for ell in range(n + 1)]
    d = spec.decomposition()
    rows = []
    for ell in range(n + 1):
        sizes = set(len(d[f]) for f in sub_simplices(n, ell))
        if len(sizes) != 1:
            raise ConstraintViolation(['equal piece sizes on all {}-faces'.format(ell)])
        per_face = sizes.pop()
        formula = piece_dimension_formula(spec, ell)
        rows.append(OrderedDict([
            ('level', ell),
            ('faces', counts[ell]),
            ('per_face', per_face),
            ('per_face_formula', formula),
            ('total', counts[ell]*per_face),
        ]))
    table = pd.DataFrame(rows)
    table['per_face_formula'] = table['per_face_formula'].astype('Int64')
    return table


def dimension_agrees(table):
    known = table.dropna(subset=['per_face_formula'])
    return bool((known['per_face_formula'].astype(int) == known['per_face']).all())
