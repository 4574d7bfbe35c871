from __future__ import print_function, division

import math
from collections import namedtuple
from fractions import Fraction

import numpy as np

from src.lattice import InvalidArgument, SubSimplex, complement, sums
from src.rational import (SingularMatrix, as_fraction, bareiss_determinant, dot,
                          fraction_matrix, inverse_matrix, lu_factor, lu_solve, null_space)


class SingularGeometry(ArithmeticError):
    pass


class IrrationalMeasure(ArithmeticError):
    pass


def factorial(n):
    return math.factorial(n)


def multi_factorial(a):
    p = 1
    for x in a:
        p *= math.factorial(x)
    return p


def square_split(N):
    """ N = a^2 s with s squarefree """
    rest, a, s = N, 1, 1
    d = 2
    while d*d*d <= rest:
        e = 0
        while rest % d == 0:
            rest //= d
            e += 1
        a *= d**(e // 2)
        s *= d**(e % 2)
        d += 1
    # at most two prime factors are left, each at least d
    root = math.isqrt(rest)
    if root*root == rest:
        return a*root, s
    return a, s*rest


class SimplexGeometry:
    """
    An ell-simplex embedded in R^d with exact rational vertex coordinates.

    Barycentric gradients are only defined for full dimensional simplices
    (ell == d); lower dimensional ones are faces, used for their measure and
    their canonical normal frame.
    """
    def __init__(self, vertices):
        vertices = [tuple(as_fraction(x) for x in v) for v in vertices]
        if len(vertices) == 0:
            raise InvalidArgument('simplex without vertices')
        d = len(vertices[0])
        if any(len(v) != d for v in vertices):
            raise InvalidArgument('vertices of mixed dimension')
        ell = len(vertices) - 1
        if ell > d:
            raise SingularGeometry('{} points cannot be affinely independent in R^{}'.format(ell + 1, d))
        self.vertices = vertices
        self.ell = ell
        self.d = d
        self.edges = fraction_matrix([[x - y for x, y in zip(v, vertices[0])] for v in vertices[1:]]) \
            if ell > 0 else fraction_matrix([])
        gram = self.gram_determinant()
        if gram == 0:
            raise SingularGeometry('degenerate simplex: ' + str([[str(x) for x in v] for v in vertices]))
        self._gradients = None

    @property
    def n(self):
        return self.ell

    def is_full(self):
        return self.ell == self.d

    def gram_determinant(self):
        if self.ell == 0:
            return Fraction(1)
        E = self.edges
        return bareiss_determinant(E.dot(E.T))

    def measure_squared(self):
        return self.gram_determinant() / factorial(self.ell)**2

    def measure_parts(self):
        """ (r, s) with r rational and s a squarefree integer such that the measure is r sqrt(s) """
        q = self.measure_squared()
        a, s = square_split(q.numerator*q.denominator)
        return Fraction(a, q.denominator), s

    def measure(self):
        """ exact ell-dimensional measure; IrrationalMeasure when it is not rational """
        if self.is_full():
            return abs(bareiss_determinant(self.edges)) / factorial(self.ell)
        q = self.measure_squared()
        p_root = math.isqrt(q.numerator)
        q_root = math.isqrt(q.denominator)
        if p_root*p_root != q.numerator or q_root*q_root != q.denominator:
            raise IrrationalMeasure('measure of face is sqrt({})'.format(q))
        return Fraction(p_root, q_root)

    def barycentric_gradients(self):
        if self._gradients is None:
            self._gradients = barycentric_gradients(self)
        return self._gradients

    def barycentric(self, x):
        """ barycentric coordinates of the point x """
        grads = self.barycentric_gradients()
        x = [as_fraction(c) for c in x]
        dx = [a - b for a, b in zip(x, self.vertices[0])]
        lam = [dot(grads[i], dx) for i in range(1, self.ell + 1)]
        return (1 - sum(lam),) + tuple(lam)

    def face(self, f):
        return SimplexGeometry([self.vertices[i] for i in f.indices])

    def as_float(self):
        return np.array([[float(x) for x in v] for v in self.vertices], dtype=np.float64)


def reference_simplex(n):
    vertices = [[0]*n]
    for i in range(n):
        v = [0]*n
        v[i] = 1
        vertices.append(v)
    return SimplexGeometry(vertices)


def barycentric_gradients(g):
    """
    grad lambda_i, i = 1..n, are the columns of E^{-1} where E holds the
    edge vectors v_i - v_0 as rows; grad lambda_0 = -sum of the others.
    """
    if not g.is_full():
        raise InvalidArgument('barycentric gradients need a full dimensional simplex')
    n = g.ell
    if n == 0:
        return [()]
    try:
        Einv = inverse_matrix(g.edges)
    except SingularMatrix:
        raise SingularGeometry('degenerate simplex')
    grads = [tuple(Einv[:, i]) for i in range(n)]
    g0 = tuple(-sum(gr[j] for gr in grads) for j in range(n))
    return [g0] + grads


## Bernstein form: coefficients of lambda^alpha (no multinomial weights)

class BernsteinPoly:
    def __init__(self, coeffs, n, k, geometry=None):
        self.n = n
        self.k = k
        self.geometry = geometry
        self.coeffs = {}
        for a, c in coeffs.items():
            a = tuple(a)
            if len(a) != n + 1 or sum(a) != k or min(a) < 0:
                raise InvalidArgument('index {} is not in T^{}_{}'.format(a, n, k))
            c = as_fraction(c)
            if c != 0:
                self.coeffs[a] = self.coeffs.get(a, 0) + c
        self.coeffs = {a: c for a, c in self.coeffs.items() if c != 0}

    def is_zero(self):
        return len(self.coeffs) == 0

    def __getitem__(self, a):
        return self.coeffs.get(tuple(a), Fraction(0))

    def _compatible(self, other):
        if self.n != other.n:
            raise InvalidArgument('polynomials in {} and {} variables'.format(self.n + 1, other.n + 1))

    def __add__(self, other):
        self._compatible(other)
        a, b = self, other
        if a.k < b.k:
            a = a.raise_degree(b.k - a.k)
        elif b.k < a.k:
            b = b.raise_degree(a.k - b.k)
        coeffs = dict(a.coeffs)
        for alpha, c in b.coeffs.items():
            coeffs[alpha] = coeffs.get(alpha, 0) + c
        return BernsteinPoly(coeffs, a.n, a.k, self.geometry)

    def __neg__(self):
        return BernsteinPoly({a: -c for a, c in self.coeffs.items()}, self.n, self.k, self.geometry)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BernsteinPoly):
            self._compatible(other)
            coeffs = {}
            for a, c in self.coeffs.items():
                for b, d in other.coeffs.items():
                    ab = tuple(x + y for x, y in zip(a, b))
                    coeffs[ab] = coeffs.get(ab, 0) + c*d
            return BernsteinPoly(coeffs, self.n, self.k + other.k, self.geometry)
        c = as_fraction(other)
        return BernsteinPoly({a: c*x for a, x in self.coeffs.items()}, self.n, self.k, self.geometry)

    __rmul__ = __mul__

    def __eq__(self, other):
        """ equality as functions: degrees are raised to match """
        if not isinstance(other, BernsteinPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other):
        return not self == other

    def raise_degree(self, j=1):
        if j == 0:
            return self
        return self*constant(1, self.n, j)

    def __repr__(self):
        return 'BernsteinPoly(n={}, k={}, {} terms)'.format(self.n, self.k, len(self.coeffs))


def constant(c, n, k=0, geometry=None):
    """ c = c (sum_i lambda_i)^k = sum_alpha c k!/alpha! lambda^alpha """
    c = as_fraction(c)
    kf = factorial(k)
    coeffs = {a: c*kf/multi_factorial(a) for a in sums(n + 1, k)}
    return BernsteinPoly(coeffs, n, k, geometry)


def monomial(a, geometry=None):
    a = tuple(a)
    return BernsteinPoly({a: 1}, len(a) - 1, sum(a), geometry)


def linear_form(values, geometry=None):
    """ the affine function taking values[i] at vertex i """
    n = len(values) - 1
    coeffs = {}
    for i, v in enumerate(values):
        e = [0]*(n + 1)
        e[i] = 1
        coeffs[tuple(e)] = v
    return BernsteinPoly(coeffs, n, 1, geometry)


def evaluate(p, lam):
    lam = [as_fraction(x) for x in lam]
    if len(lam) != p.n + 1:
        raise InvalidArgument('expected {} barycentric coordinates, got {}'.format(p.n + 1, len(lam)))
    total = Fraction(0)
    for a, c in p.coeffs.items():
        term = c
        for l, e in zip(lam, a):
            if e:
                term *= l**e
        total += term
    return total


def evaluate_float(p, lam):
    """ lam: (npoints, n+1) float array """
    lam = np.atleast_2d(np.asarray(lam, dtype=np.float64))
    out = np.zeros(lam.shape[0])
    for a, c in p.coeffs.items():
        out += float(c)*np.prod(lam**np.array(a), axis=1)
    return out


def directional_derivative(p, v, geometry=None):
    """ D_v lambda^alpha = sum_i alpha_i (grad lambda_i . v) lambda^{alpha - e_i} """
    g = geometry if geometry is not None else p.geometry
    if g is None:
        raise InvalidArgument('directional derivative needs a simplex geometry')
    if p.k == 0:
        return BernsteinPoly({}, p.n, 0, g)
    grads = g.barycentric_gradients()
    v = [as_fraction(x) for x in v]
    slopes = [dot(gr, v) for gr in grads]
    return _derivative_by_slopes(p, slopes, g)


def _derivative_by_slopes(p, slopes, g=None):
    coeffs = {}
    for a, c in p.coeffs.items():
        for i, x in enumerate(a):
            if x == 0 or slopes[i] == 0:
                continue
            b = a[:i] + (x - 1,) + a[i+1:]
            coeffs[b] = coeffs.get(b, 0) + c*x*slopes[i]
    return BernsteinPoly(coeffs, p.n, p.k - 1, g)


def derivative(p, directions, beta, geometry=None):
    """ D^beta along the given direction vectors: prod_j D_{directions[j]}^{beta_j} """
    for v, b in zip(directions, beta):
        for _ in range(b):
            p = directional_derivative(p, v, geometry)
    return p


def cartesian_derivative(p, gamma, geometry=None):
    n = len(gamma)
    axes = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    return derivative(p, axes, gamma, geometry)


def trace_restrict(p, f, geometry=None):
    """ restriction to the face f: lambda_i vanishes there for i in f* """
    fstar = complement(f).indices
    inside = f.indices
    coeffs = {}
    for a, c in p.coeffs.items():
        if any(a[i] for i in fstar):
            continue
        coeffs[tuple(a[i] for i in inside)] = c
    return BernsteinPoly(coeffs, f.dim, p.k, geometry)


## moments and integration

def moment(alpha):
    """ normalized moment: (1/|f|) int_f lambda^alpha = alpha! ell! / (|alpha| + ell)! """
    alpha = tuple(alpha)
    ell = len(alpha) - 1
    return Fraction(multi_factorial(alpha)*factorial(ell), factorial(sum(alpha) + ell))


def normalized_integral(p):
    """ (1/|T|) int_T p """
    return sum((c*moment(a) for a, c in p.coeffs.items()), Fraction(0))


def integrate_face(alpha_f, g):
    """
    int_f lambda^alpha as the rational coefficient of sqrt(s), where
    g.measure_parts() == (r, s). Faces with a rational measure have s == 1
    and the result is the integral itself; otherwise sqrt(s) is a positive
    scale shared by every integral over the face.
    """
    r, _ = g.measure_parts()
    return moment(alpha_f)*r


def integrate(p, g):
    return normalized_integral(p)*g.measure()


## Cartesian input

def from_cartesian(poly, g, k):
    """
    {exponents: coefficient} in the Cartesian coordinates x_1..x_n to Bernstein
    form of degree k on g, using x_j = sum_i (v_i)_j lambda_i.
    """
    n = g.ell
    coords = [linear_form([v[j] for v in g.vertices], g) for j in range(g.d)]
    result = BernsteinPoly({}, n, k, g)
    for gamma, c in poly.items():
        gamma = tuple(int(x) for x in gamma)
        if len(gamma) != g.d or min(gamma) < 0:
            raise InvalidArgument('bad exponent vector ' + str(gamma))
        if sum(gamma) > k:
            raise InvalidArgument('monomial of degree {} exceeds k = {}'.format(sum(gamma), k))
        term = constant(c, n, 0, g)
        for j, e in enumerate(gamma):
            for _ in range(e):
                term = term*coords[j]
        result = result + term.raise_degree(k - term.k)
    result.geometry = g
    return result


def evaluate_cartesian(poly, x):
    total = Fraction(0)
    for gamma, c in poly.items():
        term = as_fraction(c)
        for xj, e in zip(x, gamma):
            term *= as_fraction(xj)**e
        total += term
    return total


## normal frames

NormalFrame = namedtuple('NormalFrame', ['face', 'vectors', 'kind'])

DUAL = 'dual'
CANONICAL = 'canonical'


def dual_normal_frame(f, g):
    """
    n^1..n^{n-ell} orthogonal to the tangents of f with
    grad lambda_{f*(i)} . n^j = delta_ij.
    """
    if f.is_full():
        raise InvalidArgument('the full simplex has no normal frame')
    n = g.ell
    grads = g.barycentric_gradients()
    base = g.vertices[f.indices[0]]
    rows = [[a - b for a, b in zip(g.vertices[i], base)] for i in f.indices[1:]]
    fstar = complement(f).indices
    rows += [list(grads[i]) for i in fstar]
    lu = lu_factor(fraction_matrix(rows))
    ell = f.dim
    vectors = []
    for j in range(len(fstar)):
        rhs = [Fraction(0)]*n
        rhs[ell + j] = Fraction(1)
        vectors.append(tuple(lu_solve(lu, rhs)))
    return NormalFrame(f, vectors, DUAL)


def canonical_normal_frame(face_geometry):
    """
    Reduced row echelon basis of the null space of the tangent matrix, built
    from the face's own vertex coordinates (callers pass them sorted by global id).
    """
    fg = face_geometry
    if fg.ell >= fg.d:
        raise InvalidArgument('a full dimensional simplex has no normal frame')
    vectors = null_space(fg.edges, n_cols=fg.d)
    return NormalFrame(None, [tuple(v) for v in vectors], CANONICAL)


## floating point oracles

def simplex_quadrature(n, degree):
    """
    Collapsed Gauss-Legendre rule on the n-simplex, exact for degree <= degree.
    Returns (barycentric points, weights) with weights summing to one.
    """
    q = (degree + n) // 2 + 1
    t, w = np.polynomial.legendre.leggauss(q)
    t = (t + 1)/2
    w = w/2
    if n == 0:
        return np.ones((1, 1)), np.ones(1)
    grids = np.meshgrid(*([t]*n), indexing='ij')
    wgrids = np.meshgrid(*([w]*n), indexing='ij')
    u = np.stack([gr.ravel() for gr in grids], axis=1)
    weights = np.prod(np.stack([gr.ravel() for gr in wgrids], axis=1), axis=1)
    x = np.zeros_like(u)
    rest = np.ones(u.shape[0])
    for i in range(n):
        x[:, i] = rest*u[:, i]
        weights = weights*(1 - u[:, i])**(n - 1 - i)
        rest = rest*(1 - u[:, i])
    lam = np.concatenate([rest[:, None], x], axis=1)
    weights = weights*factorial(n)
    return lam, weights
