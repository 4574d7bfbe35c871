import itertools
from fractions import Fraction

import numpy as np
import pytest

from src.lattice import SubSimplex, all_sub_simplices, complement, dist_to_face, enumerate_lattice, extend, sums
from src.bernstein import (BernsteinPoly, IrrationalMeasure, SimplexGeometry, SingularGeometry,
                           canonical_normal_frame, cartesian_derivative, constant, derivative,
                           directional_derivative, dual_normal_frame, evaluate, evaluate_cartesian,
                           evaluate_float, from_cartesian, integrate, integrate_face, moment, monomial,
                           multi_factorial, reference_simplex, simplex_quadrature, square_split,
                           trace_restrict)
from src.rational import dot


def random_simplex(random, n):
    while True:
        num = random.randint(-4, 5, size=(n + 1, n))
        den = random.randint(1, 4, size=(n + 1, n))
        vertices = [[Fraction(int(p), int(q)) for p, q in zip(rp, rq)] for rp, rq in zip(num, den)]
        try:
            return SimplexGeometry(vertices)
        except SingularGeometry:
            continue


def random_poly(random, n, k, g):
    coeffs = {a: Fraction(int(random.randint(-5, 6)), int(random.randint(1, 4))) for a in sums(n + 1, k)}
    return BernsteinPoly(coeffs, n, k, g)


def proper_faces(n):
    return [f for f in all_sub_simplices(n) if not f.is_full()]


def test_reference_gradients():
    g = reference_simplex(2)
    assert g.barycentric_gradients() == [(-1, -1), (1, 0), (0, 1)]
    assert g.measure() == Fraction(1, 2)


@pytest.mark.parametrize('n', [1, 2, 3])
def test_gradients_on_random_simplices(n):
    random = np.random.RandomState(n)
    for trial in range(5):
        g = random_simplex(random, n)
        grads = g.barycentric_gradients()
        assert all(sum(gr[j] for gr in grads) == 0 for j in range(n))
        for j, v in enumerate(g.vertices):
            assert g.barycentric(v) == tuple(int(i == j) for i in range(n + 1))
            for i in range(1, n + 1):
                assert dot(grads[i], [x - y for x, y in zip(g.vertices[i], g.vertices[0])]) == 1


def test_degenerate_simplex():
    with pytest.raises(SingularGeometry):
        SimplexGeometry([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(SingularGeometry):
        SimplexGeometry([(0,), (1,), (2,)])


def test_evaluate():
    n, k = 2, 3
    for i in range(n + 1):
        at_vertex = tuple(int(j == i) for j in range(n + 1))
        for a in enumerate_lattice(n, k):
            expected = 1 if a == tuple(k*x for x in at_vertex) else 0
            assert evaluate(monomial(a), at_vertex) == expected

    lam = (Fraction(1, 7), Fraction(2, 7), Fraction(4, 7))
    assert evaluate(constant(1, 2, 4), lam) == 1
    assert evaluate(constant(Fraction(3, 2), 2, 2), lam) == Fraction(3, 2)

    third = (Fraction(1, 3),)*3
    assert evaluate(monomial((1, 1, 0)), third) == Fraction(1, 9)


def test_directional_derivative():
    g = reference_simplex(2)
    p = monomial((0, 1, 0), g)
    assert directional_derivative(p, (1, 0)) == constant(1, 2, 0)
    assert directional_derivative(p, (0, 1)).is_zero()
    assert directional_derivative(constant(3, 2, 2, g), (1, 2)).is_zero()

    # d/dx of x^2 = 2x, x = lambda_1
    q = monomial((0, 2, 0), g)
    assert cartesian_derivative(q, (1, 0)) == monomial((0, 1, 0), g)*2


TRACE_GRID = [(n, k) if n < 3 or k <= 6 else pytest.param(n, k, marks=pytest.mark.slow)
              for n in (1, 2, 3) for k in range(1, 10)]


@pytest.mark.parametrize('n,k', TRACE_GRID)
def test_low_order_traces_vanish_exhaustive(n, k):
    """ dist(alpha, f) > |beta| makes the trace of D^beta lambda^alpha on f vanish """
    g = random_simplex(np.random.RandomState(5), n)
    top = 3
    faces = proper_faces(n)
    for a in enumerate_lattice(n, k):
        near = [(f, dist_to_face(a, f)) for f in faces]
        near = [(f, s) for f, s in near if 1 <= s <= top + 1]
        if not near:
            continue
        derivs = {(0,)*n: monomial(a, g)}
        for order in range(1, top + 1):
            for beta in sums(n, order):
                j = next(i for i, x in enumerate(beta) if x > 0)
                lower = beta[:j] + (beta[j] - 1,) + beta[j+1:]
                axis = tuple(int(i == j) for i in range(n))
                derivs[beta] = directional_derivative(derivs[lower], axis)
        for f, s in near:
            for beta, p in derivs.items():
                if sum(beta) < s:
                    assert trace_restrict(p, f).is_zero(), (a, f, beta)


def test_low_order_traces_vanish_random():
    random = np.random.RandomState(11)
    geometries = {n: random_simplex(random, n) for n in (1, 2, 3)}
    checked = 0
    while checked < 1000:
        n = random.randint(1, 4)
        k = random.randint(1, 10)
        nodes = enumerate_lattice(n, k).nodes
        a = nodes[random.randint(len(nodes))]
        faces = proper_faces(n)
        f = faces[random.randint(len(faces))]
        s = dist_to_face(a, f)
        if s == 0:
            continue
        order = random.randint(0, s)
        betas = list(sums(n, order))
        beta = betas[random.randint(len(betas))]
        g = geometries[n]
        frame = [tuple(random.randint(-3, 4, size=n)) for _ in range(n)]
        p = derivative(monomial(a, g), frame, beta)
        assert trace_restrict(p, f).is_zero()
        checked += 1


@pytest.mark.parametrize('n', [2, 3])
def test_normal_derivative_duality(n):
    """ D^beta along the dual frame of f applied to lambda_{f*}^alpha is beta! delta """
    random = np.random.RandomState(20 + n)
    for trial in range(10):
        g = random_simplex(random, n)
        for f in proper_faces(n):
            fstar = complement(f)
            frame = dual_normal_frame(f, g).vectors
            for s in range(5):
                indices = list(sums(len(fstar), s))
                for alpha, beta in itertools.product(indices, repeat=2):
                    p = derivative(monomial(extend(alpha, fstar), g), frame, beta)
                    assert p.k == 0
                    expected = multi_factorial(beta) if alpha == beta else 0
                    assert p[(0,)*(n + 1)] == expected, (f, alpha, beta)


def test_trace_restrict():
    f = SubSimplex((0, 2), 2)
    p = monomial(extend((2, 1), f))
    assert trace_restrict(p, f).coeffs == {(2, 1): 1}

    bubble = monomial((1, 1, 1))
    for face in proper_faces(2):
        assert trace_restrict(bubble, face).is_zero()


def test_trace_commutes_with_evaluation():
    random = np.random.RandomState(2)
    n, k = 3, 3
    p = random_poly(random, n, k, None)
    for f in proper_faces(n):
        for trial in range(3):
            weights = [Fraction(int(x)) for x in random.randint(1, 6, size=len(f))]
            lam_f = [w/sum(weights) for w in weights]
            lam = [Fraction(0)]*(n + 1)
            for i, x in zip(f.indices, lam_f):
                lam[i] = x
            assert evaluate(trace_restrict(p, f), lam_f) == evaluate(p, lam)


def test_integrals():
    segment = SimplexGeometry([(0,), (1,)])
    assert integrate_face((1, 1), segment) == Fraction(1, 6)
    assert integrate_face((0, 0), segment) == 1

    triangle = SimplexGeometry([(0, 0), (2, 0), (0, 1)])
    assert triangle.measure() == 1
    assert integrate_face((2, 0, 0), triangle) == Fraction(1, 6)
    assert integrate(constant(5, 2, 3), triangle) == 5

    assert moment((0, 0, 0)) == 1
    assert moment((1, 0, 0)) == Fraction(1, 3)


def test_face_measures():
    assert SimplexGeometry([(0, 0), (3, 4)]).measure() == 5
    assert SimplexGeometry([(0, 0, 0), (2, 0, 0), (0, 2, 0)]).measure() == 2
    with pytest.raises(IrrationalMeasure):
        SimplexGeometry([(0, 0), (1, 1)]).measure()


def test_square_split():
    assert square_split(1) == (1, 1)
    assert square_split(12) == (2, 3)
    assert square_split(7*7*11) == (7, 11)
    assert square_split(13*13) == (13, 1)
    assert square_split(2*3*5*101) == (1, 3030)


def test_tilted_face_integrals():
    diagonal = SimplexGeometry([(0, 0), (1, 1)])
    assert diagonal.measure_parts() == (1, 2)
    assert integrate_face((1, 1), diagonal) == Fraction(1, 6)

    long_diagonal = SimplexGeometry([(0, 0), (2, 2)])
    assert long_diagonal.measure_parts() == (2, 2)
    assert integrate_face((0, 0), long_diagonal) == 2

    assert SimplexGeometry([(0, 0), (3, 4)]).measure_parts() == (5, 1)

    # area sqrt(2)/2
    slanted = SimplexGeometry([(0, 0, 0), (1, 0, 0), (0, 1, 1)])
    r, s = slanted.measure_parts()
    assert (r, s) == (Fraction(1, 2), 2)
    assert float(integrate_face((1, 0, 0), slanted))*s**0.5 == pytest.approx(2**0.5/6, rel=1e-12)


@pytest.mark.parametrize('n', [1, 2, 3])
def test_moments_against_quadrature(n):
    degree = 6
    lam, weights = simplex_quadrature(n, degree)
    assert weights.sum() == pytest.approx(1, rel=1e-13)
    for s in range(degree + 1):
        for a in sums(n + 1, s):
            approx = np.sum(weights*evaluate_float(monomial(a), lam))
            assert approx == pytest.approx(float(moment(a)), rel=1e-12)


FD_SIMPLICES = [
    [(0, 0), (3, Fraction(1, 2)), (Fraction(1, 3), 2)],
    [(0, 0, 0), (2, 0, 0), (Fraction(1, 2), Fraction(3, 2), 0), (Fraction(1, 3), Fraction(1, 2), 2)],
]


@pytest.mark.parametrize('vertices', FD_SIMPLICES)
def test_derivatives_against_finite_differences(vertices):
    random = np.random.RandomState(7)
    g = SimplexGeometry(vertices)
    n = g.ell
    p = random_poly(random, n, 4, g)
    V = g.as_float()
    grads = np.array([[float(x) for x in gr] for gr in g.barycentric_gradients()])

    def bary(x):
        lam = grads[1:].dot((x - V[0]).T).T
        return np.concatenate([1 - lam.sum(axis=1, keepdims=True), lam], axis=1)

    x = random.dirichlet(np.ones(n + 1), size=100).dot(V)
    h = 1e-5
    for j in range(n):
        gamma = tuple(int(i == j) for i in range(n))
        exact = evaluate_float(cartesian_derivative(p, gamma), bary(x))
        step = np.zeros(n)
        step[j] = h
        fd = (evaluate_float(p, bary(x + step)) - evaluate_float(p, bary(x - step)))/(2*h)
        assert np.max(np.abs(exact - fd)) < 1e-6


def test_dual_frames():
    g = reference_simplex(2)
    assert dual_normal_frame(SubSimplex((0, 1), 2), g).vectors == [(0, 1)]
    assert dual_normal_frame(SubSimplex((0,), 2), g).vectors == [(1, 0), (0, 1)]

    random = np.random.RandomState(4)
    g = random_simplex(random, 3)
    for v in range(4):
        frame = dual_normal_frame(SubSimplex((v,), 3), g).vectors
        others = [i for i in range(4) if i != v]
        assert frame == [tuple(x - y for x, y in zip(g.vertices[i], g.vertices[v])) for i in others]
    for f in proper_faces(3):
        frame = dual_normal_frame(f, g).vectors
        assert len(frame) == 3 - f.dim
        base = g.vertices[f.indices[0]]
        for i in f.indices[1:]:
            tangent = [x - y for x, y in zip(g.vertices[i], base)]
            assert all(dot(tangent, nv) == 0 for nv in frame)


def test_canonical_frames():
    edge = SimplexGeometry([(0, 0), (2, 0)])
    assert canonical_normal_frame(edge).vectors == [(0, 1)]

    random = np.random.RandomState(9)
    g = random_simplex(random, 3)
    for f in proper_faces(3):
        fg = g.face(f)
        frame = canonical_normal_frame(fg).vectors
        assert frame == canonical_normal_frame(g.face(f)).vectors
        assert len(frame) == 3 - f.dim
        for row in fg.edges:
            assert all(dot(row, nv) == 0 for nv in frame)


def test_from_cartesian():
    g = reference_simplex(2)
    assert from_cartesian({(1, 0): 1}, g, 1) == monomial((0, 1, 0), g)
    assert from_cartesian({(0, 0): 2}, g, 3) == constant(2, 2, 3)

    g = SimplexGeometry(FD_SIMPLICES[0])
    poly = {(2, 1): Fraction(1, 2), (0, 3): -1, (1, 0): 3}
    p = from_cartesian(poly, g, 4)
    x = (Fraction(1, 5), Fraction(2, 3))
    assert evaluate(p, g.barycentric(x)) == evaluate_cartesian(poly, x)
