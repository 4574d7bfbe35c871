from collections import Counter
from fractions import Fraction

import pytest

from src.lattice import InvalidArgument, SubSimplex, binomial, full_simplex
from src.decomp import ConstraintViolation, hermite_decomposition
from src.bernstein import CANONICAL, SimplexGeometry, monomial, reference_simplex
from src.rational import identity_matrix, matmul
from src.dof import (FACE, INTERIOR, VERTEX, ElementSpec, NotUnisolvent, apply_dof, build_dofs,
                     check_block_triangular, check_unisolvence, dimension_agrees, dimension_table,
                     dof_matrix, dual_basis, frame_change, piece_dimension_formula,
                     smooth2d_index_sets, sort_key)


SKEW_TRIANGLE = SimplexGeometry([(0, 0), (3, Fraction(1, 2)), (Fraction(1, 3), 2)])
SKEW_TETRAHEDRON = SimplexGeometry([(0, 0, 0), (2, 0, 0), (Fraction(1, 2), Fraction(3, 2), 0),
                                    (Fraction(1, 3), Fraction(1, 2), 2)])

ARGYRIS = ElementSpec.from_preset('argyris')


def lagrange_specs():
    return [ElementSpec('lagrange', n, k) for n in (1, 2, 3) for k in (1, 2, 3, 4)]


def hermite_specs():
    return [ElementSpec('hermite', n, 2*m + 1, m=m) for n in (1, 2, 3) for m in (0, 1, 2)]


def smooth_specs():
    return [ARGYRIS, ElementSpec.from_preset('bz2'), ElementSpec.from_preset('neilan')]


def spec_id(spec):
    return repr(spec)


def test_element_spec_validation():
    assert ARGYRIS.m == 1
    assert ARGYRIS.orders() == (2, 1, 0)
    assert ElementSpec('hermite', 3, 3, m=1).orders() == (1, 0, 0, 0)
    assert ElementSpec('smooth2d', 2, 9, m=2).r.r == (4, 2, 0)
    with pytest.raises(InvalidArgument):
        ElementSpec('morley', 2, 2)
    with pytest.raises(InvalidArgument):
        ElementSpec('smooth2d', 3, 9, m=1)
    with pytest.raises(InvalidArgument):
        ElementSpec('smooth', 2, 5, r=(2, 1, 0, 0))
    with pytest.raises(ConstraintViolation) as e:
        ElementSpec('smooth', 2, 5, r=(1, 1, 0))
    assert e.value.violations == ['r_0 >= 2 r_1']
    with pytest.raises(ConstraintViolation):
        ElementSpec('smooth', 2, 5, m=0, r=(2, 1, 0))
    with pytest.raises(ConstraintViolation):
        ElementSpec('hermite', 2, 2, m=1)


def test_argyris_dofs():
    dofs = build_dofs(ARGYRIS)
    assert len(dofs) == 21
    owners = Counter(d.owner.indices for d in dofs)
    assert [owners[(v,)] for v in range(3)] == [6, 6, 6]
    assert [owners[e] for e in [(0, 1), (0, 2), (1, 2)]] == [1, 1, 1]
    assert Counter(d.kind for d in dofs) == {VERTEX: 18, FACE: 3}
    assert dofs == sorted(dofs, key=sort_key)

    edge = [d for d in dofs if d.kind == FACE][0]
    assert edge.owner == SubSimplex((0, 1), 2)
    assert (edge.s, edge.beta, edge.weight, edge.node) == (1, (1,), (2, 2), (2, 2, 1))


def test_dof_counts():
    assert len(build_dofs(ElementSpec('lagrange', 2, 2))) == 6

    dofs = build_dofs(ElementSpec.from_preset('zhang3d'))
    assert len(dofs) == 220
    assert Counter(d.owner.indices for d in dofs)[(0,)] == 35

    dofs = build_dofs(ElementSpec('lagrange', 2, 3))
    interior = [d for d in dofs if d.kind == INTERIOR]
    assert [(d.node, d.weight) for d in interior] == [((1, 1, 1), (0, 0, 0))]


def test_apply_dof_values():
    spec = ElementSpec('smooth', 2, 5, r=(2, 1, 0))
    g = reference_simplex(2)
    dofs = build_dofs(spec, g)
    value = [d for d in dofs if d.owner.indices == (0,) and d.s == 0][0]
    assert apply_dof(value, monomial((5, 0, 0), g)) == 1
    assert apply_dof(value, monomial((4, 1, 0), g)) == 0

    # normal moment on the edge {0,1} against lambda^alpha two away from the edge
    edge = [d for d in dofs if d.kind == FACE and d.owner.indices == (0, 1)][0]
    assert apply_dof(edge, monomial((2, 1, 2), g)) == 0

    lagrange = build_dofs(ElementSpec('lagrange', 2, 3), g)
    bubble = [d for d in lagrange if d.kind == INTERIOR][0]
    assert apply_dof(bubble, monomial((1, 1, 1), g)) > 0


@pytest.mark.parametrize('spec,g', [(ARGYRIS, SKEW_TRIANGLE),
                                    (ElementSpec('hermite', 3, 3, m=1), SKEW_TETRAHEDRON),
                                    (ElementSpec('smooth', 3, 5, r=(2, 1, 0, 0)), SKEW_TETRAHEDRON)])
def test_covectors_match_direct_application(spec, g):
    dm = dof_matrix(spec, g)
    for i, d in enumerate(dm.dofs):
        for j, a in enumerate(dm.nodes):
            assert dm.matrix[i, j] == apply_dof(d, monomial(a, g), g), (d, a)


def test_lagrange_p1_matrix():
    dm = dof_matrix(ElementSpec('lagrange', 1, 1))
    assert (dm.matrix == identity_matrix(2)).all()


@pytest.mark.parametrize('spec', lagrange_specs() + hermite_specs() + smooth_specs(), ids=spec_id)
def test_unisolvence(spec):
    report = check_unisolvence(spec)
    assert report.invertible
    assert report.dimension == binomial(spec.n + spec.k, spec.k)
    assert report.determinant != 0


@pytest.mark.parametrize('spec', [ElementSpec('lagrange', 2, 4), ElementSpec('hermite', 3, 3, m=1)] + smooth_specs(),
                         ids=spec_id)
def test_fraction_free_determinant_agrees(spec):
    g = SKEW_TRIANGLE if spec.n == 2 else SKEW_TETRAHEDRON
    lu = check_unisolvence(spec, g)
    bareiss = check_unisolvence(spec, g, elimination='bareiss')
    assert bareiss.determinant == lu.determinant != 0
    with pytest.raises(InvalidArgument):
        check_unisolvence(spec, elimination='gauss')


@pytest.mark.parametrize('spec', [ARGYRIS, ElementSpec('hermite', 2, 3, m=1), ElementSpec('lagrange', 3, 3)],
                         ids=spec_id)
def test_unisolvence_on_skewed_cells(spec):
    g = SKEW_TRIANGLE if spec.n == 2 else SKEW_TETRAHEDRON
    assert check_unisolvence(spec, g).invertible
    assert check_unisolvence(spec, g, frame_policy=CANONICAL).invertible


@pytest.mark.slow
def test_unisolvence_zhang3d():
    report = check_unisolvence(ElementSpec.from_preset('zhang3d'))
    assert report.dimension == 220
    assert report.invertible


def test_float_path_agrees():
    assert check_unisolvence(ARGYRIS, exact=False).invertible
    report = check_unisolvence(ElementSpec('smooth', 4, 5, r=(2, 1, 0, 0, 0)), exact=False)
    assert report.dimension == 126
    assert report.invertible
    assert report.determinant is None


@pytest.mark.parametrize('spec', lagrange_specs() + hermite_specs() + smooth_specs(), ids=spec_id)
def test_block_triangular(spec):
    report = check_block_triangular(spec)
    assert report.holds, report.violations[:3]
    assert sum(b[1] for b in report.blocks) == binomial(spec.n + spec.k, spec.k)


def test_argyris_blocks():
    report = check_block_triangular(ARGYRIS, SKEW_TRIANGLE)
    assert report.holds
    assert [(b[0], b[1], b[3]) for b in report.blocks] == [
        ((0,), 6, True), ((1,), 6, True), ((2,), 6, True),
        ((0, 1), 1, True), ((0, 2), 1, True), ((1, 2), 1, True)]


@pytest.mark.slow
def test_block_triangular_zhang3d():
    assert check_block_triangular(ElementSpec.from_preset('zhang3d')).holds


def test_wrong_vertex_radius_is_witnessed():
    # vertex disks of radius 1 against DoFs that need radius 2
    report = check_block_triangular(ARGYRIS, columns=hermite_decomposition(2, 5, 1))
    assert not report.holds
    assert len(report.violations) > 0
    d, node, value = report.violations[0]
    assert d.kind == VERTEX and value != 0


def test_frame_change_is_block_diagonal():
    for spec, g in [(ARGYRIS, SKEW_TRIANGLE), (ElementSpec.from_preset('neilan'), SKEW_TETRAHEDRON)]:
        T, block_diagonal = frame_change(spec, g)
        assert block_diagonal
        assert T.shape == (spec.dimension(), spec.dimension())


def test_dual_basis_p1():
    basis = dual_basis(ElementSpec('lagrange', 2, 1))
    assert (basis.coefficients == identity_matrix(3)).all()
    assert basis.polynomial(1) == monomial((0, 1, 0))


def test_dual_basis_argyris():
    dm = dof_matrix(ARGYRIS, SKEW_TRIANGLE)
    basis = dual_basis(ARGYRIS, SKEW_TRIANGLE)
    assert (matmul(dm.matrix, basis.coefficients) == identity_matrix(21)).all()
    for i in range(len(basis)):
        psi = basis.polynomial(i)
        for j, d in enumerate(basis.dofs):
            assert apply_dof(d, psi, SKEW_TRIANGLE) == int(i == j)

    values = [Fraction(j, 7) for j in range(21)]
    p = basis.combine(values)
    assert [apply_dof(d, p, SKEW_TRIANGLE) for d in basis.dofs] == values


def test_tangential_edge_dof_is_not_unisolvent():
    g = reference_simplex(2)
    with pytest.raises(NotUnisolvent):
        dual_basis(ARGYRIS, g, frames={SubSimplex((0, 1), 2): [(1, 0)]})


def test_smooth2d_index_sets():
    for m in (1, 2):
        for r0 in (2*m, 2*m + 1, 2*m + 2):
            for k in range(2*r0 + 1, 2*r0 + 4):
                spec = ElementSpec('smooth2d', 2, k, r=(r0, m, 0))
                d = spec.decomposition()
                edge, interior = smooth2d_index_sets(k, r0, m)
                assert sum(len(nodes) for nodes in edge.values()) == len(d[SubSimplex((0, 1), 2)])
                assert len(interior) == len(d[full_simplex(2)])
                assert sum(len(nodes) for nodes in edge.values()) == piece_dimension_formula(spec, 1)
                assert len(interior) == piece_dimension_formula(spec, 2)


def test_dimension_tables():
    table = dimension_table(ElementSpec('hermite', 2, 3, m=1))
    assert list(table['total']) == [9, 0, 1]
    assert dimension_agrees(table)

    table = dimension_table(ElementSpec.from_preset('bz1'))
    assert list(table['total']) == [18, 3, 0]

    table = dimension_table(ElementSpec.from_preset('bz2'))
    assert list(table['total']) == [45, 9, 1]
    assert dimension_agrees(table)

    table = dimension_table(ElementSpec('lagrange', 2, 3))
    assert list(table['total']) == [3, 6, 1]

    assert dimension_table(ElementSpec('lagrange', 3, 4))['total'].sum() == 35
    assert dimension_table(ElementSpec('hermite', 3, 3, m=1))['total'].sum() == 20

    # mesh face counts of two triangles
    table = dimension_table(ARGYRIS, counts=[4, 5, 2])
    assert table['total'].sum() == 29


def test_dimension_formulas_match_enumeration():
    specs = [ElementSpec('hermite', n, k, m=m) for n in (1, 2, 3) for m in (0, 1, 2) for k in range(2*m + 1, 2*m + 4)]
    specs += [ElementSpec('smooth', 2, k, r=(r0, m, 0)) for m in (0, 1, 2) for r0 in (2*m, 2*m + 1)
              for k in range(2*r0 + 1, 2*r0 + 4)]
    for spec in specs:
        assert dimension_agrees(dimension_table(spec)), spec


def test_three_dimensional_smooth_formula_is_partial():
    table = dimension_table(ElementSpec.from_preset('zhang3d'))
    assert table['per_face_formula'][0] == 35
    assert table['per_face_formula'].isna().sum() == 3
    assert dimension_agrees(table)
    assert table['total'].sum() == 220
