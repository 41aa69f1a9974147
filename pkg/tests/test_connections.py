import itertools
from math import sqrt

import numpy as np
import pytest

from conftest import ni_alpha
from so3ir import catalog
from so3ir.algebra import invariant_forms
from so3ir.connections import (
    ConnectionMap,
    characteristic_connection,
    covariant_derivative,
    curvature,
    equivariant_wang_maps,
    exterior_derivative,
    holonomy_algebra,
    is_naturally_reductive,
    torsion,
    torsion_divergence,
    torsion_type_decomposition,
)
from so3ir.errors import SpaceInputError
from so3ir.forms import basis_form, form_to_skew, frob, hodge3, max_abs, wedge
from so3ir.riemannian import levi_civita

E123 = basis_form((0, 1, 2))
E145 = basis_form((0, 3, 4))


def _ansatz_maps(space, triple):
    """The three-parameter family L(e1)=a*m3, L(e2)=b*m1-c*m2, L(e3)=c*m1+b*m2."""
    m1, m2, m3 = triple
    out = []
    for a, b, c in np.eye(3):
        lam = np.zeros((5, 5, 5))
        lam[0] = a * m3
        lam[1] = b * m1 - c * m2
        lam[2] = c * m1 + b * m2
        out.append(ConnectionMap(space, lam))
    return out


def _same_span(maps_a, maps_b, tol=1e-9):
    va = np.stack([m.lambdas.reshape(-1) for m in maps_a])
    vb = np.stack([m.lambdas.reshape(-1) for m in maps_b])
    for target, span in ((va, vb), (vb, va)):
        for row in target:
            coef, *_ = np.linalg.lstsq(span.T, row, rcond=None)
            if max_abs(span.T @ coef - row) > tol:
                return False
    return True


def test_equivariant_maps_vir24(v511, bases):
    maps = equivariant_wang_maps(v511, bases["X"])
    assert len(maps) == 3
    assert all(m.equivariance_residual() < 1e-9 for m in maps)
    assert _same_span(maps, _ansatz_maps(v511, bases["X"]))


def test_equivariant_maps_wir(w_space, bases):
    maps = equivariant_wang_maps(w_space, bases["Y"])
    assert len(maps) == 3
    assert _same_span(maps, _ansatz_maps(w_space, bases["Y"]))


def test_equivariant_maps_trivial_target(v511):
    maps = equivariant_wang_maps(v511, [])
    assert len(maps) == 1
    assert max_abs(maps[0].lambdas) == 0.0


def test_zero_map_torsion_is_canonical(v511):
    t = torsion(v511, ConnectionMap(v511, np.zeros((5, 5, 5))))
    assert max_abs(t.components + v511.brackets_m) < 1e-14


def test_torsion_pair_antisymmetry_random(v511, bases):
    rng = np.random.default_rng(7)
    maps = equivariant_wang_maps(v511, bases["X"])
    for _ in range(10):
        coef = rng.standard_normal(3)
        lam = sum(c * m.lambdas for c, m in zip(coef, maps))
        t = torsion(v511, ConnectionMap(v511, lam))
        assert t.pair_antisymmetry_residual() < 1e-12


def test_characteristic_connection_vir24(v511, v111, bases):
    res = characteristic_connection(v511, bases["X"])
    assert res.exists and res.unique
    assert max_abs(res.connection.lambdas) < 1e-12  # canonical connection
    expected = (2 * sqrt(5) / 5) * E123 - (sqrt(5) / 5) * E145
    assert max_abs(res.torsion.components - expected) < 1e-12
    assert res.torsion.totally_antisymmetric

    res_none = characteristic_connection(v111, bases["X"])
    assert not res_none.exists
    assert res_none.residual > 1e-3


def test_characteristic_connection_vtilde(vtilde, bases):
    res = characteristic_connection(vtilde, bases["X"])
    assert res.exists
    expected = -(2 * sqrt(125) / 25) * E123 - (sqrt(125) / 5) * E145
    assert max_abs(res.torsion.components - expected) < 1e-9


def test_characteristic_connection_wir_needs_y_basis(w_space, bases):
    assert not characteristic_connection(w_space, bases["X"]).exists
    res = characteristic_connection(w_space, bases["Y"])
    assert res.exists and res.unique
    expected = -2.0 * sqrt(3.0) * (E123 + E145)
    assert max_abs(res.torsion.components - expected) < 1e-9
    y1, y2, y3 = bases["Y"]
    assert max_abs(res.connection.lambdas[1] + y2) < 1e-9
    assert max_abs(res.connection.lambdas[2] - y1) < 1e-9
    a = -sqrt(3.0) - 1.0 / sqrt(12.0)
    assert max_abs(res.connection.lambdas[0] - a * y3) < 1e-9


def test_characteristic_rejects_non_subalgebra(v511):
    from so3ir.forms import E

    with pytest.raises(SpaceInputError, match="subalgebra"):
        characteristic_connection(v511, [E(1, 2), E(1, 3), E(1, 4)])


def test_existence_matches_constraint_sign_on_grid(bases):
    grid = np.linspace(0.3, 3.0, 5)
    for a in grid:
        for b in grid:
            for g in grid:
                space = catalog.make_space("vir24", a, b, g)
                res = characteristic_connection(space, bases["X"])
                on_surface = abs(a * b + 4 * g * a - 25 * b * g) < 1e-7 * max(a, b, g)
                assert res.exists == on_surface
    for b in grid:
        for g in grid:
            a = ni_alpha(b, g)
            space = catalog.make_space("vir24", a, b, g)
            assert characteristic_connection(space, bases["X"]).exists


def test_curvature_closed_forms_on_surface(bases):
    for b, g in ((1.0, 1.0), (0.5, 1.5), (2.0, 0.7)):
        a = ni_alpha(b, g)
        space = catalog.make_space("vir24", a, b, g)
        res = characteristic_connection(space, bases["X"])
        r = curvature(space, res.connection)
        x3 = bases["X"][2]
        expect_23 = (1.0 / (5 * b)) * (4 * a / (5 * b) - 5.0) * x3
        expect_45 = -(2 * a / (25 * b * g)) * x3
        assert max_abs(r.matrix(1, 2) - expect_23) < 1e-10
        assert max_abs(r.matrix(3, 4) - expect_45) < 1e-10
        for i, j in itertools.combinations(range(5), 2):
            if (i, j) not in ((1, 2), (3, 4)):
                assert max_abs(r.matrix(i, j)) < 1e-10


def test_curvature_at_5_1_1(v511, bases):
    res = characteristic_connection(v511, bases["X"])
    r = curvature(v511, res.connection)
    assert max_abs(r.matrix(1, 2) + bases["X"][2] / 5.0) < 1e-12


def test_holonomy_dimensions(v511, w_space, bases):
    cc = characteristic_connection(v511, bases["X"])
    hol = holonomy_algebra(v511, cc.connection)
    assert len(hol) == 1
    x3 = bases["X"][2]
    coef = frob(hol[0], x3) / frob(x3, x3)
    assert max_abs(hol[0] - coef * x3) < 1e-10

    ccw = characteristic_connection(w_space, bases["Y"])
    assert len(holonomy_algebra(w_space, ccw.connection)) == 3

    assert len(holonomy_algebra(v511, levi_civita(v511))) == 10


def test_holonomy_contained_in_target(w_space, bases):
    ccw = characteristic_connection(w_space, bases["Y"])
    span = np.stack([y.reshape(-1) for y in bases["Y"]])
    for h in holonomy_algebra(w_space, ccw.connection):
        coef, *_ = np.linalg.lstsq(span.T, h.reshape(-1), rcond=None)
        assert max_abs(span.T @ coef - h.reshape(-1)) < 1e-9


def test_covariant_derivative_parallel_torsion(v511, bases):
    res = characteristic_connection(v511, bases["X"])
    grads = covariant_derivative(v511, res.connection, res.torsion.components)
    assert max(max_abs(g) for g in grads) < 1e-12


def test_covariant_derivative_wir_values(w_space, bases):
    res = characteristic_connection(w_space, bases["Y"])
    grads = covariant_derivative(w_space, res.connection, res.torsion.components)
    assert max_abs(grads[1] + 6.0 * basis_form((2, 3, 4))) < 1e-9
    assert max_abs(grads[2] - 6.0 * basis_form((1, 3, 4))) < 1e-9
    for i in (0, 3, 4):
        assert max_abs(grads[i]) < 1e-9


def test_covariant_derivative_rejects_non_invariant(v511):
    conn = levi_civita(v511)
    with pytest.raises(SpaceInputError, match="invariant"):
        covariant_derivative(v511, conn, np.eye(5)[1])


def test_canonical_connection_annihilates_invariants(v511):
    zero = ConnectionMap(v511, np.zeros((5, 5, 5)))
    for k in (1, 3):
        for form in invariant_forms(v511, k):
            grads = covariant_derivative(v511, zero, form)
            assert max(max_abs(g) for g in grads) == 0.0


def test_exterior_derivative_eta(v511):
    a, b, g = 5.0, 1.0, 1.0
    deta = exterior_derivative(v511, np.eye(5)[0])
    expected = (2 * sqrt(a) / (5 * b)) * basis_form((1, 2)) - (sqrt(a) / (5 * g)) * basis_form((3, 4))
    assert max_abs(deta - expected) < 1e-12


def test_exterior_derivative_wir_invariant_3forms(w_space):
    de123 = exterior_derivative(w_space, E123)
    assert max_abs(de123 + 2.0 * sqrt(3.0) * basis_form((1, 2, 3, 4))) < 1e-12
    assert max_abs(exterior_derivative(w_space, E145)) < 1e-12


def test_exterior_derivative_of_torsion_follows_from_components(w_space, bases):
    # dT = m * d(e123) + n * d(e145) with m = n = -2 sqrt(3)/sqrt(gamma):
    # both pinned values force the e2345 coefficient 12/gamma.
    res = characteristic_connection(w_space, bases["Y"])
    dt = exterior_derivative(w_space, res.torsion.components)
    assert max_abs(dt - 12.0 * basis_form((1, 2, 3, 4))) < 1e-9


def test_exterior_derivative_squares_to_zero(v511, w_space):
    for space in (v511, w_space):
        for k in (0, 1, 2, 3):
            for form in invariant_forms(space, k):
                dd = exterior_derivative(space, exterior_derivative(space, form))
                assert max_abs(dd) < 1e-10


def test_exterior_derivative_constant_and_rejection(v511):
    assert max_abs(exterior_derivative(v511, np.array(1.0))) == 0.0
    with pytest.raises(SpaceInputError, match="invariant"):
        exterior_derivative(v511, np.eye(5)[1])


def test_torsion_divergence_zero(v511, w_space, v_sasaki, bases):
    for space, label in ((v511, "X"), (v_sasaki, "X"), (w_space, "Y")):
        res = characteristic_connection(space, bases[label])
        lc = levi_civita(space)
        assert max_abs(torsion_divergence(space, lc, res.torsion.components)) < 1e-9
    assert max_abs(torsion_divergence(v511, levi_civita(v511), np.zeros((5, 5, 5)))) == 0.0


def test_levi_civita_has_no_torsion(v511, vtilde, w_space):
    for space in (v511, vtilde, w_space):
        t = torsion(space, levi_civita(space))
        assert max_abs(t.components) < 1e-9


def test_naturally_reductive_cases(v511, v_sasaki, w_space, bases):
    assert is_naturally_reductive(v511, characteristic_connection(v511, bases["X"]).torsion)
    space = catalog.make_space("vir24", 2.5, 0.5, 0.5)  # on the alpha = 5 beta = 5 gamma ray
    assert is_naturally_reductive(space, characteristic_connection(space, bases["X"]).torsion)
    assert not is_naturally_reductive(v_sasaki, characteristic_connection(v_sasaki, bases["X"]).torsion)
    assert not is_naturally_reductive(w_space, characteristic_connection(w_space, bases["Y"]).torsion)


def test_torsion_type_decomposition_projection(bases):
    x3 = bases["X"][2]
    part_in, part_out = torsion_type_decomposition(E123, bases["X"])
    skew_in = form_to_skew(hodge3(part_in))
    assert max_abs(skew_in - 0.4 * x3) < 1e-12  # <E45, X3>/<X3, X3> = 2/5
    assert max_abs((part_in + part_out) - E123) < 1e-12


def test_torsion_type_decomposition_edge_cases(v511, bases):
    part_in, part_out = torsion_type_decomposition(np.zeros((5, 5, 5)), bases["X"])
    assert max_abs(part_in) == 0.0 and max_abs(part_out) == 0.0
    res = characteristic_connection(v511, bases["X"])
    a, b = torsion_type_decomposition(res.torsion.components, bases["X"])
    assert max_abs(a + b - res.torsion.components) < 1e-12
    with pytest.raises(SpaceInputError):
        torsion_type_decomposition(E123, bases["X"][:2])
