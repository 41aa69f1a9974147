import numpy as np

from so3ir.forms import (
    E,
    basis_form,
    derivation_action,
    form_to_skew,
    form_to_vec,
    frob,
    hodge2,
    hodge3,
    interior,
    max_abs,
    skew_to_form,
    vec_to_form,
    wedge,
)


def test_eij_convention():
    a = E(1, 5)
    v = np.zeros(5)
    v[0] = 1.0
    assert max_abs(a @ v - np.eye(5)[4]) < 1e-15  # e1 -> e5
    v5 = np.eye(5)[4]
    assert max_abs(a @ v5 + np.eye(5)[0]) < 1e-15  # e5 -> -e1


def test_wedge_elementary():
    e1 = np.eye(5)[0]
    e2 = np.eye(5)[1]
    w = wedge(e1, e2)
    assert w[0, 1] == 1.0 and w[1, 0] == -1.0
    assert max_abs(w - basis_form((0, 1))) < 1e-15
    w3 = wedge(w, np.eye(5)[2])
    assert max_abs(w3 - basis_form((0, 1, 2))) < 1e-15


def test_wedge_anticommutes_on_odd_forms():
    rng = np.random.default_rng(1)
    a = vec_to_form(rng.standard_normal(5), 5, 1)
    b = vec_to_form(rng.standard_normal(10), 5, 2)
    assert max_abs(wedge(a, b) - wedge(b, a)) < 1e-13  # 1-form with 2-form commutes
    c = vec_to_form(rng.standard_normal(5), 5, 1)
    assert max_abs(wedge(a, c) + wedge(c, a)) < 1e-13


def test_skew_form_identification():
    assert max_abs(skew_to_form(E(1, 5)) - basis_form((0, 4))) < 1e-15
    rng = np.random.default_rng(2)
    m = rng.standard_normal((5, 5))
    m = m - m.T
    assert max_abs(form_to_skew(skew_to_form(m)) - m) < 1e-15


def test_hodge_duals():
    assert max_abs(hodge3(basis_form((0, 1, 2))) - basis_form((3, 4))) < 1e-15
    assert max_abs(hodge3(basis_form((0, 3, 4))) - basis_form((1, 2))) < 1e-15
    rng = np.random.default_rng(3)
    t = vec_to_form(rng.standard_normal(10), 5, 3)
    assert max_abs(hodge2(hodge3(t)) - t) < 1e-13


def test_derivation_action_on_covector():
    # E(1,5) rotates the dual frame the same way it rotates the frame
    e1_form = np.eye(5)[0]
    out = derivation_action(E(1, 5), e1_form)
    assert max_abs(out - np.eye(5)[4]) < 1e-15


def test_interior_product():
    t = basis_form((0, 1, 2))
    v = np.eye(5)[0]
    assert max_abs(interior(v, t) - basis_form((1, 2))) < 1e-15


def test_frob_norms():
    assert frob(E(2, 3), E(2, 3)) == 1.0
    x3 = E(2, 3) + 2.0 * E(4, 5)
    assert frob(x3, x3) == 5.0
    assert frob(E(4, 5), x3) == 2.0


def test_form_vec_roundtrip():
    rng = np.random.default_rng(4)
    vec = rng.standard_normal(10)
    t = vec_to_form(vec, 5, 3)
    assert max_abs(form_to_vec(t) - vec) < 1e-14
