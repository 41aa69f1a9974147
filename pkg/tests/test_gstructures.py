from math import sqrt

import numpy as np
import pytest

from conftest import ni_alpha
from so3ir import catalog
from so3ir.connections import characteristic_connection, exterior_derivative
from so3ir.errors import SpaceInputError
from so3ir.forms import E, basis_form, max_abs
from so3ir.gstructures import (
    contact_characteristic_torsion,
    invariant_almost_contact,
    nearly_integrable_defect,
    nijenhuis,
    sasaki_defect,
    standard_upsilon,
    upsilon_from_subalgebra,
)


def test_standard_upsilon_axioms():
    ups = standard_upsilon()
    assert ups.symmetry_residual() == 0.0
    assert ups.trace_residual() < 1e-12
    assert ups.reconstruction_residual(samples=100) < 1e-12


def test_standard_upsilon_entries():
    ups = standard_upsilon()
    assert ups.components[0, 0, 0] == 1.0
    assert ups.components[1, 2, 3] == pytest.approx(-sqrt(3.0) / 2.0, abs=1e-15)
    e2 = np.eye(5)[1]
    out = ups.operator(e2) @ e2
    expected = 0.5 * np.eye(5)[0] + (sqrt(3.0) / 2.0) * np.eye(5)[4]
    assert max_abs(out - expected) < 1e-14
    op = ups.operator(e2)
    assert max_abs(op @ (op @ e2) - e2) < 1e-14


def test_upsilon_from_x_basis_reproduces_standard(bases):
    ups = upsilon_from_subalgebra(bases["X"])
    assert max_abs(ups.components - standard_upsilon().components) < 1e-10


def test_upsilon_from_y_basis_distinct_but_valid(bases):
    ups = upsilon_from_subalgebra(bases["Y"])
    assert ups.trace_residual() < 1e-10
    assert ups.reconstruction_residual() < 1e-10
    assert max_abs(ups.components - standard_upsilon().components) > 0.1


def test_upsilon_rejects_block_so3(bases):
    with pytest.raises(SpaceInputError, match="no unique invariant cubic"):
        upsilon_from_subalgebra(bases["st"])


def test_nearly_integrable_defect_values(v511, v111, vtilde, w_space, bases):
    ux = upsilon_from_subalgebra(bases["X"])
    uy = upsilon_from_subalgebra(bases["Y"])
    assert nearly_integrable_defect(v511, ux) < 1e-9
    assert nearly_integrable_defect(v111, ux) > 0.01
    assert nearly_integrable_defect(vtilde, ux) < 1e-9
    assert nearly_integrable_defect(w_space, uy) < 1e-9
    inadmissible = catalog.make_space("wir", 12.0, 1.0, 1.0, mu=0.5)
    assert nearly_integrable_defect(inadmissible, uy) > 0.01


def test_nearly_integrable_defect_rejects_non_invariant(v511):
    from so3ir.gstructures import UpsilonTensor
    from so3ir.forms import symmetrize

    rng = np.random.default_rng(8)
    bad = UpsilonTensor(symmetrize(rng.standard_normal((5, 5, 5))))
    with pytest.raises(SpaceInputError, match="invariant"):
        nearly_integrable_defect(v511, bad)


def test_defect_zero_exactly_on_constraint_surface(bases):
    ux = upsilon_from_subalgebra(bases["X"])
    grid = np.linspace(0.3, 2.4, 4)
    for a in grid:
        for b in grid:
            for g in grid:
                space = catalog.make_space("vir24", a, b, g)
                defect = nearly_integrable_defect(space, ux)
                on_surface = abs(a * b + 4 * g * a - 25 * b * g) < 1e-7 * max(a, b, g)
                assert (defect < 1e-7) == on_surface
    for b in grid:
        for g in grid:
            space = catalog.make_space("vir24", ni_alpha(b, g), b, g)
            assert nearly_integrable_defect(space, ux) < 1e-7


def test_invariant_contact_structures(v511, bases):
    structures = invariant_almost_contact(v511)
    assert len(structures) == 2
    assert [s.label for s in structures] == ["+", "-"]
    plus, minus = structures
    assert max_abs(plus.phi - (-E(2, 3) + E(4, 5))) < 1e-12
    assert max_abs(minus.phi - (-E(2, 3) - E(4, 5))) < 1e-12
    for s in structures:
        assert abs(s.xi[0] - 1.0) < 1e-12
        assert s.phi_square_residual() < 1e-12
        assert s.compatibility_residual() < 1e-12
        assert max_abs(exterior_derivative(v511, s.fundamental)) < 1e-10


def test_wir_has_the_same_invariant_structures(w_space):
    structures = invariant_almost_contact(w_space)
    assert len(structures) == 2
    assert max_abs(structures[0].phi - (-E(2, 3) + E(4, 5))) < 1e-12


def test_su3_space_has_no_invariant_direction(su3_space):
    assert invariant_almost_contact(su3_space) == []


def test_nijenhuis_flags_vir24(v511):
    for s in invariant_almost_contact(v511):
        nj = nijenhuis(v511, s)
        assert nj.zero and nj.totally_antisymmetric


def test_nijenhuis_flags_wir(w_space):
    plus, minus = invariant_almost_contact(w_space)
    nj_plus = nijenhuis(w_space, plus)
    assert not nj_plus.zero
    assert not nj_plus.totally_antisymmetric
    nj_minus = nijenhuis(w_space, minus)
    assert nj_minus.zero


def test_sasaki_defect_zero_locus(bases):
    # on the curve alpha = 25 beta^2, gamma = beta/2 both Sasaki conditions hold
    for b in np.linspace(0.1, 0.5, 5):
        on = catalog.make_space("vir24", 25 * b * b, b, b / 2.0)
        plus, minus = invariant_almost_contact(on)
        assert sasaki_defect(on, plus) < 1e-10
        assert sasaki_defect(on, minus) > 0.1
        off = catalog.make_space("vir24", 25 * b * b, b, 0.8 * b)
        plus_off = invariant_almost_contact(off)[0]
        assert sasaki_defect(off, plus_off) > 1e-3


def test_sasaki_point_is_nearly_integrable(v_sasaki, bases):
    plus = invariant_almost_contact(v_sasaki)[0]
    assert sasaki_defect(v_sasaki, plus) < 1e-9
    ux = upsilon_from_subalgebra(bases["X"])
    assert nearly_integrable_defect(v_sasaki, ux) < 1e-9


def test_contact_torsion_matches_characteristic(v_sasaki, bases):
    res = characteristic_connection(v_sasaki, bases["X"])
    for s in invariant_almost_contact(v_sasaki):
        tc = contact_characteristic_torsion(v_sasaki, s)
        assert tc is not None
        assert max_abs(tc - res.torsion.components) < 1e-9


def test_contact_torsion_wir(w_space, bases):
    plus, minus = invariant_almost_contact(w_space)
    assert contact_characteristic_torsion(w_space, plus) is None
    tm = contact_characteristic_torsion(w_space, minus)
    assert tm is not None
    assert max_abs(tm + 2.0 * sqrt(3.0) * basis_form((0, 3, 4))) < 1e-9
    res = characteristic_connection(w_space, bases["Y"])
    diff = tm - res.torsion.components
    assert max_abs(diff - 2.0 * sqrt(3.0) * basis_form((0, 1, 2))) < 1e-9
