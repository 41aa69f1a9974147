import json
from math import sqrt

import numpy as np
import pytest

from so3ir import catalog
from so3ir.errors import InvariantViolation, SpaceInputError
from so3ir.forms import max_abs
from so3ir.spacefile import (
    build_from_file,
    dict_to_space_parts,
    load_space_file,
    parse_value,
    save_space_file,
    space_to_dict,
)


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("1/2", 0.5),
        ("-4/3", -4.0 / 3.0),
        ("7", 7.0),
        ("sqrt(3)", sqrt(3.0)),
        ("-sqrt(5)", -sqrt(5.0)),
        ("2*sqrt(3)", 2.0 * sqrt(3.0)),
        ("-2*sqrt(5)/5", -2.0 * sqrt(5.0) / 5.0),
        ("1/2*sqrt(2)", sqrt(2.0) / 2.0),
        ("2.5e-3", 0.0025),
        (" 2 * sqrt(3) ", 2.0 * sqrt(3.0)),
        (0.25, 0.25),
        (3, 3.0),
    ],
)
def test_parse_value(raw, expected):
    assert parse_value(raw) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("raw", ["sqr(2)", "", "1//2", "sqrt()", "two"])
def test_parse_value_rejects(raw):
    with pytest.raises(SpaceInputError):
        parse_value(raw)


def test_roundtrip_is_bit_exact(tmp_path):
    parts = catalog.space_definition("vir24", 5.0, 1.0, 1.0)
    p1 = tmp_path / "space.json"
    p2 = tmp_path / "space2.json"
    save_space_file(p1, **parts)
    algebra1, h1, summands1, scales1 = load_space_file(p1)
    save_space_file(p2, algebra1, h1, summands1, scales1)
    algebra2, h2, summands2, scales2 = load_space_file(p2)
    assert np.array_equal(algebra1.c, algebra2.c)  # bit-exact
    assert np.array_equal(h1, h2)
    assert summands1 == summands2 and scales1 == scales2
    assert p1.read_bytes() == p2.read_bytes()


def test_loaded_space_reproduces_catalog(tmp_path):
    for name, kwargs in (
        ("vir24", {"alpha": 2.0, "beta": 0.7, "gamma": 1.3}),
        ("wir", {"alpha": 14.0, "beta": 1.0, "gamma": 1.0, "mu": catalog.wir_admissible_mu(14.0, 1.0)[0]}),
        ("su3_so3_isotropy", {"alpha": 1.0}),
    ):
        parts = catalog.space_definition(name, **kwargs)
        path = tmp_path / f"{name}.json"
        save_space_file(path, **parts)
        space = build_from_file(path)
        direct = catalog.make_space(name, **kwargs)
        assert max_abs(space.brackets_m - direct.brackets_m) < 1e-12
        assert max_abs(space.brackets_h - direct.brackets_h) < 1e-12


def test_exact_value_strings_accepted():
    data = {
        "dim": 3,
        "basis_labels": ["a", "b", "c"],
        "structure_constants": [[0, 1, 2, "sqrt(4)"], [1, 2, 0, "1"], [2, 0, 1, "1/1"]],
        "h_basis": [["0", "0", "1"]],
        "m_summands": [[0, 1]],
        "metric_scales": ["1/2"],
    }
    algebra, h, summands, scales = dict_to_space_parts(data)
    assert algebra.c[0, 1, 2] == 2.0
    assert algebra.c[1, 0, 2] == -2.0
    assert scales == [0.5]


def test_missing_field_and_bad_entry_diagnostics():
    with pytest.raises(SpaceInputError, match="missing field"):
        dict_to_space_parts({"dim": 2})
    data = {
        "dim": 2,
        "basis_labels": ["a", "b"],
        "structure_constants": [[0, 1, 1, "oops"]],
        "h_basis": [[1, 0]],
        "m_summands": [[1]],
        "metric_scales": [1],
    }
    with pytest.raises(SpaceInputError, match=r"structure_constants\[0\]"):
        dict_to_space_parts(data)
    data["structure_constants"] = [[0, 1, 7, "1"]]
    with pytest.raises(SpaceInputError, match="out of range"):
        dict_to_space_parts(data)


def test_bad_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"dim": 2,\n  "oops"\n}')
    with pytest.raises(SpaceInputError, match="line"):
        load_space_file(path)


def test_jacobi_violation_detected(tmp_path):
    g = catalog.so3_algebra()
    c = g.c.copy()
    # [e0, e1] = e2 + e0 breaks the Jacobi identity while staying antisymmetric
    c[0, 1, 0] += 1.0
    c[1, 0, 0] -= 1.0
    from so3ir.algebra import LieAlgebra

    bad = LieAlgebra(3, g.basis_labels, c)
    path = tmp_path / "bad.json"
    save_space_file(path, bad, np.eye(3)[[2]], [[0, 1]], [1.0])
    with pytest.raises(InvariantViolation, match="Jacobi"):
        build_from_file(path)


def test_space_to_dict_stores_upper_triplets():
    parts = catalog.space_definition("vir24", 1.0, 1.0, 1.0)
    data = space_to_dict(parts["algebra"], parts["h_basis"], parts["m_summands"], parts["metric_scales"])
    for i, j, k, _ in data["structure_constants"]:
        assert i < j
