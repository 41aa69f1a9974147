"""Built-in homogeneous spaces with irreducibly embedded SO(2)/SO(3) isotropy.

Each space is constructed twice over: `make_space` derives the frame brackets
from the ambient Lie algebra and then validates them entry by entry against a
hard-coded commutator table, so a transcription slip in either route fails
loudly instead of propagating into curvature numbers.
"""

from functools import lru_cache
from math import sqrt

import numpy as np

from .algebra import (
    LieAlgebra,
    Representation,
    ReductiveSpace,
    algebra_from_matrix_basis,
    build_reductive_space,
    change_of_basis,
    direct_sum,
)
from .errors import InvariantViolation, SpaceInputError
from .forms import E, max_abs

CATALOG_IDS = ("vir24", "vtilde24", "wir", "su3_so3_isotropy")

SQRT3 = sqrt(3.0)


def so3_matrices(n: int = 3) -> list[np.ndarray]:
    """Generators s1 = E(2,3), s2 = E(3,1), s3 = E(1,2) acting on the first three slots."""
    return [E(2, 3, n), E(3, 1, n), E(1, 2, n)]


def so21_matrices() -> list[np.ndarray]:
    a1 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, -1.0, 0.0]])
    a2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    a3 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    return [a1, a2, a3]


def su3_matrices() -> list[np.ndarray]:
    """Basis a1..a3 (rotations), b1..b5 (traceless i-symmetric) of su(3)."""
    a = [m.astype(complex) for m in so3_matrices()]
    b1 = 1j * np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
    b2 = 1j * np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex)
    b3 = 1j * np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
    b4 = 1j * np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=complex)
    b5 = (1j / SQRT3) * np.array([[1, 0, 0], [0, 1, 0], [0, 0, -2]], dtype=complex)
    return a + [b1, b2, b3, b4, b5]


@lru_cache(maxsize=None)
def so3_algebra() -> LieAlgebra:
    return algebra_from_matrix_basis(so3_matrices(), ("s1", "s2", "s3"))


@lru_cache(maxsize=None)
def so21_algebra() -> LieAlgebra:
    return algebra_from_matrix_basis(so21_matrices(), ("a1", "a2", "a3"))


@lru_cache(maxsize=None)
def su3_algebra() -> LieAlgebra:
    labels = ("a1", "a2", "a3", "b1", "b2", "b3", "b4", "b5")
    return algebra_from_matrix_basis(su3_matrices(), labels)


@lru_cache(maxsize=None)
def so3_so3_algebra() -> LieAlgebra:
    a = so3_algebra()
    return direct_sum(a, a, ("a1", "a2", "a3", "b1", "b2", "b3"))


@lru_cache(maxsize=None)
def so21_so3_algebra() -> LieAlgebra:
    return direct_sum(so21_algebra(), so3_algebra(), ("a1", "a2", "a3", "b1", "b2", "b3"))


@lru_cache(maxsize=None)
def r_sl2_r2_algebra() -> LieAlgebra:
    """R + (sl(2,R) acting on R^2); basis (u, X, E+, E-, r1, r2) with u central."""
    c = np.zeros((6, 6, 6))

    def setb(i, j, k, v):
        c[i, j, k] = v
        c[j, i, k] = -v

    setb(1, 2, 2, 2.0)   # [X, E+] = 2 E+
    setb(1, 3, 3, -2.0)  # [X, E-] = -2 E-
    setb(2, 3, 1, 1.0)   # [E+, E-] = X
    setb(1, 4, 4, 1.0)   # [X, r1] = r1
    setb(1, 5, 5, -1.0)  # [X, r2] = -r2
    setb(2, 5, 4, 1.0)   # [E+, r2] = r1
    setb(3, 4, 5, 1.0)   # [E-, r1] = r2
    return LieAlgebra(6, ("u", "X", "E+", "E-", "r1", "r2"), c)


def catalog_algebras() -> dict[str, LieAlgebra]:
    return {
        "so3+so3": so3_so3_algebra(),
        "so21+so3": so21_so3_algebra(),
        "r+sl2r+r2": r_sl2_r2_algebra(),
        "su3": su3_algebra(),
    }


def so3ir_bases() -> dict[str, list[np.ndarray]]:
    """The X, Y and block-diagonal so(3) triples inside so(5)."""
    x1 = SQRT3 * E(1, 3) + E(4, 2) + E(5, 3)
    x2 = SQRT3 * E(2, 1) + E(3, 4) + E(5, 2)
    x3 = E(2, 3) + 2.0 * E(4, 5)
    y1 = -SQRT3 * E(1, 2) + E(3, 5) + E(2, 4)
    y2 = -SQRT3 * E(1, 3) + E(2, 5) - E(3, 4)
    y3 = E(2, 3) + 2.0 * E(4, 5)
    return {"X": [x1, x2, x3], "Y": [y1, y2, y3], "st": so3_matrices(5)}


def su3_isotropy() -> Representation:
    """Isotropy matrices of the 3-dimensional rotation subalgebra of su(3) on its complement."""
    mats = (
        E(1, 2) + E(3, 4) - SQRT3 * E(3, 5),
        -E(1, 3) + E(2, 4) + SQRT3 * E(2, 5),
        -2.0 * E(1, 4) + E(2, 3),
    )
    return Representation(mats, so3_algebra().c)


def wir_admissible_mu(alpha: float, gamma: float) -> tuple[float, float]:
    """Embedding parameters that make the W-space structure nearly integrable.

    Roots of sqrt(3)*gamma*mu^2 - sqrt(alpha*gamma)*mu + sqrt(3)*gamma = 0,
    returned as (minus, plus); they satisfy mu- * mu+ = 1.  Real roots exist
    only for alpha >= 12*gamma.
    """
    if alpha <= 0 or gamma <= 0:
        raise SpaceInputError("alpha and gamma must be positive")
    disc = alpha - 12.0 * gamma
    if disc < 0:
        raise SpaceInputError(
            f"no SO(3)_ir-compatible embedding: requires alpha >= 12*gamma, got alpha={alpha}, gamma={gamma}"
        )
    root = sqrt(disc)
    denom = 2.0 * sqrt(3.0 * gamma)
    return ((sqrt(alpha) - root) / denom, (sqrt(alpha) + root) / denom)


def _stiefel_adapted(base: LieAlgebra) -> LieAlgebra:
    rows = np.array(
        [
            [0, 0, 1, 0, 0, 2],   # a3 + 2 b3
            [0, 0, -2, 0, 0, 1],  # b3 - 2 a3
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
        ],
        dtype=float,
    )
    return change_of_basis(base, rows, ("e0", "e1", "e2", "e3", "e4", "e5"))


@lru_cache(maxsize=None)
def _vir24_adapted() -> LieAlgebra:
    return _stiefel_adapted(so3_so3_algebra())


@lru_cache(maxsize=None)
def _vtilde24_adapted() -> LieAlgebra:
    return _stiefel_adapted(so21_so3_algebra())


def _wir_adapted(mu: float) -> LieAlgebra:
    rows = np.array(
        [
            [mu, 0, 1, -1, 0, 0],   # E+ - E- + mu*u
            [1, 0, -mu, mu, 0, 0],  # u - mu*(E+ - E-)
            [0, 0, 0, 0, 0, 1],     # r2
            [0, 0, 0, 0, 1, 0],     # r1
            [0, 0, 1, 1, 0, 0],     # E+ + E-
            [0, 1, 0, 0, 0, 0],     # X
        ],
        dtype=float,
    )
    return change_of_basis(r_sl2_r2_algebra(), rows, ("e0", "e1", "e2", "e3", "e4", "e5"))


def _stiefel_table(alpha, beta, gamma, sign):
    """Frame commutators of the twisted Stiefel family; sign=-1 flips the mixed m1 bracket."""
    sa = sqrt(alpha)
    bm = {}
    bh = {}
    bm[(0, 1)] = {2: -2.0 / sa}
    bm[(0, 2)] = {1: 2.0 / sa}
    bm[(0, 3)] = {4: 1.0 / sa}
    bm[(0, 4)] = {3: -1.0 / sa}
    bm[(1, 2)] = {0: sign * (-2.0 * sa / (5.0 * beta))}
    bh[(1, 2)] = sign * (1.0 / (5.0 * beta))
    bm[(3, 4)] = {0: sa / (5.0 * gamma)}
    bh[(3, 4)] = 2.0 / (5.0 * gamma)
    return bm, bh


def _wir_table(alpha, beta, gamma, mu):
    sa = sqrt(alpha)
    sg = sqrt(gamma)
    bm = {}
    bh = {}
    bm[(0, 1)] = {2: -mu / sa}
    bm[(0, 2)] = {1: mu / sa}
    bm[(0, 3)] = {4: -2.0 * mu / sa}
    bm[(0, 4)] = {3: 2.0 * mu / sa}
    bm[(1, 3)] = {2: -1.0 / sg}
    bm[(1, 4)] = {1: 1.0 / sg}
    bm[(2, 3)] = {1: -1.0 / sg}
    bm[(2, 4)] = {2: -1.0 / sg}
    bm[(3, 4)] = {0: 2.0 * mu * sa / (gamma * (mu * mu + 1.0))}
    bh[(3, 4)] = -2.0 / (gamma * (mu * mu + 1.0))
    return bm, bh


def _validate_table(space: ReductiveSpace, table, tol=1e-12) -> None:
    bm_exp, bh_exp = table
    n = space.dim_m
    got_m = space.brackets_m
    got_h = space.brackets_h[:, :, 0]
    exp_m = np.zeros((n, n, n))
    exp_h = np.zeros((n, n))
    for (i, j), comps in bm_exp.items():
        for k, v in comps.items():
            exp_m[i, j, k] = v
            exp_m[j, i, k] = -v
    for (i, j), v in bh_exp.items():
        exp_h[i, j] = v
        exp_h[j, i] = -v
    res = max(max_abs(got_m - exp_m), max_abs(got_h - exp_h))
    if res > tol:
        raise InvariantViolation("frame brackets differ from the catalog commutator table", residual=res)


def make_space(
    name: str,
    alpha: float = 1.0,
    beta: float = 1.0,
    gamma: float = 1.0,
    mu: float | None = None,
) -> ReductiveSpace:
    """Build a catalog space at concrete metric parameters.

    `mu` is the embedding parameter of the "wir" space and is required there;
    the other spaces reject it.  Scales must be positive.
    """
    if name not in CATALOG_IDS:
        raise SpaceInputError(f"unknown catalog space {name!r}; choose from {CATALOG_IDS}")
    if any(p <= 0 for p in (alpha, beta, gamma)):
        raise SpaceInputError("metric parameters must be positive")

    if name == "su3_so3_isotropy":
        g = su3_algebra()
        h = np.eye(8)[:3]
        space = build_reductive_space(g, h, [[3, 4, 5, 6, 7]], [alpha])
        expected = [m.matrix if hasattr(m, "matrix") else m for m in su3_isotropy().matrices]
        for got, exp in zip(space.isotropy, expected):
            res = max_abs(got - exp)
            if res > 1e-12:
                raise InvariantViolation("isotropy differs from the printed matrices", residual=res)
        return space

    if name == "wir":
        if mu is None:
            raise SpaceInputError("the wir space needs an embedding parameter mu (use wir_admissible_mu)")
        g = _wir_adapted(float(mu))
        table = _wir_table(alpha, beta, gamma, float(mu))
    else:
        if mu is not None:
            raise SpaceInputError(f"{name} does not take an embedding parameter")
        g = _vir24_adapted() if name == "vir24" else _vtilde24_adapted()
        table = _stiefel_table(alpha, beta, gamma, 1.0 if name == "vir24" else -1.0)

    h = np.zeros((1, 6))
    h[0, 0] = 1.0
    space = build_reductive_space(g, h, [[1], [2, 3], [4, 5]], [alpha, beta, gamma])
    iso_res = max_abs(space.isotropy[0] - (E(2, 3) + 2.0 * E(4, 5)))
    if iso_res > 1e-12:
        raise InvariantViolation("isotropy differs from E(2,3) + 2 E(4,5)", residual=iso_res)
    _validate_table(space, table)
    return space


def space_definition(
    name: str,
    alpha: float = 1.0,
    beta: float = 1.0,
    gamma: float = 1.0,
    mu: float | None = None,
) -> dict:
    """Pieces of a space-definition file (algebra, h, summands, scales) for export."""
    make_space(name, alpha, beta, gamma, mu=mu)  # validates id and parameters
    if name == "su3_so3_isotropy":
        return {
            "algebra": su3_algebra(),
            "h_basis": np.eye(8)[:3],
            "m_summands": [[3, 4, 5, 6, 7]],
            "metric_scales": [alpha],
        }
    if name == "wir":
        g = _wir_adapted(float(mu))
    else:
        g = _vir24_adapted() if name == "vir24" else _vtilde24_adapted()
    h = np.zeros((1, 6))
    h[0, 0] = 1.0
    return {
        "algebra": g,
        "h_basis": h,
        "m_summands": [[1], [2, 3], [4, 5]],
        "metric_scales": [alpha, beta, gamma],
    }
