"""Invariant metric connections via equivariant linear maps on the complement.

An invariant connection is a linear map L: m -> so(m), stored as one skew
matrix per frame vector.  Torsion, curvature, holonomy and the search for a
connection with totally antisymmetric torsion are all linear algebra in the
coefficients of L over a chosen target subalgebra of so(m).
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_TOL, NULLSPACE_RTOL, ReductiveSpace
from .errors import InvariantViolation, SpaceInputError
from .forms import (
    basis_form,
    derivation_action,
    form_to_skew,
    frob,
    hodge2,
    hodge3,
    lex_combos,
    max_abs,
    nullspace,
    skew_to_form,
)


@dataclass(frozen=True)
class ConnectionMap:
    """Wang datum of an invariant metric connection: lambdas[i] = L(e_i)."""

    space: ReductiveSpace
    lambdas: np.ndarray = field(repr=False)  # (n, n, n)

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        n = self.space.dim_m
        if lam.shape != (n, n, n):
            raise SpaceInputError(f"connection map needs shape {(n, n, n)}")
        object.__setattr__(self, "lambdas", lam)

    def skew_residual(self) -> float:
        return max_abs(self.lambdas + np.swapaxes(self.lambdas, 1, 2))

    def equivariance_residual(self) -> float:
        worst = 0.0
        for a in self.space.isotropy:
            lhs = np.einsum("ji,jpq->ipq", a, self.lambdas)
            rhs = np.einsum("pr,irq->ipq", a, self.lambdas) - np.einsum("ipr,rq->ipq", self.lambdas, a)
            worst = max(worst, max_abs(lhs - rhs))
        return worst


@dataclass(frozen=True)
class TorsionTensor:
    """Lowered torsion components T[i, j, k] = g(T(e_i, e_j), e_k)."""

    components: np.ndarray = field(repr=False)
    totally_antisymmetric: bool = False

    def pair_antisymmetry_residual(self) -> float:
        return max_abs(self.components + np.swapaxes(self.components, 0, 1))

    def total_antisymmetry_residual(self) -> float:
        return max_abs(self.components + np.swapaxes(self.components, 1, 2))

    def as_form(self) -> np.ndarray:
        if not self.totally_antisymmetric:
            raise SpaceInputError("torsion is not totally antisymmetric; no 3-form attached")
        return self.components


@dataclass(frozen=True)
class CurvatureTensor:
    """components[i, j] is the skew matrix R(e_i, e_j) acting on m."""

    components: np.ndarray = field(repr=False)  # (n, n, n, n)

    def matrix(self, i: int, j: int) -> np.ndarray:
        return self.components[i, j]


@dataclass(frozen=True)
class CharacteristicConnection:
    exists: bool
    residual: float
    connection: ConnectionMap | None = None
    torsion: TorsionTensor | None = None
    unique: bool = True
    homogeneous_basis: tuple[ConnectionMap, ...] = ()


def subalgebra_closure_residual(matrices, tol: float = DEFAULT_TOL) -> float:
    """How far a list of skew matrices is from spanning a bracket-closed subspace."""
    mats = [np.asarray(m, dtype=float) for m in matrices]
    span = np.stack([m.reshape(-1) for m in mats], axis=1)
    worst = max((max_abs(m + m.T) for m in mats), default=0.0)
    for a, b in itertools.product(mats, mats):
        w = (a @ b - b @ a).reshape(-1)
        coef, *_ = np.linalg.lstsq(span, w, rcond=None)
        worst = max(worst, max_abs(span @ coef - w))
    return worst


_CLOSURE_CACHE: dict = {}


def _target_basis(space: ReductiveSpace, target) -> list[np.ndarray]:
    if target is None:
        from .algebra import so_matrix_basis

        return so_matrix_basis(space.dim_m)
    mats = [np.asarray(m, dtype=float) for m in target]
    if not mats:
        return []
    key = tuple(np.round(m, 12).tobytes() for m in mats)
    res = _CLOSURE_CACHE.get(key)
    if res is None:
        res = subalgebra_closure_residual(mats)
        _CLOSURE_CACHE[key] = res
    if res > DEFAULT_TOL:
        raise SpaceInputError(f"target is not a subalgebra of skew matrices (residual {res:.3e})")
    return mats


def _map_from_coeffs(space: ReductiveSpace, basis, coeffs: np.ndarray) -> ConnectionMap:
    n = space.dim_m
    lam = np.zeros((n, n, n))
    if basis:
        lam = np.einsum("it,tpq->ipq", coeffs.reshape(n, len(basis)), np.stack(basis))
    return ConnectionMap(space, lam)


def _equivariance_rows(space: ReductiveSpace, basis) -> np.ndarray:
    """Linear system whose kernel is the space of equivariant maps into span(basis)."""
    n, t = space.dim_m, len(basis)
    rows = []
    for a in space.isotropy:
        block = np.zeros((n, n, n, n, t))
        for i in range(n):
            for j in range(n):
                for s, b in enumerate(basis):
                    block[i, :, :, j, s] += a[j, i] * b
            for s, b in enumerate(basis):
                block[i, :, :, i, s] -= a @ b - b @ a
        rows.append(block.reshape(n * n * n, n * t))
    return np.vstack(rows) if rows else np.zeros((0, n * t))


def equivariant_wang_maps(space: ReductiveSpace, target=None) -> list[ConnectionMap]:
    """Basis of the space of isotropy-equivariant maps m -> span(target)."""
    basis = _target_basis(space, target)
    if not basis:
        return [ConnectionMap(space, np.zeros((space.dim_m,) * 3))]
    null = nullspace(_equivariance_rows(space, basis), NULLSPACE_RTOL)
    return [_map_from_coeffs(space, basis, v) for v in null]


_SYSTEM_CACHE: dict = {}


def _joint_system(space: ReductiveSpace, basis, rtol):
    """Equivariance + antisymmetry system matrix, its pseudoinverse and kernel.

    The matrix depends only on the isotropy matrices and the target basis, not
    on the metric scales, so parameter sweeps reuse one factorization.
    """
    n, t = space.dim_m, len(basis)
    # Keys tolerate last-bit float jitter: a 1e-12 perturbation of the system
    # is immaterial against the 1e-7 existence threshold.
    key = (
        n,
        tuple(np.round(a, 12).tobytes() for a in space.isotropy),
        tuple(np.round(b, 12).tobytes() for b in basis),
        rtol,
    )
    hit = _SYSTEM_CACHE.get(key)
    if hit is not None:
        return hit
    eq_rows = _equivariance_rows(space, basis)
    pairs = [(j, k) for j in range(n) for k in range(j, n)]
    tors = np.zeros((n, len(pairs), n, t))
    for i in range(n):
        for p, (j, k) in enumerate(pairs):
            for s, b in enumerate(basis):
                tors[i, p, i, s] += b[k, j] + b[j, k]
                tors[i, p, j, s] -= b[k, i]
                tors[i, p, k, s] -= b[j, i]
    m = np.vstack([eq_rows, tors.reshape(-1, n * t)])
    value = (m, np.linalg.pinv(m), nullspace(m, rtol))
    _SYSTEM_CACHE[key] = value
    return value


def torsion(space: ReductiveSpace, conn: ConnectionMap, tol: float = DEFAULT_TOL) -> TorsionTensor:
    """Torsion T(X, Y) = L(X)Y - L(Y)X - [X, Y]_m, lowered with the frame metric."""
    lam = conn.lambdas
    t = np.einsum("ikj->ijk", lam) - np.einsum("jki->ijk", lam) - space.brackets_m
    total = max_abs(t + np.swapaxes(t, 1, 2)) < tol
    return TorsionTensor(t, totally_antisymmetric=total)


def curvature(space: ReductiveSpace, conn: ConnectionMap) -> CurvatureTensor:
    """Curvature R(X, Y) = [L(X), L(Y)] - L([X,Y]_m) - iso([X,Y]_h)."""
    lam = conn.lambdas
    comm = np.einsum("ipr,jrq->ijpq", lam, lam)
    comm = comm - np.swapaxes(comm, 0, 1)
    r = comm - np.einsum("ijk,kpq->ijpq", space.brackets_m, lam)
    r -= np.einsum("ija,apq->ijpq", space.brackets_h, np.stack(space.isotropy))
    return CurvatureTensor(r)


def characteristic_connection(
    space: ReductiveSpace,
    target,
    exists_tol: float = 1e-7,
    rtol: float = NULLSPACE_RTOL,
) -> CharacteristicConnection:
    """Equivariant connection into the target whose torsion is a 3-form, if any.

    Solves the joint linear system {equivariance} and {torsion totally
    antisymmetric} by least squares; existence is decided by the best
    residual.  A non-unique solution is reported through `unique=False`
    together with a basis of homogeneous directions.
    """
    basis = _target_basis(space, target)
    n, t = space.dim_m, len(basis)
    if t == 0:
        tz = torsion(space, ConnectionMap(space, np.zeros((n, n, n))))
        ok = tz.total_antisymmetry_residual() < exists_tol
        return CharacteristicConnection(
            exists=ok,
            residual=tz.total_antisymmetry_residual(),
            connection=ConnectionMap(space, np.zeros((n, n, n))) if ok else None,
            torsion=tz if ok else None,
        )

    m, pinv, hom = _joint_system(space, basis, rtol)
    pairs = [(j, k) for j in range(n) for k in range(j, n)]
    rhs = np.zeros((n, len(pairs)))
    for i in range(n):
        for p, (j, k) in enumerate(pairs):
            rhs[i, p] = space.brackets_m[i, j, k] + space.brackets_m[i, k, j]
    b = np.concatenate([np.zeros(m.shape[0] - rhs.size), rhs.reshape(-1)])
    coef = pinv @ b
    residual = max_abs(m @ coef - b)
    if residual >= exists_tol:
        return CharacteristicConnection(exists=False, residual=residual, unique=hom.shape[0] == 0)
    conn = _map_from_coeffs(space, basis, coef)
    return CharacteristicConnection(
        exists=True,
        residual=residual,
        connection=conn,
        torsion=torsion(space, conn),
        unique=hom.shape[0] == 0,
        homogeneous_basis=tuple(_map_from_coeffs(space, basis, v) for v in hom),
    )


def holonomy_algebra(space: ReductiveSpace, conn: ConnectionMap, rtol: float = NULLSPACE_RTOL) -> list[np.ndarray]:
    """Holonomy algebra: curvature span closed under brackets with im(L) and itself."""
    n = space.dim_m
    curv = curvature(space, conn).components.reshape(-1, n * n)
    span = _independent_rows(curv, rtol)
    lam = [conn.lambdas[i] for i in range(n)]
    while True:
        mats = [v.reshape(n, n) for v in span]
        cand = [(a @ b - b @ a).reshape(-1) for a in lam for b in mats]
        cand += [(x @ y - y @ x).reshape(-1) for x, y in itertools.combinations(mats, 2)]
        new = _independent_rows(np.vstack([span, *cand]) if cand else span, rtol)
        if new.shape[0] == span.shape[0]:
            break
        span = new
    return [np.sqrt(2.0) * v.reshape(n, n) for v in span]  # unit norm under tr(A^T B)/2


def _independent_rows(rows: np.ndarray, rtol: float) -> np.ndarray:
    rows = np.atleast_2d(rows)
    if rows.size == 0:
        return rows.reshape(0, rows.shape[-1])
    u, s, vt = np.linalg.svd(rows, full_matrices=False)
    rank = int(np.sum(s > rtol * s[0])) if s.size else 0
    return vt[:rank]


def _check_invariant(space: ReductiveSpace, tensor: np.ndarray, tol: float) -> None:
    worst = max((max_abs(derivation_action(a, tensor)) for a in space.isotropy), default=0.0)
    if worst > tol:
        raise SpaceInputError(f"tensor is not isotropy-invariant (residual {worst:.3e})")


def covariant_derivative(
    space: ReductiveSpace,
    conn: ConnectionMap,
    tensor: np.ndarray,
    invariant: bool = True,
    tol: float = DEFAULT_TOL,
) -> list[np.ndarray]:
    """Covariant derivatives of an invariant tensor in each frame direction.

    Invariant tensors are parallel for the canonical connection, so the
    derivative in direction e_i is the slotwise action of L(e_i).
    """
    tensor = np.asarray(tensor, dtype=float)
    if invariant:
        _check_invariant(space, tensor, tol)
    return [derivation_action(conn.lambdas[i], tensor) for i in range(space.dim_m)]


def exterior_derivative(space: ReductiveSpace, omega: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Exterior derivative of an invariant form via frame brackets.

    d w(X_0..X_k) = sum_{i<j} (-1)^{i+j} w([X_i, X_j]_m, ..no X_i.., ..no X_j..);
    the sign convention is pinned by d(e_1) on the twisted Stiefel space.
    """
    omega = np.asarray(omega, dtype=float)
    _check_invariant(space, omega, tol)
    n = space.dim_m
    k = omega.ndim
    if k == 0:
        return np.zeros(n)
    out = np.zeros((n,) * (k + 1))
    for combo in lex_combos(n, k + 1):
        val = 0.0
        for a, b in itertools.combinations(range(k + 1), 2):
            rest = tuple(combo[s] for s in range(k + 1) if s not in (a, b))
            br = space.brackets_m[combo[a], combo[b]]
            val += (-1) ** (a + b) * float(np.dot(br, omega[(slice(None),) + rest]))
        out += val * basis_form(combo, n)
    return out


def torsion_divergence(space: ReductiveSpace, levi_civita_map: ConnectionMap, t_form: np.ndarray) -> np.ndarray:
    """Codifferential of an invariant 3-form: -sum_i e_i -| grad_{e_i} T."""
    t_form = np.asarray(t_form, dtype=float)
    grads = covariant_derivative(space, levi_civita_map, t_form)
    out = np.zeros(t_form.shape[1:])
    for i, g in enumerate(grads):
        out -= g[i]
    return out


def is_naturally_reductive(space: ReductiveSpace, tors: TorsionTensor, tol: float = DEFAULT_TOL) -> bool:
    """True when T(X, Y, Z) = -g([X, Y]_m, Z) on the frame."""
    if not tors.totally_antisymmetric:
        raise SpaceInputError("natural reductivity is defined for totally antisymmetric torsion")
    return max_abs(tors.components + space.brackets_m) < tol


def torsion_type_decomposition(t_form: np.ndarray, subalg, tol: float = DEFAULT_TOL):
    """Split a 3-form on R^5 into the part dual to a subalgebra and its complement.

    The form is Hodge-dualized to a 2-form, identified with a skew matrix, and
    orthogonally projected (inner product tr(A^T B)/2) onto the span of the
    3-dimensional subalgebra; both parts return as 3-forms summing to the input.
    """
    t_form = np.asarray(t_form, dtype=float)
    if t_form.shape != (5, 5, 5):
        raise SpaceInputError("torsion type decomposition needs a 3-form on R^5")
    mats = [np.asarray(m, dtype=float) for m in subalg]
    if len(mats) != 3:
        raise SpaceInputError("subalgebra must be 3-dimensional")
    res = subalgebra_closure_residual(mats)
    if res > tol:
        raise SpaceInputError(f"subalgebra is not bracket-closed (residual {res:.3e})")
    skew = form_to_skew(hodge3(t_form))
    gram = np.array([[frob(a, b) for b in mats] for a in mats])
    rhs = np.array([frob(a, skew) for a in mats])
    coef = np.linalg.solve(gram, rhs)
    part_in = sum(c * m for c, m in zip(coef, mats))
    part_out = skew - part_in
    return hodge2(skew_to_form(part_in)), hodge2(skew_to_form(part_out))
